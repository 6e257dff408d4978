// Session state and the inset workflow. All functions are pure or take
// the fetcher as an argument, so the click-to-inset path runs under
// test with a stubbed service.

import { checkChain, zoomAllowed } from "./chain.js";
import { buildJob, withZoom } from "./job.js";
import type {
  ChainStep,
  InsetPrim,
  JobBody,
  ObjectSpec,
  Scene,
  StyleSpec,
  ZoomControls,
} from "./types.js";

export type SceneFetcher = (job: JobBody, signal?: AbortSignal) => Promise<string>;

export interface InsetEntry {
  id: number;
  target: [number, number];
  controls: ZoomControls;
  // the exact bytes the service answered with, never re-serialized
  sceneText: string;
  // parsed view of the same bytes; inset holds anchor, size and child scene
  inset: InsetPrim;
}

export interface Session {
  spec: ObjectSpec;
  chain: ChainStep[];
  style: StyleSpec;
  insets: InsetEntry[];
  nextId: number;
}

export function newSession(spec: ObjectSpec): Session {
  return { spec, chain: [], style: {}, insets: [], nextId: 1 };
}

function insetOf(sceneText: string): InsetPrim {
  const scene = JSON.parse(sceneText) as Scene;
  for (const prim of scene.primitives) {
    if (prim.t === "inset") {
      return prim;
    }
  }
  throw new Error("service scene carries no inset");
}

// click-to-zoom: build the job for the current session plus one zoom
// section, fetch, keep the exact response bytes
export async function fetchInset(
  session: Session,
  target: [number, number],
  controls: ZoomControls,
  fetcher: SceneFetcher,
  signal?: AbortSignal,
): Promise<InsetEntry> {
  const { finalKind, error } = checkChain(session.spec.kind, session.chain);
  if (error !== undefined) {
    throw new Error(error);
  }
  const refusal = zoomAllowed(finalKind, controls.mode);
  if (refusal !== null) {
    throw new Error(refusal);
  }
  const job = withZoom(buildJob(session.spec, session.chain, session.style), target, controls);
  const sceneText = await fetcher(job, signal);
  return {
    id: session.nextId,
    target,
    controls: { ...controls },
    sceneText,
    inset: insetOf(sceneText),
  };
}

export function addInset(session: Session, entry: InsetEntry): Session {
  return { ...session, insets: [...session.insets, entry], nextId: session.nextId + 1 };
}

export function removeInset(session: Session, id: number): Session {
  return { ...session, insets: session.insets.filter((e) => e.id !== id) };
}

// re-query one inset with new controls (mag slider, mode toggle)
export async function requeryInset(
  session: Session,
  id: number,
  controls: ZoomControls,
  fetcher: SceneFetcher,
  signal?: AbortSignal,
): Promise<Session> {
  const old = session.insets.find((e) => e.id === id);
  if (old === undefined) {
    return session;
  }
  const fresh = await fetchInset(session, old.target, controls, fetcher, signal);
  const replaced = { ...fresh, id };
  return {
    ...session,
    insets: session.insets.map((e) => (e.id === id ? replaced : e)),
  };
}

// local download/upload of the session only; nothing is stored remotely

export function sessionToJson(session: Session): string {
  return JSON.stringify({
    spec: session.spec,
    chain: session.chain,
    style: session.style,
    insets: session.insets.map((e) => ({
      target: e.target,
      controls: e.controls,
      sceneText: e.sceneText,
    })),
  });
}

export function sessionFromJson(text: string): Session {
  const raw = JSON.parse(text);
  if (typeof raw !== "object" || raw === null || typeof raw.spec !== "object") {
    throw new Error("not a saved session");
  }
  const session = newSession(raw.spec as ObjectSpec);
  session.chain = Array.isArray(raw.chain) ? raw.chain : [];
  session.style = typeof raw.style === "object" && raw.style !== null ? raw.style : {};
  const insets = Array.isArray(raw.insets) ? raw.insets : [];
  for (const e of insets) {
    session.insets.push({
      id: session.nextId,
      target: e.target,
      controls: e.controls,
      sceneText: e.sceneText,
      inset: insetOf(e.sceneText),
    });
    session.nextId += 1;
  }
  return session;
}
