import { readFileSync } from "node:fs";

import { afterEach, describe, expect, it, vi } from "vitest";

import { fetchSceneText, parseExpr } from "../src/api.js";
import {
  addInset,
  fetchInset,
  newSession,
  removeInset,
  requeryInset,
  sessionFromJson,
  sessionToJson,
} from "../src/state.js";
import type { JobBody, ObjectSpec } from "../src/types.js";

function fixture(name: string): string {
  return readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8");
}

const FIG1: ObjectSpec = {
  kind: "form1",
  comps: ["y*sin(x)", "-x*cos(y)"],
  x: { min: -5, max: 5, n: 21 },
  y: { min: -5, max: 5, n: 21 },
};

const VF: ObjectSpec = {
  kind: "vf",
  comps: ["x^2+y", "x*y"],
  x: { min: -5, max: 5, n: 21 },
  y: { min: -5, max: 5, n: 21 },
};

// a service stub that answers each recorded job with the exact recorded
// bytes and refuses anything else
function stubService(pairs: [string, string][]): () => JobBody[] {
  const sent: JobBody[] = [];
  vi.stubGlobal(
    "fetch",
    vi.fn(async (url: string, init: RequestInit) => {
      if (url !== "/api/scene") {
        return new Response('{"error":"unexpected endpoint"}', { status: 500 });
      }
      const body = JSON.parse(init.body as string) as JobBody;
      sent.push(body);
      for (const [jobText, sceneText] of pairs) {
        if (JSON.stringify(body) === JSON.stringify(JSON.parse(jobText))) {
          return new Response(sceneText, { status: 200 });
        }
      }
      return new Response('{"error":"no recorded answer for this job"}', { status: 400 });
    }),
  );
  return () => sent;
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("click-to-zoom inset", () => {
  it("stores the service's scene bytes for the click untouched", async () => {
    const sceneText = fixture("fig1_zoom_scene.json");
    stubService([[fixture("fig1_zoom_job.json"), sceneText]]);

    const session = newSession(FIG1);
    const entry = await fetchInset(session, [2, 3], { mag: 2, dpd: 7, mode: "zoom" }, fetchSceneText);

    // byte identity with the recorded service response
    expect(entry.sceneText).toBe(sceneText);
    expect(entry.inset.anchor).toEqual([2, 3]);
    expect(entry.inset.scene.primitives).toHaveLength(49);
  });

  it("sends the recorded deriv job when the mode toggle is on deriv", async () => {
    const sceneText = fixture("vf_deriv_scene.json");
    const sent = stubService([[fixture("vf_deriv_job.json"), sceneText]]);

    const session = newSession(VF);
    const entry = await fetchInset(session, [2, 3], { mag: 1.5, dpd: 7, mode: "deriv" }, fetchSceneText);

    expect(sent()).toHaveLength(1);
    expect(sent()[0].zoom?.mode).toBe("deriv");
    expect(entry.sceneText).toBe(sceneText);
    const kinds = new Set(entry.inset.scene.primitives.map((p) => p.t));
    expect(kinds).toEqual(new Set(["arrow"]));
  });

  it("refuses kind-illegal insets before any request is made", async () => {
    const sent = stubService([]);
    const session = newSession(FIG1);
    await expect(
      fetchInset(session, [2, 3], { mag: 2, dpd: 7, mode: "deriv" }, fetchSceneText),
    ).rejects.toThrow("deriv insets apply to vector fields");
    expect(sent()).toHaveLength(0);
  });

  it("judges zoom legality by the kind after the chain, not before", async () => {
    const sent = stubService([]);
    const session = newSession(VF);
    session.chain = [{ op: "covariant" }];
    // vf would allow div, but the chain lands on a 1-form
    await expect(
      fetchInset(session, [0, 0], { mag: 2, dpd: 7, mode: "div" }, fetchSceneText),
    ).rejects.toThrow("div insets apply to vector fields");
    expect(sent()).toHaveLength(0);
  });

  it("accumulates insets and removes them one at a time", async () => {
    const sceneText = fixture("fig1_zoom_scene.json");
    stubService([[fixture("fig1_zoom_job.json"), sceneText]]);

    let session = newSession(FIG1);
    const first = await fetchInset(session, [2, 3], { mag: 2, dpd: 7, mode: "zoom" }, fetchSceneText);
    session = addInset(session, first);
    const second = await fetchInset(session, [2, 3], { mag: 2, dpd: 7, mode: "zoom" }, fetchSceneText);
    session = addInset(session, second);

    expect(session.insets.map((e) => e.id)).toEqual([1, 2]);
    session = removeInset(session, 1);
    expect(session.insets.map((e) => e.id)).toEqual([2]);
  });

  it("re-queries one inset in place when its controls change", async () => {
    const zoomed = fixture("fig1_zoom_scene.json");
    const job = JSON.parse(fixture("fig1_zoom_job.json")) as JobBody;
    const magFour = { ...job, zoom: { ...job.zoom!, mag: 4 } };
    stubService([
      [JSON.stringify(job), zoomed],
      [JSON.stringify(magFour), zoomed],
    ]);

    let session = newSession(FIG1);
    session = addInset(
      session,
      await fetchInset(session, [2, 3], { mag: 2, dpd: 7, mode: "zoom" }, fetchSceneText),
    );
    session = await requeryInset(session, 1, { mag: 4, dpd: 7, mode: "zoom" }, fetchSceneText);

    expect(session.insets).toHaveLength(1);
    expect(session.insets[0].id).toBe(1);
    expect(session.insets[0].controls.mag).toBe(4);
  });

  it("round-trips a session through its save format", async () => {
    const sceneText = fixture("fig1_zoom_scene.json");
    stubService([[fixture("fig1_zoom_job.json"), sceneText]]);

    let session = newSession(FIG1);
    session = addInset(
      session,
      await fetchInset(session, [2, 3], { mag: 2, dpd: 7, mode: "zoom" }, fetchSceneText),
    );
    const loaded = sessionFromJson(sessionToJson(session));
    expect(loaded.spec).toEqual(FIG1);
    expect(loaded.insets).toHaveLength(1);
    expect(loaded.insets[0].sceneText).toBe(sceneText);
    expect(loaded.insets[0].inset.anchor).toEqual([2, 3]);
  });
});

describe("expression validation", () => {
  it("reports the service's byte offset for the caret", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () =>
        new Response(
          '{"error":"missing operator before \'sin\' (implicit multiplication is not supported; write an explicit *)","offset":2}',
          { status: 400 },
        ),
      ),
    );
    const result = await parseExpr("y sin(x)");
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.offset).toBe(2);
      expect(result.error).toContain("implicit multiplication");
    }
  });

  it("passes valid expressions through", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () =>
        new Response('{"ok":true,"nodes":4,"variables":["x","y"],"canonical":"y*sin(x)"}', {
          status: 200,
        }),
      ),
    );
    const result = await parseExpr("y*sin(x)");
    expect(result).toEqual({ ok: true, nodes: 4, variables: ["x", "y"], canonical: "y*sin(x)" });
  });
});
