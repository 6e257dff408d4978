// DOM wiring. Everything with behavior worth testing lives in the
// other modules; this file binds them to the page.

import { ApiError, fetchSceneText, fetchSvg, parseExpr } from "./api.js";
import { KIND_LABELS, checkChain, legalOps, zoomAllowed } from "./chain.js";
import { clickToPoint, drawScene } from "./draw.js";
import { buildJob, componentCount, withZoom } from "./job.js";
import {
  addInset,
  fetchInset,
  newSession,
  removeInset,
  requeryInset,
  sessionFromJson,
  sessionToJson,
} from "./state.js";
import type { Session } from "./state.js";
import type { ChainStep, Kind, Scene, ZoomControls, ZoomMode } from "./types.js";
import { caretLine, debounce } from "./validate.js";

const CANVAS_SIDE = 640;
const SURROUND = 10;
const OPS = ["ext_d", "interior_d", "hodge", "covariant", "contravariant"];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

const kindSel = el<HTMLSelectElement>("kind");
const compInputs = [el<HTMLInputElement>("comp0"), el<HTMLInputElement>("comp1")];
const compStates = [el<HTMLElement>("comp0-state"), el<HTMLElement>("comp1-state")];
const rangeInputs = {
  xmin: el<HTMLInputElement>("xmin"),
  xmax: el<HTMLInputElement>("xmax"),
  ymin: el<HTMLInputElement>("ymin"),
  ymax: el<HTMLInputElement>("ymax"),
  n: el<HTMLInputElement>("gridn"),
};
const chainBox = el<HTMLElement>("chain");
const chainLegend = el<HTMLElement>("chain-legend");
const opButtons = el<HTMLElement>("op-buttons");
const vxInput = el<HTMLInputElement>("vx");
const vyInput = el<HTMLInputElement>("vy");
const computeBtn = el<HTMLButtonElement>("compute");
const downloadBtn = el<HTMLButtonElement>("download");
const banner = el<HTMLElement>("banner");
const canvas = el<HTMLCanvasElement>("plot");
const magInput = el<HTMLInputElement>("mag");
const magShow = el<HTMLElement>("mag-show");
const dpdInput = el<HTMLInputElement>("dpd");
const insetList = el<HTMLElement>("insets");
const saveBtn = el<HTMLButtonElement>("save-session");
const loadInput = el<HTMLInputElement>("load-session");

let session: Session = newSession({
  kind: "form1",
  comps: ["y*sin(x)", "-x*cos(y)"],
  x: { min: -5, max: 5, n: 21 },
  y: { min: -5, max: 5, n: 21 },
});
let baseScene: Scene | null = null;
let compValid = [false, false];
let inflight: AbortController | null = null;
const insetInflight = new Map<number, AbortController>();

function showBanner(text: string): void {
  banner.textContent = text;
  banner.hidden = text === "";
}

function zoomControls(): ZoomControls {
  const mode = (document.querySelector('input[name="mode"]:checked') as HTMLInputElement)
    .value as ZoomMode;
  return { mag: Number(magInput.value), dpd: Number(dpdInput.value), mode };
}

function specFromInputs(): void {
  session.spec.kind = kindSel.value as Kind;
  session.spec.comps = compInputs
    .slice(0, componentCount(session.spec.kind))
    .map((input) => input.value);
  session.spec.x = {
    min: Number(rangeInputs.xmin.value),
    max: Number(rangeInputs.xmax.value),
    n: Number(rangeInputs.n.value),
  };
  session.spec.y = {
    min: Number(rangeInputs.ymin.value),
    max: Number(rangeInputs.ymax.value),
    n: Number(rangeInputs.n.value),
  };
}

// --- expression validation (debounced per input) ---

function setNeutral(i: number): void {
  compStates[i].textContent = "";
  compStates[i].className = "comp-state";
  compValid[i] = false;
}

async function validateComp(i: number): Promise<void> {
  const src = compInputs[i].value;
  if (src.trim() === "") {
    setNeutral(i);
    refreshControls();
    return;
  }
  try {
    const result = await parseExpr(src);
    if (result.ok) {
      compStates[i].textContent = "ok";
      compStates[i].className = "comp-state valid";
      compValid[i] = true;
    } else {
      compValid[i] = false;
      compStates[i].className = "comp-state invalid";
      compStates[i].textContent =
        result.offset !== undefined ? `${caretLine(src, result.offset)}\n${result.error}` : result.error;
    }
  } catch {
    // network trouble: leave the last state, tell the user
    showBanner("service unreachable; expression not validated");
    return;
  }
  showBanner("");
  refreshControls();
}

const debouncedValidate = [0, 1].map((i) => debounce(() => void validateComp(i), 300));

// --- chain editing ---

function renderChain(): void {
  const { kinds, error } = checkChain(session.spec.kind, session.chain);
  chainBox.textContent = "";
  session.chain.forEach((step, i) => {
    const tag = document.createElement("span");
    tag.className = "chain-step";
    const args = step.op === "interior_d" ? `(v=${step.vx ?? 1},${step.vy ?? 1})` : "";
    const after = i < kinds.length ? ` → ${KIND_LABELS[kinds[i]]}` : "";
    tag.textContent = `${step.op}${args}${after}`;
    chainBox.appendChild(tag);
  });
  const start = KIND_LABELS[session.spec.kind];
  chainLegend.textContent = error !== undefined ? `${start}: ${error}` : start;
  chainLegend.className = error !== undefined ? "legend invalid" : "legend";

  const finalKind = checkChain(session.spec.kind, session.chain).finalKind;
  for (const btn of opButtons.querySelectorAll("button")) {
    const op = btn.dataset.op;
    if (op === "pop") {
      btn.disabled = session.chain.length === 0;
    } else if (op !== undefined) {
      btn.disabled = !legalOps(finalKind).includes(op);
    }
  }
}

function pushOp(op: string): void {
  const step: ChainStep = { op };
  if (op === "interior_d") {
    step.vx = Number(vxInput.value);
    step.vy = Number(vyInput.value);
  }
  session.chain.push(step);
  session.insets = [];
  renderAll();
}

// --- scene fetch and drawing ---

function refreshControls(): void {
  const need = componentCount(session.spec.kind);
  compInputs[1].parentElement!.hidden = need < 2;
  const ready = compValid.slice(0, need).every(Boolean);
  computeBtn.disabled = !ready;
  downloadBtn.disabled = baseScene === null;
  renderChain();
}

function redraw(): void {
  const ctx = canvas.getContext("2d");
  if (ctx === null || baseScene === null) {
    return;
  }
  ctx.fillStyle = "white";
  ctx.fillRect(0, 0, CANVAS_SIDE, CANVAS_SIDE);
  const composed: Scene = {
    viewport: baseScene.viewport,
    primitives: [...baseScene.primitives, ...session.insets.map((e) => e.inset)],
  };
  drawScene(ctx, composed, CANVAS_SIDE, SURROUND);
}

function renderInsetList(): void {
  insetList.textContent = "";
  for (const entry of session.insets) {
    const row = document.createElement("div");
    row.className = "inset-row";
    const label = document.createElement("span");
    label.textContent =
      `${entry.controls.mode} @ (${entry.target[0].toFixed(2)}, ${entry.target[1].toFixed(2)})` +
      ` ×${entry.controls.mag}`;
    row.appendChild(label);

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "1";
    slider.max = "10";
    slider.step = "0.5";
    slider.value = String(entry.controls.mag);
    slider.addEventListener("input", () => {
      const controls = { ...entry.controls, mag: Number(slider.value) };
      insetInflight.get(entry.id)?.abort();
      const ctl = new AbortController();
      insetInflight.set(entry.id, ctl);
      requeryInset(session, entry.id, controls, fetchSceneText, ctl.signal)
        .then((next) => {
          session = next;
          renderAll();
        })
        .catch((fault) => {
          if (!(fault instanceof DOMException && fault.name === "AbortError")) {
            showBanner(String(fault instanceof Error ? fault.message : fault));
          }
        });
    });
    row.appendChild(slider);

    const dl = document.createElement("button");
    dl.textContent = "svg";
    dl.addEventListener("click", () => {
      void downloadSvg(withZoom(currentJob(), entry.target, entry.controls), "inset.svg");
    });
    row.appendChild(dl);

    const rm = document.createElement("button");
    rm.textContent = "remove";
    rm.addEventListener("click", () => {
      session = removeInset(session, entry.id);
      renderAll();
    });
    row.appendChild(rm);
    insetList.appendChild(row);
  }
}

function renderAll(): void {
  refreshControls();
  renderInsetList();
  redraw();
}

function currentJob() {
  return buildJob(session.spec, session.chain, session.style);
}

async function compute(): Promise<void> {
  specFromInputs();
  const { error } = checkChain(session.spec.kind, session.chain);
  if (error !== undefined) {
    showBanner(error);
    return;
  }
  inflight?.abort();
  inflight = new AbortController();
  try {
    const text = await fetchSceneText(currentJob(), inflight.signal);
    baseScene = JSON.parse(text) as Scene;
    session.insets = [];
    showBanner("");
  } catch (fault) {
    if (fault instanceof DOMException && fault.name === "AbortError") {
      return;
    }
    showBanner(fault instanceof ApiError ? fault.message : "service unreachable");
    return;
  }
  renderAll();
}

async function downloadSvg(job: ReturnType<typeof currentJob>, name: string): Promise<void> {
  try {
    const blob = await fetchSvg(job);
    const url = URL.createObjectURL(blob);
    const a = document.createElement("a");
    a.href = url;
    a.download = name;
    a.click();
    URL.revokeObjectURL(url);
  } catch (fault) {
    showBanner(fault instanceof ApiError ? fault.message : "service unreachable");
  }
}

function onCanvasClick(ev: MouseEvent): void {
  if (baseScene === null) {
    return;
  }
  const box = canvas.getBoundingClientRect();
  const cx = ((ev.clientX - box.left) / box.width) * CANVAS_SIDE;
  const cy = ((ev.clientY - box.top) / box.height) * CANVAS_SIDE;
  const point = clickToPoint(baseScene, CANVAS_SIDE, cx, cy, SURROUND);
  if (point === null) {
    return;
  }
  const controls = zoomControls();
  const finalKind = checkChain(session.spec.kind, session.chain).finalKind;
  const refusal = zoomAllowed(finalKind, controls.mode);
  if (refusal !== null) {
    showBanner(refusal);
    return;
  }
  const ctl = new AbortController();
  fetchInset(session, point, controls, fetchSceneText, ctl.signal)
    .then((entry) => {
      session = addInset(session, entry);
      showBanner("");
      renderAll();
    })
    .catch((fault) => {
      showBanner(fault instanceof Error ? fault.message : String(fault));
    });
}

// --- session save/load (local file only) ---

function saveSession(): void {
  const blob = new Blob([sessionToJson(session)], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = "session.json";
  a.click();
  URL.revokeObjectURL(url);
}

async function loadSession(file: File): Promise<void> {
  try {
    session = sessionFromJson(await file.text());
  } catch (fault) {
    showBanner(fault instanceof Error ? fault.message : String(fault));
    return;
  }
  kindSel.value = session.spec.kind;
  compInputs[0].value = session.spec.comps[0] ?? "";
  compInputs[1].value = session.spec.comps[1] ?? "";
  rangeInputs.xmin.value = String(session.spec.x.min);
  rangeInputs.xmax.value = String(session.spec.x.max);
  rangeInputs.ymin.value = String(session.spec.y.min);
  rangeInputs.ymax.value = String(session.spec.y.max);
  rangeInputs.n.value = String(session.spec.x.n);
  baseScene = null;
  for (const input of compInputs) {
    input.dispatchEvent(new Event("input"));
  }
  await compute();
}

// --- wiring ---

compInputs.forEach((input, i) => {
  input.addEventListener("input", () => {
    setNeutral(i);
    debouncedValidate[i]();
  });
});

kindSel.addEventListener("change", () => {
  specFromInputs();
  session.chain = [];
  session.insets = [];
  baseScene = null;
  renderAll();
});

for (const op of OPS) {
  const btn = document.createElement("button");
  btn.dataset.op = op;
  btn.textContent = op;
  btn.addEventListener("click", () => pushOp(op));
  opButtons.appendChild(btn);
}
const pop = document.createElement("button");
pop.dataset.op = "pop";
pop.textContent = "remove last";
pop.addEventListener("click", () => {
  session.chain.pop();
  session.insets = [];
  renderAll();
});
opButtons.appendChild(pop);

computeBtn.addEventListener("click", () => void compute());
downloadBtn.addEventListener("click", () => void downloadSvg(currentJob(), "scene.svg"));
canvas.addEventListener("click", onCanvasClick);
magInput.addEventListener("input", () => {
  magShow.textContent = magInput.value;
});
saveBtn.addEventListener("click", saveSession);
loadInput.addEventListener("change", () => {
  const file = loadInput.files?.[0];
  if (file !== undefined) {
    void loadSession(file);
  }
});

canvas.width = CANVAS_SIDE;
canvas.height = CANVAS_SIDE;
for (let i = 0; i < 2; i++) {
  void validateComp(i);
}
renderAll();
void compute();
