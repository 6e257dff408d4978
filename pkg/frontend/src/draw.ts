// Canvas drawing of Scene JSON. The geometry matches the service's SVG
// renderer (same sheet spreads, arrowhead proportions, nested squares
// and marker shapes) so the interactive view and the downloaded SVG
// agree; only line widths and fonts are canvas defaults.

import type { ArrowPrim, BlockPrim, InsetPrim, MarkerPrim, PolyPrim, Prim, Scene, StackPrim } from "./types.js";

// the subset of CanvasRenderingContext2D the renderer touches; tests
// substitute a recorder
export interface Ctx2D {
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  stroke(): void;
  fill(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  rect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  save(): void;
  restore(): void;
}

const MARKER_RADIUS = 6;
const MARKER_SIDE = 12;
const ARROW_HEAD_FRAC = 0.3;

// viewport-to-pixel transform for one scene body
class Mapper {
  private x0: number;
  private y1: number;
  private sx: number;
  private sy: number;
  private ox: number;
  private oy: number;
  readonly margin: number;
  readonly side: number;

  constructor(scene: Scene, originX: number, originY: number, side: number, surround: number) {
    const [vx0, vx1] = scene.viewport.x;
    const [vy0, vy1] = scene.viewport.y;
    this.margin = side / surround;
    this.side = side - 2 * this.margin;
    this.x0 = vx0;
    this.y1 = vy1;
    this.sx = this.side / (vx1 - vx0);
    this.sy = this.side / (vy1 - vy0);
    this.ox = originX;
    this.oy = originY;
  }

  px(x: number): number {
    return this.ox + this.margin + (x - this.x0) * this.sx;
  }

  py(y: number): number {
    return this.oy + this.margin + (this.y1 - y) * this.sy;
  }

  // data length along x, in pixels
  lx(d: number): number {
    return d * this.sx;
  }

  ly(d: number): number {
    return d * this.sy;
  }
}

function line(ctx: Ctx2D, x1: number, y1: number, x2: number, y2: number, color: string): void {
  ctx.strokeStyle = color;
  ctx.beginPath();
  ctx.moveTo(x1, y1);
  ctx.lineTo(x2, y2);
  ctx.stroke();
}

function polygon(ctx: Ctx2D, pts: [number, number][], color: string): void {
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.moveTo(pts[0][0], pts[0][1]);
  for (let i = 1; i < pts.length; i++) {
    ctx.lineTo(pts[i][0], pts[i][1]);
  }
  ctx.closePath();
  ctx.fill();
}

function drawStack(ctx: Ctx2D, s: StackPrim, t: Mapper): void {
  if (s.n <= 0) {
    return;
  }
  const ca = Math.cos(s.angle);
  const sa = Math.sin(s.angle);
  const half = 0.5 * s.len;
  const offsets: number[] = [];
  if (s.n === 1) {
    offsets.push(0);
  } else {
    for (let k = 0; k < s.n; k++) {
      offsets.push(s.len * (k / (s.n - 1) - 0.5));
    }
  }
  for (const off of offsets) {
    const cx = s.p[0] + off * ca;
    const cy = s.p[1] + off * sa;
    // sheets run perpendicular to the (u, v) direction
    line(
      ctx,
      t.px(cx - half * -sa),
      t.py(cy - half * ca),
      t.px(cx + half * -sa),
      t.py(cy + half * ca),
      s.color,
    );
  }
  if (s.head) {
    const bx = s.p[0] + half * ca;
    const by = s.p[1] + half * sa;
    const tipx = s.p[0] + (half + s.hh * s.len) * ca;
    const tipy = s.p[1] + (half + s.hh * s.len) * sa;
    const hw = 0.5 * s.hw * s.len;
    polygon(
      ctx,
      [
        [t.px(tipx), t.py(tipy)],
        [t.px(bx - hw * -sa), t.py(by - hw * ca)],
        [t.px(bx + hw * -sa), t.py(by + hw * ca)],
      ],
      s.color,
    );
  }
}

function drawArrow(ctx: Ctx2D, a: ArrowPrim, t: Mapper): void {
  if (a.len <= 0) {
    return;
  }
  const ca = Math.cos(a.angle);
  const sa = Math.sin(a.angle);
  const half = 0.5 * a.len;
  const tail: [number, number] = [a.p[0] - half * ca, a.p[1] - half * sa];
  const tip: [number, number] = [a.p[0] + half * ca, a.p[1] + half * sa];
  line(ctx, t.px(tail[0]), t.py(tail[1]), t.px(tip[0]), t.py(tip[1]), a.color);
  const head = ARROW_HEAD_FRAC * a.len;
  const base: [number, number] = [tip[0] - head * ca, tip[1] - head * sa];
  const hw = 0.5 * head;
  polygon(
    ctx,
    [
      [t.px(tip[0]), t.py(tip[1])],
      [t.px(base[0] - hw * -sa), t.py(base[1] - hw * ca)],
      [t.px(base[0] + hw * -sa), t.py(base[1] + hw * ca)],
    ],
    a.color,
  );
}

function square(ctx: Ctx2D, p: [number, number], side: number, t: Mapper, color: string): void {
  ctx.strokeStyle = color;
  ctx.strokeRect(t.px(p[0] - 0.5 * side), t.py(p[1] + 0.5 * side), t.lx(side), t.ly(side));
}

function drawBlock(ctx: Ctx2D, b: BlockPrim, t: Mapper): void {
  if (b.n <= 0) {
    // the zero square: small and hollow
    square(ctx, b.p, b.size / 3, t, b.color);
    return;
  }
  for (let k = 1; k <= b.n; k++) {
    square(ctx, b.p, (b.size * k) / b.n, t, b.color);
  }
}

function drawPoly(ctx: Ctx2D, p: PolyPrim, t: Mapper): void {
  if (p.pts.length === 0) {
    return;
  }
  ctx.strokeStyle = "black";
  ctx.beginPath();
  ctx.moveTo(t.px(p.pts[0][0]), t.py(p.pts[0][1]));
  for (let i = 1; i < p.pts.length; i++) {
    ctx.lineTo(t.px(p.pts[i][0]), t.py(p.pts[i][1]));
  }
  ctx.stroke();
  if (p.label !== undefined) {
    const [lx, ly] = p.pts[Math.floor(p.pts.length / 2)];
    ctx.fillStyle = "black";
    ctx.font = `${p.label_size ?? 10}px sans-serif`;
    ctx.fillText(p.label, t.px(lx), t.py(ly));
  }
}

function drawMarker(ctx: Ctx2D, m: MarkerPrim, t: Mapper): void {
  const x = t.px(m.p[0]);
  const y = t.py(m.p[1]);
  if (m.kind === "infinite") {
    ctx.fillStyle = "red";
    ctx.beginPath();
    ctx.arc(x, y, MARKER_RADIUS, 0, 2 * Math.PI);
    ctx.fill();
  } else {
    ctx.fillStyle = "grey";
    ctx.fillRect(x - MARKER_SIDE / 2, y - MARKER_SIDE / 2, MARKER_SIDE, MARKER_SIDE);
  }
}

function drawInset(ctx: Ctx2D, p: InsetPrim, t: Mapper, surround: number): void {
  const side = p.size * t.side;
  const x = t.px(p.anchor[0]) - 0.5 * side;
  const y = t.py(p.anchor[1]) - 0.5 * side;
  ctx.save();
  ctx.fillStyle = "white";
  ctx.fillRect(x, y, side, side);
  drawSceneAt(ctx, p.scene, x, y, side, surround);
  ctx.restore();
}

function drawSceneAt(
  ctx: Ctx2D,
  scene: Scene,
  originX: number,
  originY: number,
  side: number,
  surround: number,
): void {
  const t = new Mapper(scene, originX, originY, side, surround);
  ctx.strokeStyle = "black";
  ctx.strokeRect(originX + t.margin, originY + t.margin, t.side, t.side);
  for (const prim of scene.primitives) {
    drawPrim(ctx, prim, t, surround);
  }
}

function drawPrim(ctx: Ctx2D, prim: Prim, t: Mapper, surround: number): void {
  switch (prim.t) {
    case "stack":
      drawStack(ctx, prim, t);
      break;
    case "arrow":
      drawArrow(ctx, prim, t);
      break;
    case "block":
      drawBlock(ctx, prim, t);
      break;
    case "poly":
      drawPoly(ctx, prim, t);
      break;
    case "marker":
      drawMarker(ctx, prim, t);
      break;
    case "inset":
      drawInset(ctx, prim, t, surround);
      break;
  }
}

export function drawScene(ctx: Ctx2D, scene: Scene, side: number, surround = 10): void {
  drawSceneAt(ctx, scene, 0, 0, side, surround);
}

// inverse of the pixel mapping: where in the viewport was the click
export function clickToPoint(
  scene: Scene,
  side: number,
  cx: number,
  cy: number,
  surround = 10,
): [number, number] | null {
  const margin = side / surround;
  const plot = side - 2 * margin;
  const [vx0, vx1] = scene.viewport.x;
  const [vy0, vy1] = scene.viewport.y;
  const x = vx0 + ((cx - margin) / plot) * (vx1 - vx0);
  const y = vy1 - ((cy - margin) / plot) * (vy1 - vy0);
  if (x < vx0 || x > vx1 || y < vy0 || y > vy1) {
    return null;
  }
  return [x, y];
}
