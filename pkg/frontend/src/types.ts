// Wire types shared with the service. The explorer never computes any
// mathematics; everything drawn comes out of these documents.

export type Kind = "form0" | "form1" | "form2" | "vf";

export type ZoomMode = "zoom" | "deriv" | "div" | "curl";

export interface AxisRange {
  min: number;
  max: number;
  n: number;
}

export interface ObjectSpec {
  kind: Kind;
  comps: string[]; // one expression for form0/form2, two for form1/vf
  x: AxisRange;
  y: AxisRange;
}

export interface ChainStep {
  op: string;
  vx?: number;
  vy?: number;
}

export interface ZoomControls {
  mag: number;
  dpd: number;
  mode: ZoomMode;
  insize?: number;
}

export interface StyleSpec {
  max_sheets?: number;
  color?: string;
  levels?: number | number[];
  labels?: boolean;
  log_scale?: boolean;
  arrowheads?: boolean;
}

// job document for POST /api/scene and /api/render
export interface JobBody {
  object: {
    kind: Kind;
    grid: { x: AxisRange; y: AxisRange };
    components: { expr: string }[];
  };
  chain: ChainStep[];
  style?: StyleSpec;
  zoom?: { target: [number, number]; mag: number; dpd: number; mode: ZoomMode; insize?: number };
}

// scene documents as the service emits them

export interface StackPrim {
  t: "stack";
  p: [number, number];
  angle: number;
  n: number;
  len: number;
  head: boolean;
  hw: number;
  hh: number;
  color: string;
}

export interface ArrowPrim {
  t: "arrow";
  p: [number, number];
  angle: number;
  len: number;
  color: string;
}

export interface BlockPrim {
  t: "block";
  p: [number, number];
  n: number;
  size: number;
  color: string;
}

export interface PolyPrim {
  t: "poly";
  pts: [number, number][];
  label?: string;
  label_size?: number;
}

export interface MarkerPrim {
  t: "marker";
  p: [number, number];
  kind: "infinite" | "undefined";
}

export interface InsetPrim {
  t: "inset";
  anchor: [number, number];
  size: number;
  scene: Scene;
}

export type Prim = StackPrim | ArrowPrim | BlockPrim | PolyPrim | MarkerPrim | InsetPrim;

export interface Scene {
  viewport: { x: [number, number]; y: [number, number] };
  primitives: Prim[];
}

export interface ParseOk {
  ok: true;
  nodes: number;
  variables: string[];
  canonical: string;
}

export interface ParseFail {
  ok: false;
  error: string;
  offset?: number;
}

export type ParseResult = ParseOk | ParseFail;
