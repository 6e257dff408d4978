// Builds the job documents the service consumes. Kept free of DOM so
// the exact bytes sent for a given session state are testable.

import type { ChainStep, JobBody, ObjectSpec, StyleSpec, ZoomControls } from "./types.js";

export function buildJob(spec: ObjectSpec, chain: ChainStep[], style?: StyleSpec): JobBody {
  const job: JobBody = {
    object: {
      kind: spec.kind,
      grid: {
        x: { min: spec.x.min, max: spec.x.max, n: spec.x.n },
        y: { min: spec.y.min, max: spec.y.max, n: spec.y.n },
      },
      components: spec.comps.map((expr) => ({ expr })),
    },
    chain: chain.map((s) => ({ ...s })),
  };
  if (style !== undefined && Object.keys(style).length > 0) {
    job.style = style;
  }
  return job;
}

export function withZoom(job: JobBody, target: [number, number], c: ZoomControls): JobBody {
  const zoom: JobBody["zoom"] = {
    target: [target[0], target[1]],
    mag: c.mag,
    dpd: c.dpd,
    mode: c.mode,
  };
  if (c.insize !== undefined) {
    zoom.insize = c.insize;
  }
  return { ...job, zoom };
}

export function componentCount(kind: ObjectSpec["kind"]): number {
  return kind === "form1" || kind === "vf" ? 2 : 1;
}
