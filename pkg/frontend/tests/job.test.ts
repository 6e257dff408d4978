import { readFileSync } from "node:fs";

import { describe, expect, it } from "vitest";

import { buildJob, componentCount, withZoom } from "../src/job.js";
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

describe("job documents", () => {
  it("builds exactly the job the service was recorded answering", () => {
    const recorded = JSON.parse(fixture("fig1_zoom_job.json")) as JobBody;
    const job = withZoom(buildJob(FIG1, []), [2, 3], { mag: 2, dpd: 7, mode: "zoom" });
    expect(job).toEqual(recorded);
  });

  it("keeps interior_d vector arguments on the step", () => {
    const job = buildJob(FIG1, [{ op: "interior_d", vx: 0, vy: 1 }]);
    expect(job.chain).toEqual([{ op: "interior_d", vx: 0, vy: 1 }]);
  });

  it("omits the style section while it is empty", () => {
    expect(buildJob(FIG1, []).style).toBeUndefined();
    expect(buildJob(FIG1, [], { max_sheets: 5 }).style).toEqual({ max_sheets: 5 });
  });

  it("only sends insize when the user set one", () => {
    const base = buildJob(FIG1, []);
    expect(withZoom(base, [0, 0], { mag: 2, dpd: 9, mode: "zoom" }).zoom).toEqual({
      target: [0, 0],
      mag: 2,
      dpd: 9,
      mode: "zoom",
    });
    expect(withZoom(base, [0, 0], { mag: 2, dpd: 9, mode: "zoom", insize: 0.4 }).zoom?.insize).toBe(0.4);
  });

  it("does not mutate the base job when adding zoom", () => {
    const base = buildJob(FIG1, []);
    withZoom(base, [1, 1], { mag: 3, dpd: 5, mode: "zoom" });
    expect(base.zoom).toBeUndefined();
  });

  it("knows which kinds take two components", () => {
    expect(componentCount("form0")).toBe(1);
    expect(componentCount("form2")).toBe(1);
    expect(componentCount("form1")).toBe(2);
    expect(componentCount("vf")).toBe(2);
  });
});
