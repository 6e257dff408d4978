// Thin fetch wrappers over the service API. Scene responses are kept
// as raw text: the service's JSON is byte-stable, so preserving its
// bytes lets sessions be compared and re-downloaded exactly.

import type { JobBody, ParseResult } from "./types.js";

export class ApiError extends Error {
  status: number;
  offset?: number;

  constructor(status: number, message: string, offset?: number) {
    super(message);
    this.status = status;
    this.offset = offset;
  }
}

async function faultOf(res: Response): Promise<ApiError> {
  let message = `service error (${res.status})`;
  let offset: number | undefined;
  try {
    const body = await res.json();
    if (typeof body.error === "string") message = body.error;
    if (typeof body.offset === "number") offset = body.offset;
  } catch {
    // non-JSON fault body; keep the status line
  }
  return new ApiError(res.status, message, offset);
}

export async function parseExpr(expr: string, signal?: AbortSignal): Promise<ParseResult> {
  const res = await fetch("/api/parse", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ expr }),
    signal,
  });
  if (!res.ok) {
    const fault = await faultOf(res);
    return { ok: false, error: fault.message, offset: fault.offset };
  }
  return await res.json();
}

// raw response text so the scene bytes stay exactly as served
export async function fetchSceneText(job: JobBody, signal?: AbortSignal): Promise<string> {
  const res = await fetch("/api/scene", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(job),
    signal,
  });
  if (!res.ok) {
    throw await faultOf(res);
  }
  return await res.text();
}

export async function fetchSvg(job: JobBody, signal?: AbortSignal): Promise<Blob> {
  const res = await fetch("/api/render", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(job),
    signal,
  });
  if (!res.ok) {
    throw await faultOf(res);
  }
  return await res.blob();
}
