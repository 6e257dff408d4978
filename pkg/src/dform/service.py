"""HTTP service: parse, scene and render endpoints over the job runner.

Every request is self-contained; the service keeps no object handles or
sessions, so any sequence of requests can be replayed in any order with
identical per-request responses.  User faults map to 400 with a
structured {error, offset?} body, oversized bodies to 413, anything
else to a plain 500.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import __version__
from .config import DEFAULT, EngineConfig
from .errors import DFormError, ParseError
from .expr import parse, to_string
from .jobs import JSON_TYPE, SVG_TYPE, run_job


class ParseRequest(BaseModel):
    expr: str


class JobRequest(BaseModel):
    """Envelope for /api/scene and /api/render; deep validation happens
    in the job runner so both front ends reject identically."""

    object: dict
    chain: list[dict] = []
    style: dict | None = None
    zoom: dict | None = None
    output: str | None = None

    def as_job(self, output: str) -> dict:
        data = {"object": self.object, "chain": self.chain, "output": output}
        if self.style is not None:
            data["style"] = self.style
        if self.zoom is not None:
            data["zoom"] = self.zoom
        return data


def _expr_summary(src: str) -> dict:
    e = parse(src)
    nodes = 0
    names = set()
    stack = [e]
    while stack:
        node = stack.pop()
        nodes += 1
        if node.kind == "var":
            names.add(node.name)
        stack.extend(node.args)
    return {"ok": True, "nodes": nodes, "variables": sorted(names),
            "canonical": to_string(e)}


def _default_static_dir() -> Path | None:
    # repository layout: src/dform/service.py -> <root>/frontend/dist
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


def create_app(config: EngineConfig | None = None,
               static_dir: str | Path | None = None) -> FastAPI:
    cfg = config or DEFAULT
    app = FastAPI(title="dform", version=__version__, docs_url=None,
                  redoc_url=None, openapi_url=None)

    @app.middleware("http")
    async def limit_body(request: Request, call_next):
        length = request.headers.get("content-length")
        if length is not None and int(length) > cfg.max_body_bytes:
            return JSONResponse({"error": "request body too large"},
                                status_code=413)
        return await call_next(request)

    @app.exception_handler(DFormError)
    async def user_fault(_request: Request, exc: DFormError):
        body = {"error": str(exc)}
        if isinstance(exc, ParseError):
            body["offset"] = exc.offset
        return JSONResponse(body, status_code=400)

    @app.post("/api/parse")
    async def parse_expr(req: ParseRequest):
        return _expr_summary(req.expr)

    @app.post("/api/scene")
    async def scene(req: JobRequest):
        payload, _ = run_job(req.as_job("scene-json"), cfg)
        return Response(payload, media_type=JSON_TYPE)

    @app.post("/api/render")
    async def render(req: JobRequest):
        payload, _ = run_job(req.as_job("svg"), cfg)
        return Response(payload, media_type=SVG_TYPE)

    @app.get("/api/health")
    async def health():
        return {"status": "ok", "version": __version__}

    static = Path(static_dir) if static_dir else _default_static_dir()
    if static is not None and static.is_dir():
        app.mount("/", StaticFiles(directory=static, html=True),
                  name="frontend")
    return app
