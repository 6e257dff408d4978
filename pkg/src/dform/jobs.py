"""Job execution shared by the CLI and the HTTP service.

A job is one JSON document: the object to build, an optional chain of
operations, presentation style, an optional zoom descriptor and the
requested output kind.  Both front ends hand the document to run_job,
so a given job produces byte-identical output no matter which door it
came through.

The chain is type-checked against the object kind before any grid is
built; a chain the kind checker rejects never costs an evaluation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .calculus import (
    ZoomSpec,
    contravariant,
    covariant,
    curl,
    deriv,
    div,
    ext_d,
    hodge,
    interior_d,
    zoom,
)
from .config import DEFAULT, EngineConfig
from .errors import ChainError, DFormError
from .fields import object_from_json, object_to_json
from .render import PlotStyle, build_scene, compose_inset, render_svg, scene_to_json

OUTPUT_KINDS = ("scene-json", "svg", "values-json")
ZOOM_MODES = ("zoom", "deriv", "div", "curl")

JSON_TYPE = "application/json"
SVG_TYPE = "image/svg+xml"

# op name -> {input kind: output kind}; ops missing a kind are invalid
# on it.  wedge is deliberately absent: it takes a second operand and
# so cannot appear in a linear chain.
TRANSITIONS = {
    "ext_d": {"form0": "form1", "form1": "form2"},
    "interior_d": {"form1": "form0", "form2": "form1"},
    "hodge": {"form0": "form2", "form1": "form1", "form2": "form0"},
    "covariant": {"vf": "form1"},
    "contravariant": {"form1": "vf"},
    "zoom": {"form1": "form1", "form2": "form2", "vf": "vf"},
}

# why a given op cannot take a given kind, phrased like the runtime errors
_REASONS = {
    ("ext_d", "form2"): "exterior derivative of a top-degree form is zero",
    ("ext_d", "vf"): "exterior derivative applies to forms, not vector fields",
    ("interior_d", "form0"): "interior derivative applies to 1-forms and 2-forms",
    ("interior_d", "vf"): "interior derivative applies to 1-forms and 2-forms",
    ("hodge", "vf"): "hodge applies to forms, not vector fields",
    ("zoom", "form0"): "zoom applies to 1-forms, 2-forms and vector fields",
}

_CHAIN_KEYS = {
    "ext_d": set(),
    "interior_d": {"vx", "vy"},
    "hodge": set(),
    "covariant": set(),
    "contravariant": set(),
    "zoom": {"tx", "ty", "mag", "dpd"},
}

KINDS = ("form0", "form1", "form2", "vf")


@dataclass(frozen=True)
class JobSpec:
    object: dict
    chain: tuple[dict, ...] = ()
    style: dict | None = None
    zoom: dict | None = None
    output: str = "scene-json"


def job_from_dict(data: dict) -> JobSpec:
    if not isinstance(data, dict):
        raise DFormError("a job must be a JSON object")
    unknown = set(data) - {"object", "chain", "style", "zoom", "output"}
    if unknown:
        raise DFormError(f"unknown job fields: {sorted(unknown)}")
    if "object" not in data or not isinstance(data["object"], dict):
        raise DFormError("a job needs an 'object' section")
    chain = data.get("chain") or ()
    if not isinstance(chain, (list, tuple)):
        raise ChainError("chain must be a list of operation descriptors")
    output = data.get("output") or "scene-json"
    if output not in OUTPUT_KINDS:
        raise DFormError(f"unknown output kind {output!r}; "
                         f"use one of {', '.join(OUTPUT_KINDS)}")
    style = data.get("style")
    if style is not None and not isinstance(style, dict):
        raise DFormError("style must be a JSON object")
    zm = data.get("zoom")
    if zm is not None and not isinstance(zm, dict):
        raise DFormError("zoom must be a JSON object")
    return JobSpec(data["object"], tuple(chain), style, zm, output)


def check_chain(kind: str, chain) -> str:
    """Walk the chain through the kind transition table.

    Returns the final kind, or raises ChainError naming the first step
    that cannot accept its input.  Never builds a grid, so rejection is
    free no matter how large the requested object is.
    """
    if kind not in KINDS:
        raise ChainError(f"unknown object kind {kind!r}")
    for i, step in enumerate(chain):
        if not isinstance(step, dict) or "op" not in step:
            raise ChainError(f"step {i + 1}: each chain step needs an 'op'")
        op = step["op"]
        table = TRANSITIONS.get(op)
        if table is None:
            raise ChainError(f"step {i + 1}: unknown operation {op!r}")
        extra = set(step) - {"op"} - _CHAIN_KEYS[op]
        if extra:
            raise ChainError(
                f"step {i + 1} ({op}): unknown arguments {sorted(extra)}")
        if kind not in table:
            reason = _REASONS.get((op, kind), f"{op} cannot take a {kind}")
            raise ChainError(f"step {i + 1} ({op}): {reason}")
        kind = table[kind]
    return kind


def _check_zoom(zm: dict | None, kind: str) -> None:
    if zm is None:
        return
    unknown = set(zm) - {"target", "mag", "dpd", "insize", "mode"}
    if unknown:
        raise DFormError(f"unknown zoom fields: {sorted(unknown)}")
    mode = zm.get("mode", "zoom")
    if mode not in ZOOM_MODES:
        raise DFormError(f"unknown zoom mode {mode!r}; "
                         f"use one of {', '.join(ZOOM_MODES)}")
    if mode == "zoom":
        if kind not in ("form1", "form2", "vf"):
            raise ChainError("zoom applies to 1-forms, 2-forms and "
                             "vector fields")
    elif kind != "vf":
        raise ChainError(f"{mode} insets apply to vector fields")


def _zoom_spec(zm: dict) -> ZoomSpec:
    target = zm.get("target", (0.0, 0.0))
    if not (isinstance(target, (list, tuple)) and len(target) == 2):
        raise DFormError("zoom target must be a [x, y] pair")
    return ZoomSpec((float(target[0]), float(target[1])),
                    float(zm.get("mag", 2.0)), int(zm.get("dpd", 9)),
                    float(zm.get("insize", 0.3)))


def _run_step(obj, step: dict):
    op = step["op"]
    if op == "ext_d":
        return ext_d(obj)
    if op == "interior_d":
        v = (float(step.get("vx", 1.0)), float(step.get("vy", 1.0)))
        return interior_d(obj, v=v)
    if op == "hodge":
        return hodge(obj)
    if op == "covariant":
        return covariant(obj)
    if op == "contravariant":
        return contravariant(obj)
    # zoom inside a chain replaces the object with the window; insets
    # come from the job-level zoom section instead
    zm = {"target": (step.get("tx", 0.0), step.get("ty", 0.0)),
          "mag": step.get("mag", 2.0), "dpd": step.get("dpd", 9),
          "mode": "zoom"}
    child, _ = _run_zoom(obj, zm)
    return child


_ZOOM_FNS = {"zoom": zoom, "deriv": deriv, "div": div, "curl": curl}


def _run_zoom(obj, zm: dict):
    return _ZOOM_FNS[zm.get("mode", "zoom")](obj, _zoom_spec(zm))


def _style(spec: JobSpec) -> PlotStyle:
    data = spec.style or {}
    try:
        return PlotStyle(**data)
    except TypeError:
        known = set(PlotStyle.__dataclass_fields__)
        raise DFormError(f"unknown style fields: {sorted(set(data) - known)}")


def run_job(data: dict, config: EngineConfig = DEFAULT) -> tuple[str, str]:
    """Execute one job document; returns (payload, content type)."""
    spec = job_from_dict(data)
    kind = spec.object.get("kind")
    final_kind = check_chain(kind, spec.chain)
    _check_zoom(spec.zoom, final_kind)
    style = _style(spec)

    obj = object_from_json(spec.object, max_n=config.max_grid_n,
                           threshold=config.singular_threshold)
    for step in spec.chain:
        obj = _run_step(obj, step)

    if spec.output == "values-json":
        # the zoom section only decorates scenes; values are the chain result
        return json.dumps(object_to_json(obj), separators=(",", ":")), JSON_TYPE

    scene = build_scene(obj, style)
    if spec.zoom is not None:
        child, inset = _run_zoom(obj, spec.zoom)
        scene = compose_inset(scene, build_scene(child, style),
                              inset.anchor, inset.size)
    if spec.output == "scene-json":
        return scene_to_json(scene), JSON_TYPE
    return render_svg(scene, style.surround_space,
                      canvas_px=config.canvas_px,
                      sig_digits=config.svg_sig_digits), SVG_TYPE
