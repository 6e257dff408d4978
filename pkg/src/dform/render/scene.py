"""Renderer-agnostic scenes.

A Scene is the viewport (the grid extent, in plot units) plus an
ordered tuple of primitives.  Grid objects map onto primitives as
follows: 1-forms become stacks of parallel sheets perpendicular to the
component direction, vector fields become arrows, 2-forms become nested
squares colored by sign, 0-forms become contour polylines.  Masked grid
points always become markers instead, and never take part in the
magnitude normalisation.

Sheet and square counts bucket the relative magnitude m / m_max into
ceil(max_sheets * m / m_max).  The fraction is rounded to 9 decimals
first so that rescaling every component by a positive constant, which
reproduces the ratios only up to last-bit jitter, can never flip a
count across an integer boundary.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from ..errors import OperationError, StyleError
from ..fields import FINITE, UNDEFINED, Form0, Form1, Form2, VectorField
from .contours import contour_lines

DEFAULT_STACK_COLOR = "#800080"
DEFAULT_ARROW_COLOR = "black"

# block side as a fraction of the smaller grid spacing, so neighbouring
# blocks never touch
_BLOCK_FILL = 0.9

_COLOR_FORM = re.compile(r"\A(#[0-9a-fA-F]{6}|[A-Za-z]+)\Z")


def _check_color(c) -> None:
    if not (isinstance(c, str) and _COLOR_FORM.match(c)):
        raise StyleError(f"not a CSS color name or #RRGGBB string: {c!r}")


@dataclass(frozen=True)
class PlotStyle:
    """Presentation knobs shared by every scene builder.

    color overrides the per-kind default (purple stacks, black arrows).
    head_width and head_height are fractions of the sheet length,
    sheet_size is a fraction of the viewport width, and surround_space
    divides the canvas size to give the margin around the plot box.
    levels is either a level count (spaced uniformly strictly between
    the finite minimum and maximum) or an ascending tuple of values.
    """

    color: str | None = None
    arrowheads: bool = True
    head_width: float = 0.5
    head_height: float = 0.25
    log_scaling: bool = False
    max_sheets: int = 5
    sheet_size: float = 0.05
    surround_space: float = 10.0
    palette: tuple[str, str, str] = ("red", "blue", "grey")
    levels: int | tuple[float, ...] = 10
    contour_labels: bool = False
    label_size: int = 10

    def __post_init__(self):
        for name in ("head_width", "head_height", "sheet_size"):
            f = getattr(self, name)
            if not (isinstance(f, (int, float)) and 0.0 < float(f) <= 1.0):
                raise StyleError(f"{name} must lie in (0, 1]")
        if not (isinstance(self.max_sheets, int) and self.max_sheets >= 1):
            raise StyleError("max_sheets must be a positive integer")
        if not (isinstance(self.surround_space, (int, float))
                and self.surround_space >= 1.0):
            raise StyleError("surround_space must be at least 1")
        object.__setattr__(self, "palette", tuple(self.palette))
        if len(self.palette) != 3:
            raise StyleError("palette needs exactly 3 colors "
                             "(positive, negative, zero)")
        for c in self.palette:
            _check_color(c)
        if self.color is not None:
            _check_color(self.color)
        if isinstance(self.levels, int):
            if self.levels < 1:
                raise StyleError("levels must be a positive count")
        else:
            lv = tuple(float(x) for x in self.levels)
            if not lv or any(b <= a for a, b in zip(lv, lv[1:])):
                raise StyleError("explicit contour levels must be "
                                 "strictly ascending")
            object.__setattr__(self, "levels", lv)
        if not (isinstance(self.label_size, int) and self.label_size >= 1):
            raise StyleError("label_size must be a positive integer")


@dataclass(frozen=True)
class Stack:
    p: tuple[float, float]
    angle: float
    n: int
    length: float
    head: bool
    head_width: float
    head_height: float
    color: str


@dataclass(frozen=True)
class Arrow:
    p: tuple[float, float]
    angle: float
    length: float
    color: str


@dataclass(frozen=True)
class Block:
    p: tuple[float, float]
    n: int
    size: float
    color: str


@dataclass(frozen=True)
class Polyline:
    pts: tuple[tuple[float, float], ...]
    label: str | None = None
    label_size: int = 10


@dataclass(frozen=True)
class Marker:
    p: tuple[float, float]
    kind: str  # "infinite" or "undefined"


@dataclass(frozen=True)
class InsetScene:
    anchor: tuple[float, float]
    size: float
    scene: "Scene"


@dataclass(frozen=True)
class Scene:
    viewport: tuple[tuple[float, float], tuple[float, float]]
    primitives: tuple = ()


def _count(m: float, m_max: float, max_sheets: int) -> int:
    """Sheet/square count for magnitude m; 0 exactly when m is 0."""
    if m_max == 0.0 or m == 0.0:
        return 0
    return max(1, int(np.ceil(round(m / m_max * max_sheets, 9))))


def _mask_kind(code) -> str:
    return "undefined" if code == UNDEFINED else "infinite"


def _viewport(grid):
    x0, x1, y0, y1 = grid.extent
    return ((float(x0), float(x1)), (float(y0), float(y1)))


def _pair_arrays(obj):
    """masked values, magnitudes, combined mask and finite maximum."""
    u = obj.u.masked_values
    v = obj.v.masked_values
    mask = np.maximum(obj.u.mask, obj.v.mask)
    m = np.hypot(u, v)
    finite = mask == FINITE
    m_max = float(m[finite].max()) if finite.any() else 0.0
    return u, v, m, mask, m_max


def scene_form1(form: Form1, style: PlotStyle | None = None) -> Scene:
    """Stack plot: sheets perpendicular to (u, v), count from m / m_max."""
    style = style or PlotStyle()
    obj = form.log_scale() if style.log_scaling else form
    (vx0, vx1), vy = vp = _viewport(obj.grid)
    length = float(style.sheet_size * (vx1 - vx0))
    u, v, m, mask, m_max = _pair_arrays(obj)
    color = style.color or DEFAULT_STACK_COLOR
    prims = []
    for i in range(obj.grid.nx):
        for j in range(obj.grid.ny):
            p = (float(obj.grid.x[i]), float(obj.grid.y[j]))
            if mask[i, j] != FINITE:
                prims.append(Marker(p, _mask_kind(mask[i, j])))
                continue
            mag = float(m[i, j])
            angle = float(np.arctan2(v[i, j], u[i, j])) if mag > 0.0 else 0.0
            prims.append(Stack(p, angle, _count(mag, m_max, style.max_sheets),
                               length, style.arrowheads, style.head_width,
                               style.head_height, color))
    return Scene(vp, tuple(prims))


def scene_vf(vf: VectorField, style: PlotStyle | None = None) -> Scene:
    """Quiver plot: arrow length proportional to m / m_max."""
    style = style or PlotStyle()
    obj = vf.log_scale() if style.log_scaling else vf
    (vx0, vx1), vy = vp = _viewport(obj.grid)
    length = float(style.sheet_size * (vx1 - vx0))
    u, v, m, mask, m_max = _pair_arrays(obj)
    color = style.color or DEFAULT_ARROW_COLOR
    prims = []
    for i in range(obj.grid.nx):
        for j in range(obj.grid.ny):
            p = (float(obj.grid.x[i]), float(obj.grid.y[j]))
            if mask[i, j] != FINITE:
                prims.append(Marker(p, _mask_kind(mask[i, j])))
                continue
            mag = float(m[i, j])
            frac = mag / m_max if m_max > 0.0 else 0.0
            angle = float(np.arctan2(v[i, j], u[i, j])) if mag > 0.0 else 0.0
            prims.append(Arrow(p, angle, frac * length, color))
    return Scene(vp, tuple(prims))


def scene_form2(form: Form2, style: PlotStyle | None = None) -> Scene:
    """Area plot: nested squares counted from |w| / w_max, colored by sign."""
    style = style or PlotStyle()
    obj = form.log_scale() if style.log_scaling else form
    vp = _viewport(obj.grid)
    g = obj.grid
    size = _BLOCK_FILL * min(float(g.x[1] - g.x[0]), float(g.y[1] - g.y[0]))
    w = obj.w.masked_values
    mask = obj.w.mask
    finite = mask == FINITE
    w_max = float(np.abs(w[finite]).max()) if finite.any() else 0.0
    prims = []
    for i in range(g.nx):
        for j in range(g.ny):
            p = (float(g.x[i]), float(g.y[j]))
            if mask[i, j] != FINITE:
                prims.append(Marker(p, _mask_kind(mask[i, j])))
                continue
            wij = float(w[i, j])
            if wij > 0.0:
                color = style.palette[0]
            elif wij < 0.0:
                color = style.palette[1]
            else:
                color = style.palette[2]
            prims.append(Block(p, _count(abs(wij), w_max, style.max_sheets),
                               size, color))
    return Scene(vp, tuple(prims))


def _resolve_levels(style: PlotStyle, values, mask):
    if not isinstance(style.levels, int):
        return style.levels
    finite = values[mask == FINITE]
    if finite.size == 0:
        return ()
    lo, hi = float(finite.min()), float(finite.max())
    if lo == hi:
        return ()
    # interior points only: the extremes themselves have degenerate
    # (empty or single-point) level sets on the sampled grid
    return tuple(np.linspace(lo, hi, style.levels + 2)[1:-1])


def scene_form0(form: Form0, style: PlotStyle | None = None) -> Scene:
    """Contour plot; a constant field yields no polylines."""
    style = style or PlotStyle()
    obj = form.log_scale() if style.log_scaling else form
    vp = _viewport(obj.grid)
    values = obj.phi.values
    mask = obj.phi.mask
    prims = []
    for level in _resolve_levels(style, values, mask):
        label = format(level, "g") if style.contour_labels else None
        for pts in contour_lines(obj.grid, values, mask, float(level)):
            prims.append(Polyline(tuple((float(x), float(y)) for x, y in pts),
                                  label, style.label_size))
    for i in range(obj.grid.nx):
        for j in range(obj.grid.ny):
            if mask[i, j] != FINITE:
                prims.append(Marker((float(obj.grid.x[i]), float(obj.grid.y[j])),
                                    _mask_kind(mask[i, j])))
    return Scene(vp, tuple(prims))


def scene_zero(obj, style: PlotStyle | None = None) -> Scene:
    """A wedge product above top degree draws nothing."""
    return Scene(_viewport(obj.grid), ())


_BUILDERS = {
    "form0": scene_form0,
    "form1": scene_form1,
    "form2": scene_form2,
    "vf": scene_vf,
    "zero": scene_zero,
}


def build_scene(obj, style: PlotStyle | None = None) -> Scene:
    """Dispatch on the object kind."""
    builder = _BUILDERS.get(getattr(obj, "kind", None))
    if builder is None:
        raise OperationError(f"cannot build a scene for {obj!r}")
    return builder(obj, style)


def compose_inset(parent: Scene, child: Scene, anchor, insize: float) -> Scene:
    """Embed child as an inset primitive anchored inside the parent."""
    (x0, x1), (y0, y1) = parent.viewport
    ax, ay = float(anchor[0]), float(anchor[1])
    if not (x0 <= ax <= x1 and y0 <= ay <= y1):
        raise OperationError(
            f"inset anchor ({ax:g}, {ay:g}) lies outside the parent viewport")
    if not 0.0 < insize <= 1.0:
        raise OperationError("inset size must lie in (0, 1]")
    inset = InsetScene((ax, ay), float(insize), child)
    return Scene(parent.viewport, parent.primitives + (inset,))


def _prim_dict(p) -> dict:
    if isinstance(p, Stack):
        return {"t": "stack", "p": [float(p.p[0]), float(p.p[1])],
                "angle": float(p.angle), "n": int(p.n), "len": float(p.length),
                "head": bool(p.head), "hw": float(p.head_width),
                "hh": float(p.head_height), "color": p.color}
    if isinstance(p, Arrow):
        return {"t": "arrow", "p": [float(p.p[0]), float(p.p[1])],
                "angle": float(p.angle), "len": float(p.length),
                "color": p.color}
    if isinstance(p, Block):
        return {"t": "block", "p": [float(p.p[0]), float(p.p[1])],
                "n": int(p.n), "size": float(p.size), "color": p.color}
    if isinstance(p, Polyline):
        d = {"t": "poly",
             "pts": [[float(x), float(y)] for x, y in p.pts]}
        if p.label is not None:
            d["label"] = p.label
            d["label_size"] = int(p.label_size)
        return d
    if isinstance(p, Marker):
        return {"t": "marker", "p": [float(p.p[0]), float(p.p[1])],
                "kind": p.kind}
    if isinstance(p, InsetScene):
        return {"t": "inset", "anchor": [float(p.anchor[0]), float(p.anchor[1])],
                "size": float(p.size), "scene": scene_to_dict(p.scene)}
    raise OperationError(f"unknown primitive {p!r}")


def scene_to_dict(scene: Scene) -> dict:
    (x0, x1), (y0, y1) = scene.viewport
    return {"viewport": {"x": [float(x0), float(x1)],
                         "y": [float(y0), float(y1)]},
            "primitives": [_prim_dict(p) for p in scene.primitives]}


def scene_to_json(scene: Scene) -> str:
    """Compact, key-order-stable and therefore byte-stable."""
    return json.dumps(scene_to_dict(scene), separators=(",", ":"),
                      allow_nan=False)
