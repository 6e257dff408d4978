"""Deterministic SVG 1.1 emission.

The viewport maps onto a square plot box (800x800 by default) with a
margin of canvas / surround_space on every side.  All numbers pass
through one fixed-significant-digits formatter (6 by default) and
nothing date- or platform-dependent is written, so an identical scene
rendered with identical settings always yields identical bytes.
Primitives are grouped by kind (one <g> per kind present, fixed kind
order); inside a group the scene order is preserved.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from ..errors import StyleError
from .scene import Arrow, Block, InsetScene, Marker, Polyline, Scene, Stack

DEFAULT_CANVAS = 800.0
DEFAULT_SIG_DIGITS = 6

# fixed pixel geometry of mask markers and arrowhead proportions
_MARKER_RADIUS = 6.0
_MARKER_SIDE = 12.0
_ARROW_HEAD_FRAC = 0.3

_GROUP_ORDER = ("stack", "arrow", "block", "poly", "marker", "inset")
_KIND_OF = {Stack: "stack", Arrow: "arrow", Block: "block",
            Polyline: "poly", Marker: "marker", InsetScene: "inset"}


class _Mapper:
    """Viewport-to-pixel transform and number formatter for one body."""

    def __init__(self, scene: Scene, surround_space: float, canvas: float,
                 sig_digits: int):
        (x0, x1), (y0, y1) = scene.viewport
        self.canvas = canvas
        self.sig_digits = sig_digits
        self.margin = canvas / surround_space
        self.total = canvas + 2.0 * self.margin
        self._x0, self._y1 = x0, y1
        self._sx = canvas / (x1 - x0)
        self._sy = canvas / (y1 - y0)

    def f(self, v) -> str:
        return format(float(v), f".{self.sig_digits}g")

    def px(self, x: float) -> float:
        return self.margin + (x - self._x0) * self._sx

    def py(self, y: float) -> float:
        return self.margin + (self._y1 - y) * self._sy

    def line(self, x1, y1, x2, y2, color) -> str:
        return (f'<line x1="{self.f(x1)}" y1="{self.f(y1)}" x2="{self.f(x2)}" '
                f'y2="{self.f(y2)}" stroke="{color}"/>')

    def polygon(self, points, color) -> str:
        pts = " ".join(f"{self.f(x)},{self.f(y)}" for x, y in points)
        return f'<polygon points="{pts}" fill="{color}"/>'


def _stack_elems(s: Stack, t: _Mapper) -> list[str]:
    if s.n <= 0:
        return []
    ca, sa = math.cos(s.angle), math.sin(s.angle)
    half = 0.5 * s.length
    if s.n == 1:
        offsets = [0.0]
    else:
        offsets = [s.length * (k / (s.n - 1) - 0.5) for k in range(s.n)]
    parts = []
    for off in offsets:
        cx = s.p[0] + off * ca
        cy = s.p[1] + off * sa
        # sheets run perpendicular to the (u, v) direction
        x1, y1 = cx - half * -sa, cy - half * ca
        x2, y2 = cx + half * -sa, cy + half * ca
        parts.append(f"M{t.f(t.px(x1))} {t.f(t.py(y1))}"
                     f"L{t.f(t.px(x2))} {t.f(t.py(y2))}")
    out = [f'<path d="{"".join(parts)}" stroke="{s.color}" fill="none"/>']
    if s.head:
        bx = s.p[0] + half * ca
        by = s.p[1] + half * sa
        tipx = s.p[0] + (half + s.head_height * s.length) * ca
        tipy = s.p[1] + (half + s.head_height * s.length) * sa
        hw = 0.5 * s.head_width * s.length
        corners = [(tipx, tipy),
                   (bx - hw * -sa, by - hw * ca),
                   (bx + hw * -sa, by + hw * ca)]
        out.append(t.polygon([(t.px(x), t.py(y)) for x, y in corners], s.color))
    return out


def _arrow_elems(a: Arrow, t: _Mapper) -> list[str]:
    if a.length <= 0.0:
        return []
    ca, sa = math.cos(a.angle), math.sin(a.angle)
    half = 0.5 * a.length
    tail = (a.p[0] - half * ca, a.p[1] - half * sa)
    tip = (a.p[0] + half * ca, a.p[1] + half * sa)
    head = _ARROW_HEAD_FRAC * a.length
    base = (tip[0] - head * ca, tip[1] - head * sa)
    hw = 0.5 * head
    corners = [(tip[0], tip[1]),
               (base[0] - hw * -sa, base[1] - hw * ca),
               (base[0] + hw * -sa, base[1] + hw * ca)]
    return [t.line(t.px(tail[0]), t.py(tail[1]), t.px(tip[0]), t.py(tip[1]),
                   a.color),
            t.polygon([(t.px(x), t.py(y)) for x, y in corners], a.color)]


def _square(p, side, t: _Mapper, color, fill: bool) -> str:
    x = t.px(p[0] - 0.5 * side)
    y = t.py(p[1] + 0.5 * side)
    w = side * t._sx
    h = side * t._sy
    paint = (f'fill="{color}"' if fill else f'fill="none" stroke="{color}"')
    return (f'<rect x="{t.f(x)}" y="{t.f(y)}" width="{t.f(w)}" '
            f'height="{t.f(h)}" {paint}/>')


def _block_elems(b: Block, t: _Mapper) -> list[str]:
    if b.n <= 0:
        # the zero square: small, hollow, palette zero color
        return [_square(b.p, b.size / 3.0, t, b.color, fill=False)]
    return [_square(b.p, b.size * k / b.n, t, b.color, fill=False)
            for k in range(1, b.n + 1)]


def _poly_elems(p: Polyline, t: _Mapper) -> list[str]:
    pts = " ".join(f"{t.f(t.px(x))},{t.f(t.py(y))}" for x, y in p.pts)
    out = [f'<polyline points="{pts}" fill="none" stroke="black"/>']
    if p.label is not None:
        lx, ly = p.pts[len(p.pts) // 2]
        out.append(f'<text x="{t.f(t.px(lx))}" y="{t.f(t.py(ly))}" '
                   f'font-size="{int(p.label_size)}">{escape(p.label)}</text>')
    return out


def _marker_elems(m: Marker, t: _Mapper) -> list[str]:
    x, y = t.px(m.p[0]), t.py(m.p[1])
    if m.kind == "infinite":
        return [f'<circle cx="{t.f(x)}" cy="{t.f(y)}" r="{t.f(_MARKER_RADIUS)}" '
                f'fill="red"/>']
    half = 0.5 * _MARKER_SIDE
    return [f'<rect x="{t.f(x - half)}" y="{t.f(y - half)}" '
            f'width="{t.f(_MARKER_SIDE)}" height="{t.f(_MARKER_SIDE)}" '
            f'fill="grey"/>']


def _inset_elems(p: InsetScene, t: _Mapper, surround_space: float) -> list[str]:
    side = p.size * t.canvas
    x = t.px(p.anchor[0]) - 0.5 * side
    y = t.py(p.anchor[1]) - 0.5 * side
    inner = _Mapper(p.scene, surround_space, t.canvas, t.sig_digits)
    out = [f'<svg x="{t.f(x)}" y="{t.f(y)}" width="{t.f(side)}" '
           f'height="{t.f(side)}" viewBox="0 0 {t.f(inner.total)} '
           f'{t.f(inner.total)}">']
    out += _body(inner, p.scene, surround_space)
    out.append("</svg>")
    return out


def _body(t: _Mapper, scene: Scene, surround_space: float) -> list[str]:
    out = [f'<rect x="0" y="0" width="{t.f(t.total)}" height="{t.f(t.total)}" '
           f'fill="white"/>',
           f'<rect x="{t.f(t.margin)}" y="{t.f(t.margin)}" '
           f'width="{t.f(t.canvas)}" height="{t.f(t.canvas)}" '
           f'fill="none" stroke="black"/>']
    groups = {kind: [] for kind in _GROUP_ORDER}
    for prim in scene.primitives:
        kind = _KIND_OF[type(prim)]
        if kind == "stack":
            groups[kind] += _stack_elems(prim, t)
        elif kind == "arrow":
            groups[kind] += _arrow_elems(prim, t)
        elif kind == "block":
            groups[kind] += _block_elems(prim, t)
        elif kind == "poly":
            groups[kind] += _poly_elems(prim, t)
        elif kind == "marker":
            groups[kind] += _marker_elems(prim, t)
        else:
            groups[kind] += _inset_elems(prim, t, surround_space)
    for kind in _GROUP_ORDER:
        if groups[kind]:
            out.append(f'<g class="{kind}">')
            out += groups[kind]
            out.append("</g>")
    return out


def render_svg(scene: Scene, surround_space: float = 10.0,
               canvas_px: float = DEFAULT_CANVAS,
               sig_digits: int = DEFAULT_SIG_DIGITS) -> str:
    """Emit the scene as a standalone SVG document string."""
    if not surround_space >= 1.0:
        raise StyleError("surround_space must be at least 1")
    if not (canvas_px > 0 and sig_digits >= 1):
        raise StyleError("canvas_px must be positive and sig_digits at least 1")
    t = _Mapper(scene, surround_space, float(canvas_px), int(sig_digits))
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
             f'width="{t.f(t.total)}" height="{t.f(t.total)}" '
             f'viewBox="0 0 {t.f(t.total)} {t.f(t.total)}">']
    lines += _body(t, scene, surround_space)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
