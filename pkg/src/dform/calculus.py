"""Exterior calculus on plane fields.

Every operation takes field objects and returns new ones.  Operations
that have an analytic form work in one of two modes:

* analytic: result expressions are composed from the input expressions
  (differentiated symbolically where needed), simplified, and evaluated
  on the grid.  Requires expressions on every input component.
* numeric: result values are computed from the input value arrays;
  derivatives use second-order finite differences.  Result components
  carry no expressions.

mode=None picks analytic when all inputs carry expressions and numeric
otherwise.  Passing mode="analytic" without expressions is an error.

Singular points need no special casing here: arithmetic on inf and nan
values propagates them, and masks are recomputed from the result
arrays.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import OperationError
from .expr import (
    Expr,
    add,
    const,
    differentiate,
    div as expr_div,
    evaluate,
    mul,
    neg,
    parse,
    simplify,
    sub,
)
from .fields import (
    Form0,
    Form1,
    Form2,
    Grid2,
    Metric,
    ScalarField,
    VectorField,
    ZeroForm,
)

MODES = ("analytic", "numeric")


def _resolve_mode(mode, *objs) -> str:
    if mode is None:
        return "analytic" if all(o.exprs is not None for o in objs) else "numeric"
    if mode not in MODES:
        raise OperationError(f"unknown mode {mode!r}; use 'analytic' or 'numeric'")
    if mode == "analytic":
        for o in objs:
            if o.exprs is None:
                raise OperationError(
                    "analytic mode requires expressions on every component; "
                    "give_eqn first or use numeric mode")
    return mode


def _same_grid(*objs) -> Grid2:
    g = objs[0].grid
    for o in objs[1:]:
        if not g.same_as(o.grid):
            raise OperationError("objects live on different grids")
    return g


def _field(grid, threshold, values=None, expr=None) -> ScalarField:
    return ScalarField.build(grid, values=values, expr=expr, threshold=threshold)


def _num_dx(c: ScalarField) -> np.ndarray:
    with np.errstate(all="ignore"):
        return np.gradient(c.values, c.grid.x, axis=0, edge_order=2)


def _num_dy(c: ScalarField) -> np.ndarray:
    with np.errstate(all="ignore"):
        return np.gradient(c.values, c.grid.y, axis=1, edge_order=2)


# --- exterior derivative ---


def ext_d(obj, mode=None):
    """d: 0-forms to 1-forms, 1-forms to 2-forms."""
    if obj.kind == "form2":
        raise OperationError("exterior derivative of a top-degree form is zero")
    if obj.kind == "vf":
        raise OperationError("exterior derivative applies to forms, not vector fields")
    g, t = obj.grid, obj.threshold
    m = _resolve_mode(mode, obj)
    if obj.kind == "form0":
        phi = obj.phi
        if m == "analytic":
            return Form1(_field(g, t, expr=differentiate(phi.expr, "x")),
                         _field(g, t, expr=differentiate(phi.expr, "y")))
        return Form1(_field(g, t, values=_num_dx(phi)),
                     _field(g, t, values=_num_dy(phi)))
    if m == "analytic":
        w = simplify(sub(differentiate(obj.v.expr, "x"),
                         differentiate(obj.u.expr, "y")))
        return Form2(_field(g, t, expr=w))
    return Form2(_field(g, t, values=_num_dx(obj.v) - _num_dy(obj.u)))


# --- interior derivative ---


def _as_vector(v, grid: Grid2, threshold: float) -> VectorField:
    """Coerce the contraction argument to a vector field on grid.

    Accepts a VectorField, a pair of expressions or strings, a pair of
    value arrays, or a pair of numbers (taken as constant components).
    None means the default field (1, 1).
    """
    if v is None:
        v = ("1", "1")
    if isinstance(v, VectorField):
        if not grid.same_as(v.grid):
            raise OperationError("contraction field lives on a different grid")
        return v
    try:
        a, b = v
    except (TypeError, ValueError):
        raise OperationError(
            "contraction argument must be a vector field or a pair of components"
        ) from None
    comps = []
    for c in (a, b):
        if isinstance(c, (str, Expr)):
            comps.append(_field(grid, threshold, expr=c))
        elif np.isscalar(c):
            comps.append(_field(grid, threshold, expr=const(float(c))))
        else:
            comps.append(_field(grid, threshold, values=c))
    return VectorField(*comps)


def interior_d(obj, v=None, mode=None):
    """Contraction with a vector field: 1-forms to 0-forms, 2-forms to 1-forms."""
    if obj.kind not in ("form1", "form2"):
        raise OperationError("interior derivative applies to 1-forms and 2-forms")
    g, t = obj.grid, obj.threshold
    vf = _as_vector(v, g, t)
    m = _resolve_mode(mode, obj, vf)
    if obj.kind == "form1":
        if m == "analytic":
            phi = simplify(add(mul(obj.u.expr, vf.u.expr),
                               mul(obj.v.expr, vf.v.expr)))
            return Form0(_field(g, t, expr=phi))
        with np.errstate(all="ignore"):
            vals = obj.u.values * vf.u.values + obj.v.values * vf.v.values
        return Form0(_field(g, t, values=vals))
    if m == "analytic":
        return Form1(_field(g, t, expr=simplify(neg(mul(obj.w.expr, vf.v.expr)))),
                     _field(g, t, expr=simplify(mul(obj.w.expr, vf.u.expr))))
    with np.errstate(all="ignore"):
        return Form1(_field(g, t, values=-(obj.w.values * vf.v.values)),
                     _field(g, t, values=obj.w.values * vf.u.values))


# --- Hodge star ---


def hodge(obj, mode=None, keep_object=False):
    """Flat Hodge star: phi to phi dxdy, (u,v) to (-v,u), w dxdy to w."""
    if obj.kind == "vf":
        raise OperationError("hodge applies to forms, not vector fields")
    if keep_object and obj.kind != "form1":
        raise OperationError("keep_object applies to 1-forms only")
    if mode is not None and mode not in MODES:
        raise OperationError(f"unknown mode {mode!r}; use 'analytic' or 'numeric'")
    g, t = obj.grid, obj.threshold
    if obj.kind == "form0":
        p = obj.phi
        return Form2(_field(g, t, values=p.values, expr=p.expr))
    if obj.kind == "form2":
        w = obj.w
        return Form0(_field(g, t, values=w.values, expr=w.expr))
    m = _resolve_mode(mode, obj)
    if m == "analytic":
        new_u = _field(g, t, expr=simplify(neg(obj.v.expr)))
        new_v = _field(g, t, expr=obj.u.expr)
    else:
        new_u = _field(g, t, values=-obj.v.values)
        new_v = _field(g, t, values=obj.u.values)
    if keep_object:
        obj.u, obj.v = new_u, new_v
        return obj
    return Form1(new_u, new_v)


# --- wedge product ---

_DEGREE = {"form0": 0, "form1": 1, "form2": 2}


def wedge(a, b, mode=None):
    """Wedge product of two forms; degrees above 2 give a tagged zero."""
    for o in (a, b):
        if o.kind not in _DEGREE:
            raise OperationError("wedge applies to forms, not vector fields")
    g = _same_grid(a, b)
    p, q = _DEGREE[a.kind], _DEGREE[b.kind]
    if p + q > 2:
        return ZeroForm(g, p + q)
    t = a.threshold
    if p > q:
        # graded commutation: only odd-odd pairs pick up a sign, and the
        # only such pair below top degree is (1,1), handled separately
        a, b = b, a
        p, q = q, p
    m = _resolve_mode(mode, a, b)
    if p == 0:
        phi = a.phi

        def scaled(c: ScalarField) -> ScalarField:
            if m == "analytic":
                return _field(g, t, expr=simplify(mul(phi.expr, c.expr)))
            with np.errstate(all="ignore"):
                return _field(g, t, values=phi.values * c.values)

        if q == 0:
            return Form0(scaled(b.phi))
        if q == 1:
            return Form1(scaled(b.u), scaled(b.v))
        return Form2(scaled(b.w))
    # (1,1): w = a_u b_v - a_v b_u
    if m == "analytic":
        w = simplify(sub(mul(a.u.expr, b.v.expr), mul(a.v.expr, b.u.expr)))
        return Form2(_field(g, t, expr=w))
    with np.errstate(all="ignore"):
        vals = a.u.values * b.v.values - a.v.values * b.u.values
    return Form2(_field(g, t, values=vals))


# --- metric maps ---


def _metric_for(obj, metric) -> Metric:
    if metric is None:
        return Metric.identity(obj.grid, threshold=obj.threshold)
    if not obj.grid.same_as(metric.grid):
        raise OperationError("metric lives on a different grid")
    return metric


def covariant(vf, metric: Metric | None = None, mode=None) -> Form1:
    """Lower indices: alpha_i = g_ij v^j."""
    if vf.kind != "vf":
        raise OperationError("covariant applies to vector fields")
    g, t = vf.grid, vf.threshold
    met = _metric_for(vf, metric)
    m = _resolve_mode(mode, vf, met)
    if m == "analytic":
        a1 = simplify(add(mul(met.gxx.expr, vf.u.expr), mul(met.gxy.expr, vf.v.expr)))
        a2 = simplify(add(mul(met.gyx.expr, vf.u.expr), mul(met.gyy.expr, vf.v.expr)))
        return Form1(_field(g, t, expr=a1), _field(g, t, expr=a2))
    with np.errstate(all="ignore"):
        a1 = met.gxx.values * vf.u.values + met.gxy.values * vf.v.values
        a2 = met.gyx.values * vf.u.values + met.gyy.values * vf.v.values
    return Form1(_field(g, t, values=a1), _field(g, t, values=a2))


def contravariant(form, metric: Metric | None = None, mode=None) -> VectorField:
    """Raise indices with the pointwise 2x2 inverse of the metric.

    Points where the metric determinant vanishes become undefined in the
    result (they join the mask) rather than aborting the operation.
    """
    if form.kind != "form1":
        raise OperationError("contravariant applies to 1-forms")
    g, t = form.grid, form.threshold
    met = _metric_for(form, metric)
    m = _resolve_mode(mode, form, met)
    gxx, gxy, gyx, gyy = (c.values for c in met.components)
    with np.errstate(all="ignore"):
        det = gxx * gyy - gxy * gyx
    if m == "analytic":
        det_e = simplify(sub(mul(met.gxx.expr, met.gyy.expr),
                             mul(met.gxy.expr, met.gyx.expr)))
        u_e = simplify(expr_div(sub(mul(met.gyy.expr, form.u.expr),
                                    mul(met.gxy.expr, form.v.expr)), det_e))
        v_e = simplify(expr_div(sub(mul(met.gxx.expr, form.v.expr),
                                    mul(met.gyx.expr, form.u.expr)), det_e))
        X, Y = g.meshes()
        u_vals = np.broadcast_to(np.asarray(evaluate(u_e, X, Y), dtype=np.float64),
                                 g.shape).copy()
        v_vals = np.broadcast_to(np.asarray(evaluate(v_e, X, Y), dtype=np.float64),
                                 g.shape).copy()
    else:
        u_e = v_e = None
        with np.errstate(all="ignore"):
            u_vals = (gyy * form.u.values - gxy * form.v.values) / det
            v_vals = (gxx * form.v.values - gyx * form.u.values) / det
    singular = det == 0.0
    if singular.any():
        u_vals[singular] = np.nan
        v_vals[singular] = np.nan
    return VectorField(_field(g, t, values=u_vals, expr=u_e),
                       _field(g, t, values=v_vals, expr=v_e))


# --- zoom windows and derivative insets ---


@dataclass(frozen=True)
class ZoomSpec:
    """Window request: where to look, how hard, at what resolution."""

    target: tuple[float, float] = (0.0, 0.0)
    mag: float = 2.0
    dpd: int = 9
    insize: float = 0.3

    def __post_init__(self):
        if not np.isfinite(self.mag) or self.mag <= 0:
            raise OperationError("zoom magnification must be positive")
        if int(self.dpd) < 2 or int(self.dpd) != self.dpd:
            raise OperationError("zoom needs a whole number of points per axis, at least 2")
        if not 0 < self.insize <= 1:
            raise OperationError("inset size must be in (0, 1]")


@dataclass(frozen=True)
class Inset:
    """Where a child scene is pinned on its parent, and how large."""

    anchor: tuple[float, float]
    size: float


def _window_grid(obj, spec: ZoomSpec) -> Grid2:
    x0, x1, y0, y1 = obj.grid.extent
    tx, ty = spec.target
    if not (x0 <= tx <= x1 and y0 <= ty <= y1):
        warnings.warn(f"window target ({tx}, {ty}) lies outside the grid extent",
                      stacklevel=3)
    hx = (x1 - x0) / 2 / spec.mag**2
    hy = (y1 - y0) / 2 / spec.mag**2
    return Grid2.from_ranges(tx - hx, tx + hx, int(spec.dpd),
                             ty - hy, ty + hy, int(spec.dpd))


def _require_exprs(obj, op: str):
    if obj.exprs is None:
        raise OperationError(f"{op} requires expressions; give_eqn first")


def zoom(obj, spec: ZoomSpec):
    """Re-evaluate obj on a window around spec.target, shrunk by mag^2.

    Returns the windowed object and the Inset describing where it hangs
    on the parent scene.  0-forms are excluded: their contour picture
    has no meaningful magnified re-read.
    """
    if obj.kind not in ("form1", "form2", "vf"):
        raise OperationError("zoom applies to 1-forms, 2-forms and vector fields")
    _require_exprs(obj, "zoom")
    child = obj._on_grid(_window_grid(obj, spec))
    return child, Inset(spec.target, spec.insize)


def _local_difference(vf, spec: ZoomSpec):
    """D(p) = F(p) - F(target) evaluated on the window grid."""
    _require_exprs(vf, "derivative insets")
    W = _window_grid(vf, spec)
    tx, ty = spec.target
    comps = []
    for c in vf.components:
        f0 = float(evaluate(c.expr, np.float64(tx), np.float64(ty)))
        comps.append(simplify(sub(c.expr, const(f0))))
    X, Y = W.meshes()
    vals = [np.broadcast_to(np.asarray(evaluate(e, X, Y), dtype=np.float64),
                            W.shape).copy() for e in comps]
    return W, comps, vals


def deriv(vf, spec: ZoomSpec):
    """Local difference field F(p) - F(target) on a window around target."""
    if vf.kind != "vf":
        raise OperationError("derivative insets apply to vector fields")
    W, exprs, (du, dv) = _local_difference(vf, spec)
    t = vf.threshold
    child = VectorField(_field(W, t, values=du, expr=exprs[0]),
                        _field(W, t, values=dv, expr=exprs[1]))
    return child, Inset(spec.target, spec.insize)


def _projected(vf, spec: ZoomSpec, along: str):
    if vf.kind != "vf":
        raise OperationError("derivative insets apply to vector fields")
    W, _, (du, dv) = _local_difference(vf, spec)
    tx, ty = spec.target
    X, Y = W.meshes()
    rx = X - tx
    ry = Y - ty
    with np.errstate(all="ignore"):
        rr = rx * rx + ry * ry
        if along == "radial":
            ex, ey = rx, ry
        else:
            ex, ey = -ry, rx
        coef = np.where(rr > 0, (du * ex + dv * ey) / rr, 0.0)
        out_u = coef * ex
        out_v = coef * ey
    t = vf.threshold
    child = VectorField(_field(W, t, values=out_u), _field(W, t, values=out_v))
    return child, Inset(spec.target, spec.insize)


def div(vf, spec: ZoomSpec):
    """Radial part of the local difference: the divergence picture."""
    return _projected(vf, spec, "radial")


def curl(vf, spec: ZoomSpec):
    """Tangential part of the local difference: the curl picture."""
    return _projected(vf, spec, "tangential")
