"""Grid-backed scalar fields, differential forms and vector fields.

Every object lives on a uniform rectangular Grid2.  Component data sits
in ScalarField values arrays of shape (nx, ny), indexed [i, j] for the
point (x[i], y[j]).  A singularity mask is computed whenever values are
(re)built: points are finite, infinite (actual infinities or magnitude
above the configured threshold) or undefined (not-a-number).  Masked
points keep their raw values in the array; consumers that scale or
normalise use masked_values, where they count as zero.

Objects behave as values: operations return new objects.  The one
declared exception is the keep_object variant of the Hodge star on
1-forms, which swaps components in place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import FieldError
from .expr import Expr, evaluate, parse, simplify, to_string

FINITE = 0
INFINITE = 1
UNDEFINED = 2

_MASK_NAMES = {FINITE: "finite", INFINITE: "infinite", UNDEFINED: "undefined"}
_MASK_CODES = {v: k for k, v in _MASK_NAMES.items()}

KINDS = ("form0", "form1", "form2", "vf")


def _validate_axis(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 1 or a.size < 2:
        raise FieldError(f"{name} axis needs at least 2 points in one dimension")
    if not np.all(np.diff(a) > 0):
        raise FieldError(f"{name} axis must be strictly increasing")
    h = (a[-1] - a[0]) / (a.size - 1)
    tol = 1e-12 * max(np.abs(a).max(), h)
    if np.abs(np.diff(a) - h).max() > tol:
        raise FieldError(f"{name} axis spacing is not uniform")
    a = a.copy()
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Grid2:
    """A uniform rectangular grid, strictly increasing along both axes."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _validate_axis(self.x, "x"))
        object.__setattr__(self, "y", _validate_axis(self.y, "y"))

    @classmethod
    def from_ranges(cls, xmin, xmax, nx, ymin, ymax, ny) -> "Grid2":
        if nx < 2 or ny < 2:
            raise FieldError("grids need at least 2 points per axis")
        return cls(np.linspace(xmin, xmax, int(nx)), np.linspace(ymin, ymax, int(ny)))

    @property
    def nx(self) -> int:
        return self.x.size

    @property
    def ny(self) -> int:
        return self.y.size

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x.size, self.y.size)

    @property
    def extent(self) -> tuple[float, float, float, float]:
        return (float(self.x[0]), float(self.x[-1]), float(self.y[0]), float(self.y[-1]))

    def meshes(self):
        return np.meshgrid(self.x, self.y, indexing="ij")

    def same_as(self, other: "Grid2") -> bool:
        return (
            self.shape == other.shape
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
        )


def classify(values: np.ndarray, threshold: float) -> np.ndarray:
    """Mask codes per point: undefined beats infinite beats finite."""
    mask = np.zeros(values.shape, dtype=np.int8)
    with np.errstate(invalid="ignore"):
        mask[np.isinf(values) | (np.abs(values) > threshold)] = INFINITE
        mask[np.isnan(values)] = UNDEFINED
    return mask


@dataclass(frozen=True)
class ScalarField:
    """values on a grid plus the singularity mask; expr when one is known."""

    grid: Grid2
    values: np.ndarray
    mask: np.ndarray
    expr: Expr | None = None
    threshold: float = DEFAULT.singular_threshold

    @classmethod
    def build(cls, grid: Grid2, values=None, expr=None,
              threshold: float = DEFAULT.singular_threshold) -> "ScalarField":
        if isinstance(expr, str):
            expr = parse(expr)
        if values is None:
            if expr is None:
                raise FieldError("a component needs grid values or an expression")
            X, Y = grid.meshes()
            values = np.broadcast_to(np.asarray(evaluate(expr, X, Y), dtype=np.float64),
                                     grid.shape).copy()
        else:
            values = np.asarray(values, dtype=np.float64).copy()
            if values.shape != grid.shape:
                raise FieldError(
                    f"component shape {values.shape} does not match grid {grid.shape}")
        values.setflags(write=False)
        mask = classify(values, threshold)
        mask.setflags(write=False)
        return cls(grid, values, mask, expr, threshold)

    @property
    def masked_values(self) -> np.ndarray:
        """values with every masked point replaced by 0 (for scaling math)."""
        return np.where(self.mask != FINITE, 0.0, self.values)

    def with_expr(self, expr) -> "ScalarField":
        """Re-evaluate this component from expr on the same grid."""
        return ScalarField.build(self.grid, expr=expr, threshold=self.threshold)


def _parse_sources(sources, n: int):
    if len(sources) != n:
        raise FieldError(f"expected {n} component expression(s), got {len(sources)}")
    return tuple(parse(s) if isinstance(s, str) else s for s in sources)


class _FieldBase:
    """Shared behaviour: expression attachment, resampling, log scaling."""

    kind = ""
    component_names: tuple[str, ...] = ()

    @property
    def grid(self) -> Grid2:
        return self.components[0].grid

    @property
    def components(self) -> tuple[ScalarField, ...]:
        return tuple(getattr(self, name) for name in self.component_names)

    @property
    def exprs(self):
        ex = tuple(c.expr for c in self.components)
        return ex if all(e is not None for e in ex) else None

    @property
    def threshold(self) -> float:
        return self.components[0].threshold

    def give_eqn(self, *sources):
        """Attach expressions; grid values are replaced by their evaluation."""
        exprs = _parse_sources(sources, len(self.component_names))
        return type(self)(*(c.with_expr(e) for c, e in zip(self.components, exprs)))

    def _on_grid(self, grid: Grid2):
        if self.exprs is None:
            raise FieldError(f"{self.kind} has no expressions attached; "
                             "give_eqn first or build from expressions")
        return type(self)(*(ScalarField.build(grid, expr=c.expr, threshold=c.threshold)
                            for c in self.components))

    def set_density(self, n: int):
        """Re-evaluate on an n by n grid spanning the same extent (needs expressions)."""
        x0, x1, y0, y1 = self.grid.extent
        return self._on_grid(Grid2.from_ranges(x0, x1, n, y0, y1, n))

    def log_scale(self):
        raise NotImplementedError


def _log_scale_signed(values: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        return np.sign(values) * np.log10(1.0 + np.abs(values))


def _log_scale_pair(u: np.ndarray, v: np.ndarray):
    """Rescale vector magnitudes to log10(1+m), keeping direction.

    Computed as unit-direction times the new magnitude so that an axis
    aligned vector like (10, 0) maps exactly to (log10(11), 0).
    """
    with np.errstate(all="ignore"):
        m = np.hypot(u, v)
        L = np.log10(1.0 + m)
        new_u = np.where(m > 0, (u / m) * L, 0.0)
        new_v = np.where(m > 0, (v / m) * L, 0.0)
    return new_u, new_v


class _PairBase(_FieldBase):
    component_names = ("u", "v")

    def log_scale(self):
        """Log-scaled copy; expressions no longer apply, so they are dropped."""
        new_u, new_v = _log_scale_pair(self.u.values, self.v.values)
        t = self.threshold
        g = self.grid
        return type(self)(ScalarField.build(g, values=new_u, threshold=t),
                          ScalarField.build(g, values=new_v, threshold=t))


@dataclass
class Form0(_FieldBase):
    phi: ScalarField
    kind = "form0"
    component_names = ("phi",)

    def log_scale(self):
        new = _log_scale_signed(self.phi.values)
        return Form0(ScalarField.build(self.grid, values=new, threshold=self.threshold))


@dataclass
class Form1(_PairBase):
    u: ScalarField
    v: ScalarField
    kind = "form1"


@dataclass
class VectorField(_PairBase):
    u: ScalarField
    v: ScalarField
    kind = "vf"


@dataclass
class Form2(_FieldBase):
    w: ScalarField
    kind = "form2"
    component_names = ("w",)

    def set_density2(self, n: int, m: int):
        """Re-evaluate on an n by m grid spanning the same extent."""
        x0, x1, y0, y1 = self.grid.extent
        return self._on_grid(Grid2.from_ranges(x0, x1, n, y0, y1, m))

    def log_scale(self):
        new = _log_scale_signed(self.w.values)
        return Form2(ScalarField.build(self.grid, values=new, threshold=self.threshold))


@dataclass(frozen=True)
class ZeroForm:
    """Identically-zero result of a wedge that exceeds the plane's top degree."""

    grid: Grid2
    degree: int
    kind = "zero"


_KIND_CLASS = {"form0": Form0, "form1": Form1, "form2": Form2, "vf": VectorField}
_KIND_NCOMP = {"form0": 1, "form1": 2, "form2": 1, "vf": 2}


def kind_of(obj) -> str:
    return obj.kind


def make_field(kind: str, grid: Grid2, exprs=None, values=None,
               threshold: float = DEFAULT.singular_threshold):
    """Construct a form or vector field from expressions and/or value arrays.

    exprs and values are sequences with one entry per component (1 for
    form0/form2, 2 for form1/vf); entries may be None when the other
    source supplies that component.  Supplying neither for any
    component is an error.
    """
    if kind not in _KIND_CLASS:
        raise FieldError(f"unknown field kind {kind!r}")
    n = _KIND_NCOMP[kind]
    exprs = tuple(exprs) if exprs is not None else (None,) * n
    values = tuple(values) if values is not None else (None,) * n
    if len(exprs) != n or len(values) != n:
        raise FieldError(f"{kind} takes {n} component(s)")
    comps = []
    for i, (e, val) in enumerate(zip(exprs, values)):
        if e is None and val is None:
            raise FieldError(
                f"component {i} of {kind}: neither values nor an expression supplied")
        if isinstance(e, str):
            e = parse(e)
        comps.append(ScalarField.build(grid, values=val, expr=e, threshold=threshold))
    return _KIND_CLASS[kind](*comps)


@dataclass(frozen=True)
class Metric:
    """Symmetric 2x2 metric field g_ij; defaults to the flat identity."""

    gxx: ScalarField
    gxy: ScalarField
    gyx: ScalarField
    gyy: ScalarField

    def __post_init__(self):
        if not np.array_equal(self.gxy.values, self.gyx.values, equal_nan=True):
            raise FieldError("metric must be symmetric: g_xy and g_yx differ")

    @property
    def grid(self) -> Grid2:
        return self.gxx.grid

    @property
    def components(self):
        return (self.gxx, self.gxy, self.gyx, self.gyy)

    @property
    def exprs(self):
        ex = tuple(c.expr for c in self.components)
        return ex if all(e is not None for e in ex) else None

    @classmethod
    def build(cls, grid: Grid2, sources,
              threshold: float = DEFAULT.singular_threshold) -> "Metric":
        """sources: four expressions or arrays, row-major (gxx, gxy, gyx, gyy)."""
        if len(sources) != 4:
            raise FieldError("a metric takes 4 components (gxx, gxy, gyx, gyy)")
        comps = []
        for s in sources:
            if isinstance(s, (str, Expr)):
                comps.append(ScalarField.build(grid, expr=s, threshold=threshold))
            else:
                comps.append(ScalarField.build(grid, values=s, threshold=threshold))
        return cls(*comps)

    @classmethod
    def identity(cls, grid: Grid2,
                 threshold: float = DEFAULT.singular_threshold) -> "Metric":
        return cls.build(grid, ("1", "0", "0", "1"), threshold=threshold)


# --- wire format ---


def grid_to_json(grid: Grid2) -> dict:
    x0, x1, y0, y1 = grid.extent
    return {
        "x": {"min": x0, "max": x1, "n": grid.nx},
        "y": {"min": y0, "max": y1, "n": grid.ny},
    }


def grid_from_json(data: dict, max_n: int | None = None) -> Grid2:
    try:
        gx, gy = data["x"], data["y"]
        nx, ny = int(gx["n"]), int(gy["n"])
        args = (float(gx["min"]), float(gx["max"]), nx,
                float(gy["min"]), float(gy["max"]), ny)
    except (KeyError, TypeError, ValueError) as exc:
        raise FieldError(f"bad grid specification: {exc}") from None
    if max_n is not None and (nx > max_n or ny > max_n):
        raise FieldError(f"grid too large: limit is {max_n} points per axis")
    return Grid2.from_ranges(*args)


def _mask_to_json(mask: np.ndarray) -> list:
    out = []
    for i, j in zip(*np.nonzero(mask)):
        out.append({"i": int(i), "j": int(j), "kind": _MASK_NAMES[int(mask[i, j])]})
    return out


def object_to_json(obj) -> dict:
    """Serialize to the object wire format (row-major nx-by-ny values).

    Masked points are written as 0.0 in values (JSON has no inf/nan)
    with their positions and kinds in the sparse mask list.
    """
    comps = []
    for c in obj.components:
        entry = {"values": [[float(v) for v in row] for row in c.masked_values]}
        if c.expr is not None:
            entry["expr"] = to_string(c.expr)
        m = _mask_to_json(c.mask)
        if m:
            entry["mask"] = m
        comps.append(entry)
    return {"kind": obj.kind, "grid": grid_to_json(obj.grid), "components": comps}


def object_from_json(data: dict, max_n: int | None = None,
                     threshold: float = DEFAULT.singular_threshold):
    """Build an object from the wire format.

    A component carries "expr" and/or "values"; expressions win when both
    are present (values are then replaced by evaluation, matching
    give_eqn).  A sparse "mask" reinstates singular points on values
    input: undefined becomes nan, infinite becomes +inf.
    """
    if not isinstance(data, dict):
        raise FieldError("object specification must be a JSON object")
    kind = data.get("kind")
    if kind not in _KIND_CLASS:
        raise FieldError(f"unknown field kind {kind!r}")
    grid = grid_from_json(data.get("grid") or {}, max_n=max_n)
    comps_json = data.get("components")
    n = _KIND_NCOMP[kind]
    if not isinstance(comps_json, list) or len(comps_json) != n:
        raise FieldError(f"{kind} takes exactly {n} component(s)")
    exprs, values = [], []
    for entry in comps_json:
        if not isinstance(entry, dict):
            raise FieldError("each component must be a JSON object")
        e = entry.get("expr")
        val = entry.get("values")
        if e is not None:
            exprs.append(parse(e))
            values.append(None)
            continue
        if val is None:
            raise FieldError("component has neither 'expr' nor 'values'")
        arr = np.asarray(val, dtype=np.float64)
        for m in entry.get("mask") or ():
            code = _MASK_CODES.get(m.get("kind"))
            if code is None:
                raise FieldError(f"unknown mask kind {m.get('kind')!r}")
            arr[int(m["i"]), int(m["j"])] = np.nan if code == UNDEFINED else np.inf
        exprs.append(None)
        values.append(arr)
    return make_field(kind, grid, exprs=exprs, values=values, threshold=threshold)
