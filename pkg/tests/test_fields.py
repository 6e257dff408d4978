"""Grids, scalar fields, masks, field objects and their wire format."""

import numpy as np
import pytest

from dform.errors import FieldError
from dform.fields import (
    FINITE,
    INFINITE,
    UNDEFINED,
    Form0,
    Form1,
    Form2,
    Grid2,
    Metric,
    ScalarField,
    VectorField,
    classify,
    grid_from_json,
    grid_to_json,
    make_field,
    object_from_json,
    object_to_json,
)
from dform.expr import parse


def grid(n=27, lo=-5.0, hi=5.0):
    return Grid2.from_ranges(lo, hi, n, lo, hi, n)


# --- Grid2 ---


def test_grid_shape_and_extent():
    g = Grid2.from_ranges(-5, 5, 27, -2, 2, 9)
    assert g.shape == (27, 9)
    assert g.extent == (-5.0, 5.0, -2.0, 2.0)
    assert g.x[13] == 0.0


def test_grid_meshes_are_ij_indexed():
    g = Grid2.from_ranges(0, 1, 3, 0, 2, 5)
    X, Y = g.meshes()
    assert X.shape == (3, 5)
    assert X[2, 0] == g.x[2]
    assert Y[0, 4] == g.y[4]


def test_grid_axes_are_read_only():
    g = grid(5)
    with pytest.raises(ValueError):
        g.x[0] = 99.0


@pytest.mark.parametrize("x", [
    [1.0],                       # too few points
    [0.0, 1.0, 1.0],             # not strictly increasing
    [0.0, 2.0, 1.0],             # decreasing step
    [0.0, 1.0, 3.0],             # non-uniform spacing
])
def test_grid_rejects_bad_axes(x):
    with pytest.raises(FieldError):
        Grid2(np.asarray(x, dtype=float), np.asarray([0.0, 1.0]))


def test_grid_accepts_offset_linspace():
    # spacing jitter of linspace far from the origin is ~1e-10 absolute,
    # which the relative tolerance must accept
    Grid2(np.linspace(1e6, 1e6 + 1, 31), np.linspace(0, 1, 5))


def test_grid_same_as():
    assert grid(9).same_as(grid(9))
    assert not grid(9).same_as(grid(11))


def test_grid_needs_two_points_per_axis():
    with pytest.raises(FieldError):
        Grid2.from_ranges(0, 1, 1, 0, 1, 5)


# --- mask classification ---


def test_classify_is_exhaustive_and_exclusive():
    vals = np.array([[1.0, np.inf], [-np.inf, np.nan], [2e15, -3.0]])
    mask = classify(vals, threshold=1e15)
    expected = np.array([[FINITE, INFINITE], [INFINITE, UNDEFINED],
                         [INFINITE, FINITE]], dtype=np.int8)
    assert np.array_equal(mask, expected)
    # every point holds exactly one of the three codes
    assert np.isin(mask, [FINITE, INFINITE, UNDEFINED]).all()


def test_classify_threshold_is_strict():
    vals = np.array([[1e15, np.nextafter(1e15, np.inf)]])
    mask = classify(vals, threshold=1e15)
    assert mask[0, 0] == FINITE
    assert mask[0, 1] == INFINITE


# --- ScalarField ---


def test_scalar_field_from_expr_matches_mesh_evaluation():
    g = grid(9)
    f = ScalarField.build(g, expr="x^2*y")
    X, Y = g.meshes()
    assert np.array_equal(f.values, X**2 * Y)
    assert f.expr == parse("x^2*y")


def test_scalar_field_constant_expr_broadcasts():
    f = ScalarField.build(grid(5), expr="3")
    assert f.values.shape == (5, 5)
    assert (f.values == 3.0).all()


def test_scalar_field_values_are_read_only_and_copied():
    src = np.ones((5, 5))
    f = ScalarField.build(grid(5), values=src)
    src[0, 0] = 7.0
    assert f.values[0, 0] == 1.0
    with pytest.raises(ValueError):
        f.values[0, 0] = 2.0


def test_scalar_field_shape_mismatch():
    with pytest.raises(FieldError):
        ScalarField.build(grid(5), values=np.ones((4, 5)))


def test_scalar_field_needs_a_source():
    with pytest.raises(FieldError):
        ScalarField.build(grid(5))


def test_masked_values_zero_out_singular_points():
    vals = np.ones((5, 5))
    vals[1, 1] = np.inf
    vals[2, 3] = np.nan
    f = ScalarField.build(grid(5), values=vals)
    assert f.masked_values[1, 1] == 0.0
    assert f.masked_values[2, 3] == 0.0
    assert f.masked_values.sum() == 23.0


def test_threshold_is_carried_by_the_field():
    f = ScalarField.build(grid(5), values=np.full((5, 5), 11.0), threshold=10.0)
    assert (f.mask == INFINITE).all()


# --- make_field ---


@pytest.mark.parametrize("kind,cls,n", [
    ("form0", Form0, 1), ("form1", Form1, 2), ("form2", Form2, 1), ("vf", VectorField, 2),
])
def test_make_field_kinds(kind, cls, n):
    obj = make_field(kind, grid(5), exprs=("x", "y")[:n])
    assert isinstance(obj, cls)
    assert obj.kind == kind
    assert len(obj.components) == n


def test_make_field_mixed_sources_per_component():
    g = grid(5)
    arr = np.full((5, 5), 2.0)
    obj = make_field("vf", g, exprs=("x", None), values=(None, arr))
    X, _ = g.meshes()
    assert np.array_equal(obj.u.values, X)
    assert np.array_equal(obj.v.values, arr)
    assert obj.exprs is None  # only one component has an expression


def test_make_field_rejects_unknown_kind():
    with pytest.raises(FieldError):
        make_field("form3", grid(5), exprs=("x",))


def test_make_field_rejects_wrong_component_count():
    with pytest.raises(FieldError):
        make_field("form1", grid(5), exprs=("x",))


def test_make_field_rejects_empty_component():
    with pytest.raises(FieldError):
        make_field("vf", grid(5), exprs=("x", None))


# --- singular handling on a concrete field ---


def test_screened_point_charge_masks_exactly_the_origin():
    # exp(-r)/r on a 27x27 grid over [-5,5]^2: the origin is a grid point
    # (index 13,13) where 1/0 gives +inf, so exactly one point is masked
    # as infinite and the other 728 stay finite
    obj = make_field("form0", grid(27), exprs=("exp(-sqrt(x^2+y^2))/sqrt(x^2+y^2)",))
    mask = obj.phi.mask
    assert mask[13, 13] == INFINITE
    assert np.isposinf(obj.phi.values[13, 13])
    assert (mask == FINITE).sum() == 728
    assert (mask != FINITE).sum() == 1


# --- give_eqn / set_density ---


def test_give_eqn_replaces_values():
    g = grid(9)
    obj = make_field("vf", g, values=(np.ones((9, 9)), np.ones((9, 9))))
    out = obj.give_eqn("x", "y")
    X, Y = g.meshes()
    assert np.array_equal(out.u.values, X)
    assert np.array_equal(out.v.values, Y)
    assert out.exprs == (parse("x"), parse("y"))
    # the original is untouched
    assert (obj.u.values == 1.0).all()


def test_give_eqn_on_form0():
    out = make_field("form0", grid(5), exprs=("1",)).give_eqn("x*y")
    X, Y = out.grid.meshes()
    assert np.array_equal(out.phi.values, X * Y)


def test_set_density_same_n_is_identity():
    obj = make_field("form1", grid(27), exprs=("y*sin(x)", "x"))
    out = obj.set_density(27)
    assert out.grid.same_as(obj.grid)
    assert np.array_equal(out.u.values, obj.u.values)


def test_set_density_changes_resolution_not_extent():
    obj = make_field("vf", grid(27), exprs=("x", "y"))
    out = obj.set_density(9)
    assert out.grid.shape == (9, 9)
    assert out.grid.extent == obj.grid.extent


def test_set_density_requires_expressions():
    obj = make_field("vf", grid(5), values=(np.ones((5, 5)), np.ones((5, 5))))
    with pytest.raises(FieldError):
        obj.set_density(9)


def test_set_density2_gives_rectangular_grid():
    obj = make_field("form2", grid(27), exprs=("x*y",))
    out = obj.set_density2(9, 5)
    assert out.grid.shape == (9, 5)
    assert out.grid.extent == obj.grid.extent


# --- log_scale ---


def test_log_scale_axis_aligned_vector_is_exact():
    g = grid(5)
    obj = make_field("vf", g, values=(np.full((5, 5), 10.0), np.zeros((5, 5))))
    out = obj.log_scale()
    # unit direction times new magnitude: (10,0) -> (log10(11), 0) bitwise
    assert (out.u.values == np.log10(11.0)).all()
    assert (out.v.values == 0.0).all()


def test_log_scale_zero_vector_stays_zero():
    obj = make_field("vf", grid(5), values=(np.zeros((5, 5)), np.zeros((5, 5))))
    out = obj.log_scale()
    assert (out.u.values == 0.0).all()
    assert (out.v.values == 0.0).all()


def test_log_scale_preserves_direction():
    g = grid(5)
    obj = make_field("form1", g, values=(np.full((5, 5), 3.0), np.full((5, 5), 4.0)))
    out = obj.log_scale()
    # magnitude is log10(6), direction (3,4)/5 is kept
    L = np.log10(6.0)
    assert np.allclose(out.u.values, 0.6 * L, rtol=1e-15, atol=0)
    assert np.allclose(out.v.values, 0.8 * L, rtol=1e-15, atol=0)
    assert np.hypot(out.u.values, out.v.values).max() == pytest.approx(L, rel=1e-15)


def test_log_scale_form2_keeps_sign():
    obj = make_field("form2", grid(5), values=(np.full((5, 5), -99.0),))
    out = obj.log_scale()
    # sign(w) * log10(1 + |w|) = -log10(100) = -2 exactly
    assert (out.w.values == -2.0).all()


def test_log_scale_drops_expressions():
    obj = make_field("vf", grid(5), exprs=("x", "y"))
    assert obj.log_scale().exprs is None


def test_log_scale_keeps_singular_points_masked():
    vals = np.ones((5, 5))
    vals[2, 2] = np.inf
    obj = make_field("vf", grid(5), values=(vals, np.ones((5, 5))))
    out = obj.log_scale()
    assert out.u.mask[2, 2] != FINITE


# --- Metric ---


def test_metric_identity():
    m = Metric.identity(grid(5))
    assert (m.gxx.values == 1.0).all()
    assert (m.gxy.values == 0.0).all()
    assert (m.gyy.values == 1.0).all()


def test_metric_rejects_asymmetry():
    g = grid(5)
    with pytest.raises(FieldError):
        Metric.build(g, ("1", "x", "y", "1"))


def test_metric_from_arrays():
    g = grid(5)
    off = np.full((5, 5), 0.5)
    m = Metric.build(g, (np.ones((5, 5)), off, off, np.ones((5, 5))))
    assert (m.gxy.values == m.gyx.values).all()
    assert m.exprs is None


# --- wire format ---


def test_grid_json_round_trip():
    g = Grid2.from_ranges(-5, 5, 27, -2, 2, 9)
    assert grid_from_json(grid_to_json(g)).same_as(g)


def test_grid_json_respects_size_cap():
    data = grid_to_json(grid(27))
    grid_from_json(data, max_n=27)
    with pytest.raises(FieldError):
        grid_from_json(data, max_n=26)


def test_object_json_round_trip_with_expressions():
    obj = make_field("vf", grid(9), exprs=("y*sin(x)", "-x"))
    data = object_to_json(obj)
    assert data["kind"] == "vf"
    assert data["components"][0]["expr"] == "y*sin(x)"
    back = object_from_json(data)
    assert np.array_equal(back.u.values, obj.u.values)
    assert back.exprs == obj.exprs


def test_object_json_round_trip_with_masked_values():
    obj = make_field("form0", grid(27), exprs=("exp(-sqrt(x^2+y^2))/sqrt(x^2+y^2)",))
    data = object_to_json(obj)
    comp = data["components"][0]
    # JSON cannot carry inf, so the masked point is written as 0.0 plus
    # a sparse mask entry that reinstates it on the way back in
    assert comp["values"][13][13] == 0.0
    assert comp["mask"] == [{"i": 13, "j": 13, "kind": "infinite"}]
    # values-only round trip: strip the expr to force the array path
    del comp["expr"]
    back = object_from_json(data)
    assert back.phi.mask[13, 13] == INFINITE
    finite = obj.phi.mask == FINITE
    assert np.array_equal(back.phi.values[finite], obj.phi.values[finite])


def test_object_json_values_input():
    data = {
        "kind": "form2",
        "grid": {"x": {"min": 0, "max": 1, "n": 2}, "y": {"min": 0, "max": 1, "n": 2}},
        "components": [{"values": [[1.0, 2.0], [3.0, 4.0]]}],
    }
    obj = object_from_json(data)
    # row-major: values[i][j] is the point (x[i], y[j])
    assert obj.w.values[1, 0] == 3.0


@pytest.mark.parametrize("data", [
    "not an object",
    {},
    {"kind": "nope", "grid": {}, "components": []},
    {"kind": "form0", "grid": {"x": {"min": 0, "max": 1, "n": 2}}, "components": [{}]},
    {"kind": "form0",
     "grid": {"x": {"min": 0, "max": 1, "n": 2}, "y": {"min": 0, "max": 1, "n": 2}},
     "components": []},
    {"kind": "form0",
     "grid": {"x": {"min": 0, "max": 1, "n": 2}, "y": {"min": 0, "max": 1, "n": 2}},
     "components": [{}]},
    {"kind": "form0",
     "grid": {"x": {"min": 0, "max": 1, "n": 2}, "y": {"min": 0, "max": 1, "n": 2}},
     "components": [{"values": [[0.0, 0.0], [0.0, 0.0]],
                     "mask": [{"i": 0, "j": 0, "kind": "bogus"}]}]},
])
def test_object_json_rejects_malformed_input(data):
    with pytest.raises(FieldError):
        object_from_json(data)
