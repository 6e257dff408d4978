"""HTTP facade: endpoints, error mapping, limits, statelessness."""

import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

import dform
from dform.config import EngineConfig
from dform.errors import ParseError
from dform.expr import parse
from dform.jobs import run_job
from dform.service import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def obj_json(kind="form1", comps=("y*sin(x)", "-x*cos(y)"), n=31,
             lo=-5.0, hi=5.0):
    return {"kind": kind,
            "grid": {"x": {"min": lo, "max": hi, "n": n},
                     "y": {"min": lo, "max": hi, "n": n}},
            "components": [{"expr": c} for c in comps]}


def test_health_reports_package_version(client):
    r = client.get("/api/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok", "version": dform.__version__}


def test_parse_ok(client):
    r = client.post("/api/parse", json={"expr": "y*sin(x)"})
    assert r.status_code == 200
    assert r.json() == {"ok": True, "nodes": 4, "variables": ["x", "y"],
                        "canonical": "y*sin(x)"}


def test_parse_error_carries_engine_offset(client):
    bad = "y*sin(x"
    with pytest.raises(ParseError) as exc:
        parse(bad)
    r = client.post("/api/parse", json={"expr": bad})
    assert r.status_code == 400
    body = r.json()
    assert body["offset"] == exc.value.offset
    assert body["error"] == str(exc.value).split(" (offset")[0] \
        or "expected" in body["error"]


def test_parse_rejects_missing_expr(client):
    assert client.post("/api/parse", json={}).status_code == 422


def test_scene_returns_scene_json(client):
    job = {"object": obj_json(), "style": {"max_sheets": 6},
           "zoom": {"target": [2, 3], "mag": 2, "dpd": 7, "insize": 0.3}}
    r = client.post("/api/scene", json=job)
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("application/json")
    scene = json.loads(r.content)
    assert scene["viewport"] == {"x": [-5.0, 5.0], "y": [-5.0, 5.0]}
    insets = [p for p in scene["primitives"] if p["t"] == "inset"]
    assert len(insets) == 1 and insets[0]["anchor"] == [2.0, 3.0]


def test_scene_output_field_cannot_change_payload_type(client):
    job = {"object": obj_json(n=5), "output": "svg"}
    r = client.post("/api/scene", json=job)
    assert r.status_code == 200
    json.loads(r.content)  # still scene JSON, not SVG


def test_render_matches_direct_runner_byte_for_byte(client):
    job = {"object": obj_json(),
           "zoom": {"target": [2, 3], "mag": 2, "dpd": 7, "insize": 0.3}}
    r = client.post("/api/render", json=job)
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("image/svg+xml")
    direct, _ = run_job({**job, "output": "svg"})
    assert r.content == direct.encode()


def test_chain_error_maps_to_400(client):
    job = {"object": obj_json(), "chain": [{"op": "ext_d"}, {"op": "ext_d"}]}
    r = client.post("/api/scene", json=job)
    assert r.status_code == 400
    assert "top-degree" in r.json()["error"]


def test_grid_cap_maps_to_400(client):
    r = client.post("/api/scene",
                    json={"object": obj_json("form0", ("x",), n=500)})
    assert r.status_code == 400
    assert r.json()["error"] == "grid too large: limit is 201 points per axis"


def test_oversized_body_is_413(client):
    job = {"object": obj_json("form0", ("x+" * 600000 + "x",), n=5)}
    r = client.post("/api/scene", json=job)
    assert r.status_code == 413


def test_pathological_expression_under_the_cap_is_400_not_a_crash(client):
    job = {"object": obj_json("form0", ("x+" * 30000 + "x",), n=5)}
    r = client.post("/api/scene", json=job)
    assert r.status_code == 400
    assert "nests too deeply" in r.json()["error"]


def test_body_cap_is_configurable():
    app = create_app(EngineConfig(max_body_bytes=64))
    with TestClient(app) as c:
        r = c.post("/api/parse", json={"expr": "x" * 200})
        assert r.status_code == 413
        assert c.post("/api/parse", json={"expr": "x"}).status_code == 200


def test_service_is_stateless(client):
    a = {"object": obj_json(), "zoom": {"target": [2, 3], "dpd": 7}}
    b = {"object": obj_json("form0", ("x*y",), n=21)}
    first = client.post("/api/render", json=a).content
    client.post("/api/render", json=b)
    client.post("/api/scene", json=b)
    again = client.post("/api/render", json=a).content
    assert first == again


def test_lorentz_force_scene(client):
    # magnetic 2-form falling off as 1/x, probed along +y
    job = {"object": obj_json("form2", ("1/x",), n=11, lo=0.5, hi=5.0),
           "chain": [{"op": "interior_d", "vx": 0.0, "vy": 1.0}]}
    r = client.post("/api/scene", json=job)
    assert r.status_code == 200
    scene = json.loads(r.content)
    stacks = [p for p in scene["primitives"] if p["t"] == "stack"]
    assert len(stacks) == 121
    assert all(p["angle"] == pytest.approx(np.pi) for p in stacks)
    rows = {}
    for p in stacks:
        rows.setdefault(p["p"][1], []).append((p["p"][0], p["n"]))
    for row in rows.values():
        ns = [n for _, n in sorted(row)]
        assert ns == sorted(ns, reverse=True), "sheet count must fall with x"


def test_static_side_loads_when_directory_exists(tmp_path):
    (tmp_path / "index.html").write_text("<!doctype html><p>explorer</p>")
    app = create_app(static_dir=tmp_path)
    with TestClient(app) as c:
        r = c.get("/")
        assert r.status_code == 200
        assert "explorer" in r.text
        # API still wins over the static mount
        assert c.get("/api/health").status_code == 200


def test_no_static_directory_means_404_root(tmp_path):
    app = create_app(static_dir=tmp_path / "nowhere")
    with TestClient(app) as c:
        assert c.get("/").status_code == 404
