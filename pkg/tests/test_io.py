import json
from pathlib import Path

import numpy as np
import pytest

from eulercalc import fixtures, io
from eulercalc.bundles import mapping_torus, torus_bundle_spec
from eulercalc.complex import SimplicialMap, build_complex
from eulercalc.constructible import ConstructibleFunction
from eulercalc.errors import EulerCalcError, FormatError
from eulercalc.raster import Raster, ShapeSpec

DATA = Path(__file__).resolve().parent.parent / "data"


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return path


def test_complex_round_trip():
    k = fixtures.torus()
    assert io.complex_from_json(json.loads(json.dumps(io.complex_to_json(k)))) == k


def test_complex_json_is_sorted():
    k = build_complex([[2, 3], [0, 1, 2]])
    assert io.complex_to_json(k) == {"maximal_simplices": [[0, 1, 2], [2, 3]]}


def test_complex_by_relative_path(tmp_path):
    _write(tmp_path, "k.json", {"maximal_simplices": [[0, 1]]})
    path = _write(tmp_path, "cells.json", {"complex": "k.json", "simplices": [[0, 1]]})
    cells = io.cellset_from_json(io.load_json(path), io._Ctx(path))
    assert cells.members == {(0, 1)}


def test_cellset_round_trip():
    cells = fixtures.octahedron().cells([[0], [0, 1], [0, 1, 2]])
    assert io.cellset_from_json(io.cellset_to_json(cells)) == cells


def test_cf_round_trip():
    k = fixtures.octahedron()
    h = ConstructibleFunction(k, {(0,): 3, (1, 2): -2})
    data = io.cf_to_json(h)
    assert data["coeffs"] == [{"simplex": [0], "c": 3}, {"simplex": [1, 2], "c": -2}]
    assert io.cf_from_json(data) == h


def test_cf_without_complex_needs_ambient():
    with pytest.raises(FormatError, match="complex"):
        io.cf_from_json({"coeffs": []})
    h = io.cf_from_json({"coeffs": [{"simplex": [0], "c": 1}]}, ambient=fixtures.point())
    assert h((0,)) == 1


def test_map_round_trip():
    square = build_complex([[0, 1, 3], [0, 2, 3]])
    p = SimplicialMap(square, fixtures.interval(), {0: 0, 1: 1, 2: 0, 3: 1})
    data = io.map_to_json(p)
    assert data["vertex_map"] == {"0": 0, "1": 1, "2": 0, "3": 1}
    q = io.map_from_json(data)
    assert (q.source, q.target, q.vertex_map) == (p.source, p.target, p.vertex_map)


def test_bundle_round_trip():
    spec = torus_bundle_spec(mapping_torus(fixtures.interval(), {0: 1, 1: 0}, 4))
    again = io.bundle_from_json(json.loads(json.dumps(io.bundle_to_json(spec))))
    assert again.total == spec.total
    assert again.cover == spec.cover
    assert again.fiber_chi == 1


def test_bundle_fiber_complex():
    spec = torus_bundle_spec(mapping_torus(fixtures.interval(), {0: 0, 1: 1}, 3))
    data = io.bundle_to_json(spec)
    del data["fiber_chi"]
    data["fiber"] = {"maximal_simplices": [[0, 1]]}
    assert io.bundle_from_json(data).fiber_chi == 1


def test_scene_round_trip():
    shapes = [ShapeSpec.disk(5, 6, 2), ShapeSpec.rectangle(1, 2, 3, 4), ShapeSpec.annulus(9, 9, 5, 2)]
    data = io.scene_to_json(20, 30, shapes)
    assert io.scene_from_json(data) == (20, 30, shapes)


@pytest.mark.parametrize(
    "obj, message",
    [
        ({"width": 5, "height": 5, "shapes": [{"kind": "blob"}]}, "unknown kind"),
        ({"width": 5, "height": 5, "shapes": [{"kind": "disk", "cx": 1, "cy": 1}]}, "'r'"),
        ({"width": 0, "height": 5, "shapes": []}, "positive"),
        ({"shapes": []}, "width"),
    ],
)
def test_scene_schema_errors(obj, message):
    with pytest.raises(FormatError, match=message):
        io.scene_from_json(obj)


def test_csv_round_trip(tmp_path):
    r = Raster(np.array([[0, 1, 2], [3, 0, 0]]))
    path = _write(tmp_path, "r.csv", io.raster_to_csv(r))
    assert io.read_raster(path) == r


def test_pgm_round_trip(tmp_path):
    r = Raster(np.array([[0, 1, 2], [3, 0, 0]]))
    path = _write(tmp_path, "r.pgm", io.raster_to_pgm(r))
    assert io.read_raster(path) == r


def test_pgm_with_comments(tmp_path):
    path = _write(tmp_path, "r.pgm", "P2\n# made by hand\n2 2\n5\n0 5\n1 # trailing\n2\n")
    assert io.read_raster(path).values.tolist() == [[0, 5], [1, 2]]


def test_csv_errors_carry_line(tmp_path):
    path = _write(tmp_path, "bad.csv", "0,1\n1,x\n")
    with pytest.raises(FormatError, match=r"bad.csv:2"):
        io.read_raster(path)
    path = _write(tmp_path, "ragged.csv", "0,1\n1\n")
    with pytest.raises(FormatError, match=r"ragged.csv:2: expected 2 columns"):
        io.read_raster(path)
    path = _write(tmp_path, "neg.csv", "0,-1\n")
    with pytest.raises(FormatError, match="nonnegative"):
        io.read_raster(path)


def test_pgm_errors(tmp_path):
    path = _write(tmp_path, "short.pgm", "P2\n2 2\n9\n0 1 2\n")
    with pytest.raises(FormatError, match="expected 4 gray values"):
        io.read_raster(path)
    path = _write(tmp_path, "big.pgm", "P2\n1 1\n3\n7\n")
    with pytest.raises(FormatError, match="outside"):
        io.read_raster(path)


def test_invalid_json_reports_line(tmp_path):
    path = _write(tmp_path, "bad.json", '{\n "maximal_simplices": [[0, 1]\n')
    with pytest.raises(FormatError, match=r"bad.json:\d+: invalid JSON"):
        io.read_complex(path)


def test_missing_file():
    with pytest.raises(FormatError, match="cannot read"):
        io.read_complex("/nonexistent/k.json")


def test_schema_violation():
    with pytest.raises(FormatError, match="maximal_simplices"):
        io.complex_from_json({"simplices": [[0]]})
    with pytest.raises(FormatError, match="list of integers"):
        io.complex_from_json({"maximal_simplices": [[0, "a"]]})


def test_domain_errors_pass_through():
    with pytest.raises(EulerCalcError, match="degenerate simplex"):
        io.complex_from_json({"maximal_simplices": [[1, 1]]})


@pytest.mark.parametrize("name", ["octahedron.json", "torus.json", "projective_plane.json"])
def test_shipped_complexes_parse(name):
    assert len(io.read_complex(DATA / name)) > 0
