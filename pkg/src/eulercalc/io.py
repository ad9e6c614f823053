"""Reading and writing the JSON, CSV and PGM file formats.

Schema problems raise :class:`FormatError` (with file and line where known);
mathematically invalid content, such as a degenerate simplex, raises the
domain error of the module that rejects it.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path
from typing import Any

import numpy as np

from .bundles import BundleSpec
from .complex import CellSet, SimplicialComplex, SimplicialMap, build_complex, chi_cellset, make_simplex
from .constructible import ConstructibleFunction
from .errors import FormatError
from .raster import Raster, ShapeSpec


def load_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror}", path) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", path, exc.lineno) from exc


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


class _Ctx:
    """Where a JSON value came from, for error messages and relative paths."""

    def __init__(self, path=None):
        self.path = Path(path) if path is not None else None
        self.base_dir = self.path.parent if self.path is not None else Path(".")

    def fail(self, message):
        raise FormatError(message, self.path)


def _int_list(value, ctx: _Ctx, what: str) -> list[int]:
    if not isinstance(value, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in value
    ):
        ctx.fail(f"{what} must be a list of integers, got {value!r}")
    return value


def _simplex_list(value, ctx: _Ctx, what: str) -> list[list[int]]:
    if not isinstance(value, list):
        ctx.fail(f"{what} must be a list of vertex lists")
    return [_int_list(s, ctx, f"{what} entry") for s in value]


# complexes ------------------------------------------------------------------

def complex_from_json(obj, ctx: _Ctx | None = None) -> SimplicialComplex:
    """Accepts ``{"maximal_simplices": [...]}``, a bare list of simplices, or a
    string naming another JSON file (relative to the current file)."""
    ctx = ctx or _Ctx()
    if isinstance(obj, str):
        path = ctx.base_dir / obj
        return complex_from_json(load_json(path), _Ctx(path))
    if isinstance(obj, dict):
        if "maximal_simplices" not in obj:
            ctx.fail('complex object needs a "maximal_simplices" key')
        obj = obj["maximal_simplices"]
    return build_complex(_simplex_list(obj, ctx, "maximal_simplices"))


def complex_to_json(complex_: SimplicialComplex) -> dict:
    return {"maximal_simplices": [list(s) for s in sorted(complex_.maximal_simplices())]}


def read_complex(path) -> SimplicialComplex:
    return complex_from_json(load_json(path), _Ctx(path))


def cellset_from_json(obj, ctx: _Ctx | None = None, ambient: SimplicialComplex | None = None) -> CellSet:
    """``{"complex": ..., "simplices": [...]}``; a bare simplex list needs ``ambient``."""
    ctx = ctx or _Ctx()
    if isinstance(obj, list):
        members = obj
    elif isinstance(obj, dict):
        if "simplices" not in obj:
            ctx.fail('cell set object needs a "simplices" key')
        members = obj["simplices"]
        if "complex" in obj:
            ambient = complex_from_json(obj["complex"], ctx)
    else:
        ctx.fail("cell set must be an object or a list of simplices")
    if ambient is None:
        ctx.fail('cell set needs a "complex"')
    return CellSet(ambient, (make_simplex(s) for s in _simplex_list(members, ctx, "simplices")))


def cellset_to_json(cells: CellSet) -> dict:
    return {
        "complex": complex_to_json(cells.ambient),
        "simplices": [list(s) for s in sorted(cells.members)],
    }


def cells_from_json(obj, ctx: _Ctx | None = None):
    """A complex or a cell set, whichever the object describes."""
    if isinstance(obj, dict) and "simplices" in obj:
        return cellset_from_json(obj, ctx)
    return complex_from_json(obj, ctx)


def map_from_json(obj, ctx: _Ctx | None = None) -> SimplicialMap:
    ctx = ctx or _Ctx()
    if not isinstance(obj, dict) or not {"source", "target", "vertex_map"} <= obj.keys():
        ctx.fail('map needs "source", "target" and "vertex_map"')
    return SimplicialMap(
        complex_from_json(obj["source"], ctx),
        complex_from_json(obj["target"], ctx),
        _vertex_map(obj["vertex_map"], ctx),
    )


def _vertex_map(obj, ctx: _Ctx) -> dict[int, int]:
    if not isinstance(obj, dict):
        ctx.fail("vertex_map must be an object")
    out = {}
    for k, v in obj.items():
        try:
            key = int(k)
        except ValueError:
            ctx.fail(f"vertex_map key {k!r} is not an integer")
        if not isinstance(v, int) or isinstance(v, bool):
            ctx.fail(f"vertex_map value for {k!r} must be an integer")
        out[key] = v
    return out


def map_to_json(p: SimplicialMap) -> dict:
    return {
        "source": complex_to_json(p.source),
        "target": complex_to_json(p.target),
        "vertex_map": {str(k): v for k, v in sorted(p.vertex_map.items())},
    }


# constructible functions ------------------------------------------------------

def cf_from_json(obj, ctx: _Ctx | None = None, ambient: SimplicialComplex | None = None) -> ConstructibleFunction:
    ctx = ctx or _Ctx()
    if not isinstance(obj, dict) or "coeffs" not in obj:
        ctx.fail('constructible function needs a "coeffs" list')
    if "complex" in obj:
        ambient = complex_from_json(obj["complex"], ctx)
    if ambient is None:
        ctx.fail('constructible function needs a "complex"')
    items = []
    for entry in obj["coeffs"]:
        if not isinstance(entry, dict) or "simplex" not in entry or "c" not in entry:
            ctx.fail('each coefficient needs "simplex" and "c"')
        c = entry["c"]
        if not isinstance(c, int) or isinstance(c, bool):
            ctx.fail(f"coefficient must be an integer, got {c!r}")
        items.append((_int_list(entry["simplex"], ctx, "simplex"), c))
    return ConstructibleFunction.from_items(ambient, items)


def cf_to_json(h: ConstructibleFunction) -> dict:
    return {
        "complex": complex_to_json(h.ambient),
        "coeffs": [{"simplex": list(s), "c": c} for s, c in sorted(h.coeffs.items())],
    }


def cover_from_json(obj, ctx: _Ctx | None = None, ambient: SimplicialComplex | None = None) -> list[CellSet]:
    ctx = ctx or _Ctx()
    if isinstance(obj, dict):
        if "pieces" not in obj:
            ctx.fail('cover needs a "pieces" list')
        obj = obj["pieces"]
    if not isinstance(obj, list):
        ctx.fail("cover pieces must be a list")
    return [cellset_from_json(piece, ctx, ambient) for piece in obj]


def cover_to_json(cover) -> dict:
    return {"pieces": [{"simplices": [list(s) for s in sorted(p.members)]} for p in cover]}


# bundles ------------------------------------------------------------------------

def bundle_from_json(obj, ctx: _Ctx | None = None) -> BundleSpec:
    """``{"total", "base", "vertex_map", "cover", "fiber_chi"}``.

    ``fiber_chi`` may be replaced by ``"fiber": <complex>``, whose χ is used.
    """
    ctx = ctx or _Ctx()
    if not isinstance(obj, dict) or not {"total", "base", "vertex_map", "cover"} <= obj.keys():
        ctx.fail('bundle needs "total", "base", "vertex_map" and "cover"')
    total = complex_from_json(obj["total"], ctx)
    base = complex_from_json(obj["base"], ctx)
    if "fiber_chi" in obj:
        fiber_chi = obj["fiber_chi"]
        if not isinstance(fiber_chi, int) or isinstance(fiber_chi, bool):
            ctx.fail("fiber_chi must be an integer")
    elif "fiber" in obj:
        fiber_chi = chi_cellset(complex_from_json(obj["fiber"], ctx))
    else:
        ctx.fail('bundle needs "fiber_chi" or "fiber"')
    projection = SimplicialMap(total, base, _vertex_map(obj["vertex_map"], ctx))
    return BundleSpec(total, base, projection, cover_from_json(obj["cover"], ctx, base), fiber_chi)


def bundle_to_json(spec: BundleSpec) -> dict:
    return {
        "total": complex_to_json(spec.total),
        "base": complex_to_json(spec.base),
        "vertex_map": {str(k): v for k, v in sorted(spec.projection.vertex_map.items())},
        "cover": [[list(s) for s in sorted(p.members)] for p in spec.cover],
        "fiber_chi": spec.fiber_chi,
    }


# scenes and rasters ---------------------------------------------------------------

_SHAPE_FIELDS = {
    "disk": ("cx", "cy", "r"),
    "annulus": ("cx", "cy", "r", "r_inner"),
    "rectangle": ("x", "y", "w", "h"),
}


def scene_from_json(obj, ctx: _Ctx | None = None) -> tuple[int, int, list[ShapeSpec]]:
    ctx = ctx or _Ctx()
    if not isinstance(obj, dict) or not {"width", "height", "shapes"} <= obj.keys():
        ctx.fail('scene needs "width", "height" and "shapes"')
    shapes = []
    for k, entry in enumerate(obj["shapes"]):
        kind = entry.get("kind") if isinstance(entry, dict) else None
        if kind not in _SHAPE_FIELDS:
            ctx.fail(f"shape {k}: unknown kind {kind!r}")
        params = {}
        for name in _SHAPE_FIELDS[kind]:
            value = entry.get(name)
            if not isinstance(value, int) or isinstance(value, bool):
                ctx.fail(f"shape {k}: {name!r} must be an integer")
            params[name] = value
        shapes.append(ShapeSpec(kind, **params))
    width, height = obj["width"], obj["height"]
    if not all(isinstance(v, int) and not isinstance(v, bool) and v > 0 for v in (width, height)):
        ctx.fail("width and height must be positive integers")
    return width, height, shapes


def scene_to_json(width: int, height: int, shapes) -> dict:
    return {"width": width, "height": height, "shapes": [s.as_dict() for s in shapes]}


def read_raster(path) -> Raster:
    """CSV of integers (one row per raster row) or plain PGM (``P2``)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror}", path) from exc
    if path.suffix.lower() == ".pgm" or text.lstrip().startswith("P2"):
        return _parse_pgm(text, path)
    return _parse_csv(text, path)


def _parse_csv(text: str, path) -> Raster:
    rows = []
    for lineno, row in enumerate(csv.reader(_io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            values = [int(cell) for cell in row]
        except ValueError:
            raise FormatError("non-integer value", path, lineno) from None
        if rows and len(values) != len(rows[0]):
            raise FormatError(f"expected {len(rows[0])} columns, got {len(values)}", path, lineno)
        if any(v < 0 for v in values):
            raise FormatError("sensor counts must be nonnegative", path, lineno)
        rows.append(values)
    if not rows:
        raise FormatError("empty raster", path)
    return Raster(np.array(rows, dtype=np.int64))


def _parse_pgm(text: str, path) -> Raster:
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for tok in line.split("#", 1)[0].split():
            tokens.append((tok, lineno))
    if not tokens or tokens[0][0] != "P2":
        raise FormatError("only plain PGM (P2) is supported", path, 1)
    try:
        width, height, maxval = (int(t) for t, _ in tokens[1:4])
    except ValueError:
        raise FormatError("bad PGM header", path, tokens[0][1]) from None
    body = tokens[4:]
    if len(body) != width * height:
        line = body[-1][1] if body else tokens[-1][1]
        raise FormatError(f"expected {width * height} gray values, got {len(body)}", path, line)
    values = []
    for tok, lineno in body:
        try:
            v = int(tok)
        except ValueError:
            raise FormatError(f"non-integer gray value {tok!r}", path, lineno) from None
        if not 0 <= v <= maxval:
            raise FormatError(f"gray value {v} outside 0..{maxval}", path, lineno)
        values.append(v)
    return Raster(np.array(values, dtype=np.int64).reshape(height, width))


def raster_to_csv(raster: Raster) -> str:
    return "".join(",".join(str(int(v)) for v in row) + "\n" for row in raster.values)


def raster_to_pgm(raster: Raster) -> str:
    lines = ["P2", f"{raster.width} {raster.height}", str(max(int(raster.values.max()), 1))]
    lines += [" ".join(str(int(v)) for v in row) for row in raster.values]
    return "\n".join(lines) + "\n"
