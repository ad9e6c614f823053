"""Sensor-count rasters, their Euler integrals, and target enumeration.

A raster value ``h[y, x]`` counts the targets whose support meets the closed
unit square ``[x, x+1] × [y, y+1]``.  Values extend to the edges and vertices
of the pixel grid by the maximum over incident pixels, so every upper level
set ``{h >= s}`` is a closed union of pixel squares.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import EulerCalcError, HypothesisError

SHAPE_KINDS = ("disk", "rectangle", "annulus")


@dataclass(frozen=True, eq=False)
class Raster:
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.int64)
        if arr.ndim != 2 or arr.size == 0:
            raise EulerCalcError("raster must be a nonempty 2-D array")
        if (arr < 0).any():
            raise EulerCalcError("sensor counts must be nonnegative")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Raster):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __add__(self, other: "Raster") -> "Raster":
        if self.values.shape != other.values.shape:
            raise EulerCalcError("raster sizes differ")
        return Raster(self.values + other.values)

    @classmethod
    def zeros(cls, width: int, height: int) -> "Raster":
        return cls(np.zeros((height, width), dtype=np.int64))


@dataclass(frozen=True)
class ShapeSpec:
    """A target support in pixel units.

    ``disk``: centre ``(cx, cy)``, radius ``r``.  ``annulus``: as disk, with
    inner radius ``r_inner``.  ``rectangle``: the pixel-aligned block of
    ``w × h`` pixels whose lower-left pixel is ``(x, y)``.
    """

    kind: str
    cx: int = 0
    cy: int = 0
    r: int = 0
    r_inner: int = 0
    x: int = 0
    y: int = 0
    w: int = 0
    h: int = 0

    def __post_init__(self):
        if self.kind not in SHAPE_KINDS:
            raise EulerCalcError(f"unknown shape kind {self.kind!r}")
        if self.kind in ("disk", "annulus") and self.r < 1:
            raise EulerCalcError(f"radius must be at least 1: {self}")
        if self.kind == "annulus" and not 1 <= self.r_inner < self.r:
            raise EulerCalcError(f"annulus needs outer > inner >= 1: {self}")
        if self.kind == "rectangle" and (self.w < 1 or self.h < 1):
            raise EulerCalcError(f"rectangle must be nonempty: {self}")

    @classmethod
    def disk(cls, cx: int, cy: int, r: int) -> "ShapeSpec":
        return cls("disk", cx=cx, cy=cy, r=r)

    @classmethod
    def annulus(cls, cx: int, cy: int, r: int, r_inner: int) -> "ShapeSpec":
        return cls("annulus", cx=cx, cy=cy, r=r, r_inner=r_inner)

    @classmethod
    def rectangle(cls, x: int, y: int, w: int, h: int) -> "ShapeSpec":
        return cls("rectangle", x=x, y=y, w=w, h=h)

    @property
    def expected_chi(self) -> int:
        return 0 if self.kind == "annulus" else 1

    def pixel_bounds(self) -> tuple[int, int, int, int]:
        """Inclusive pixel range ``(x_min, x_max, y_min, y_max)`` the shape can touch."""
        if self.kind == "rectangle":
            return self.x, self.x + self.w - 1, self.y, self.y + self.h - 1
        # closed square [x, x+1] reaches the disk iff x + 1 >= cx - r and x <= cx + r
        return self.cx - self.r - 1, self.cx + self.r, self.cy - self.r - 1, self.cy + self.r

    def in_bounds(self, width: int, height: int) -> bool:
        x0, x1, y0, y1 = self.pixel_bounds()
        return x0 >= 0 and y0 >= 0 and x1 < width and y1 < height

    def translated(self, dx: int, dy: int) -> "ShapeSpec":
        if self.kind == "rectangle":
            return ShapeSpec.rectangle(self.x + dx, self.y + dy, self.w, self.h)
        return ShapeSpec(self.kind, cx=self.cx + dx, cy=self.cy + dy, r=self.r, r_inner=self.r_inner)

    def as_dict(self) -> dict:
        if self.kind == "rectangle":
            return {"kind": "rectangle", "x": self.x, "y": self.y, "w": self.w, "h": self.h}
        out = {"kind": self.kind, "cx": self.cx, "cy": self.cy, "r": self.r}
        if self.kind == "annulus":
            out["r_inner"] = self.r_inner
        return out


def shape_mask(shape: ShapeSpec, width: int, height: int, x_off: int = 0, y_off: int = 0) -> np.ndarray:
    """Pixels whose closed square meets the closed shape (integer arithmetic only).

    The result covers pixels ``x_off .. x_off+width-1`` by ``y_off .. y_off+height-1``.
    """
    xs = np.arange(x_off, x_off + width, dtype=np.int64)
    ys = np.arange(y_off, y_off + height, dtype=np.int64)
    if shape.kind == "rectangle":
        in_x = (xs >= shape.x) & (xs < shape.x + shape.w)
        in_y = (ys >= shape.y) & (ys < shape.y + shape.h)
        return in_y[:, None] & in_x[None, :]
    # distance from the centre to the nearest / farthest point of [x, x+1]
    near_x = np.maximum(np.maximum(xs - shape.cx, shape.cx - xs - 1), 0)
    near_y = np.maximum(np.maximum(ys - shape.cy, shape.cy - ys - 1), 0)
    near = near_y[:, None] ** 2 + near_x[None, :] ** 2
    mask = near <= shape.r**2
    if shape.kind == "annulus":
        far_x = np.maximum(np.abs(xs - shape.cx), np.abs(xs + 1 - shape.cx))
        far_y = np.maximum(np.abs(ys - shape.cy), np.abs(ys + 1 - shape.cy))
        far = far_y[:, None] ** 2 + far_x[None, :] ** 2
        mask &= far >= shape.r_inner**2
    return mask


def rasterize_shapes(shapes: Iterable[ShapeSpec], width: int, height: int) -> Raster:
    if width < 1 or height < 1:
        raise EulerCalcError("raster dimensions must be positive")
    shapes = list(shapes)
    for k, shape in enumerate(shapes):
        if not shape.in_bounds(width, height):
            raise EulerCalcError(f"shape {k} is out of bounds for a {width}x{height} raster: {shape.as_dict()}")
    values = np.zeros((height, width), dtype=np.int64)
    for shape in shapes:
        values += shape_mask(shape, width, height)
    return Raster(values)


def _cell_occupancy(mask: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vertices, horizontal edges and vertical edges of the closed pixel union."""
    p = np.pad(mask, 1)
    verts = p[:-1, :-1] | p[1:, :-1] | p[:-1, 1:] | p[1:, 1:]
    h_edges = p[:-1, 1:-1] | p[1:, 1:-1]
    v_edges = p[1:-1, :-1] | p[1:-1, 1:]
    return verts, h_edges, v_edges


def chi_of_mask(mask: np.ndarray) -> int:
    """V - E + F of the union of the closed pixel squares in ``mask``."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        return 0
    verts, h_edges, v_edges = _cell_occupancy(mask)
    return int(verts.sum()) - int(h_edges.sum()) - int(v_edges.sum()) + int(mask.sum())


def chi_upper_set(raster: Raster, threshold: int) -> int:
    """χ of the closed region ``{h >= threshold}``."""
    if threshold < 1:
        raise EulerCalcError("threshold must be a positive integer")
    return chi_of_mask(raster.values >= threshold)


def euler_integral_raster(raster: Raster) -> int:
    """``∫ h dχ = Σ_{s=1}^{max h} χ{h >= s}``."""
    top = int(raster.values.max())
    return sum(chi_upper_set(raster, s) for s in range(1, top + 1))


def upper_extension(raster: Raster) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Values on vertices, horizontal and vertical edges: max over incident pixels."""
    p = np.pad(raster.values, 1)
    verts = np.maximum.reduce([p[:-1, :-1], p[1:, :-1], p[:-1, 1:], p[1:, 1:]])
    h_edges = np.maximum(p[:-1, 1:-1], p[1:, 1:-1])
    v_edges = np.maximum(p[1:-1, :-1], p[1:-1, 1:])
    return verts, h_edges, v_edges


def euler_integral_cellwise(raster: Raster) -> int:
    """Cell-by-cell integral of the upper-extended cubical function."""
    verts, h_edges, v_edges = upper_extension(raster)
    return int(verts.sum()) - int(h_edges.sum()) - int(v_edges.sum()) + int(raster.values.sum())


@dataclass(frozen=True)
class Enumeration:
    integral: int
    support_chi: int
    value: Fraction
    count: int | None

    @property
    def consistent(self) -> bool:
        return self.count is not None

    def as_dict(self) -> dict:
        return {
            "integral": self.integral,
            "N": self.support_chi,
            "count": self.count,
            "consistent": self.consistent,
        }


def enumerate_targets(raster: Raster, support_chi: int) -> Enumeration:
    """Number of targets ``(1/N) ∫ h dχ`` when every support has χ = N.

    A value that is not a nonnegative integer is reported with
    ``count=None`` rather than rounded.
    """
    if support_chi == 0:
        raise HypothesisError("support Euler characteristic must be nonzero")
    integral = euler_integral_raster(raster)
    value = Fraction(integral, support_chi)
    count = value.numerator if value.denominator == 1 and value >= 0 else None
    return Enumeration(integral, support_chi, value, count)


class _Coverage:
    """Exact per-cell support counts of a scene, kept alongside its raster.

    Only the cells around each new shape are touched, so adding a shape
    costs time proportional to its bounding box.
    """

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.padded = np.zeros((height + 2, width + 2), dtype=np.int64)
        self.verts = np.zeros((height + 1, width + 1), dtype=np.int64)
        self.h_edges = np.zeros((height + 1, width), dtype=np.int64)
        self.v_edges = np.zeros((height, width + 1), dtype=np.int64)

    def try_add(self, shape: ShapeSpec) -> bool:
        """Add ``shape`` unless some cell's count would differ from the max over its pixels."""
        if not shape.in_bounds(self.width, self.height):
            raise EulerCalcError(f"shape is out of bounds: {shape.as_dict()}")
        x0, x1, y0, y1 = shape.pixel_bounds()
        mask = shape_mask(shape, x1 - x0 + 1, y1 - y0 + 1, x0, y0)
        occ_v, occ_h, occ_e = _cell_occupancy(mask)
        p = self.padded[y0:y1 + 3, x0:x1 + 3].copy()
        p[1:-1, 1:-1] += mask
        ext_v = np.maximum.reduce([p[:-1, :-1], p[:-1, 1:], p[1:, :-1], p[1:, 1:]])
        ext_h = np.maximum(p[:-1, 1:-1], p[1:, 1:-1])
        ext_e = np.maximum(p[1:-1, :-1], p[1:-1, 1:])
        new_v = self.verts[y0:y1 + 2, x0:x1 + 2] + occ_v
        new_h = self.h_edges[y0:y1 + 2, x0:x1 + 1] + occ_h
        new_e = self.v_edges[y0:y1 + 1, x0:x1 + 2] + occ_e
        if not (
            np.array_equal(new_v, ext_v)
            and np.array_equal(new_h, ext_h)
            and np.array_equal(new_e, ext_e)
        ):
            return False
        self.padded[y0:y1 + 3, x0:x1 + 3] = p
        self.verts[y0:y1 + 2, x0:x1 + 2] = new_v
        self.h_edges[y0:y1 + 2, x0:x1 + 1] = new_h
        self.v_edges[y0:y1 + 1, x0:x1 + 2] = new_e
        return True


def in_general_position(shapes: Sequence[ShapeSpec], width: int, height: int) -> bool:
    """True when every grid cell's max-over-incident-pixels value equals the
    number of closed supports containing that cell.

    This is exactly what makes the raster integral equal ``Σ χ(support)``;
    it fails when two supports touch along an edge or at a corner without
    sharing a pixel there.
    """
    cov = _Coverage(width, height)
    return all(cov.try_add(s) for s in shapes)


def random_scene(
    rng: np.random.Generator,
    count: int,
    width: int = 256,
    height: int = 256,
    kinds: Sequence[str] = ("disk", "rectangle"),
    max_radius: int = 20,
    max_side: int = 40,
    max_tries: int = 10_000,
) -> list[ShapeSpec]:
    """``count`` random in-bounds shapes whose raster integral is exactly ``Σ χ``.

    Candidates that would break general position (see
    :func:`in_general_position`) are redrawn.
    """
    cov = _Coverage(width, height)
    shapes: list[ShapeSpec] = []
    tries = 0
    while len(shapes) < count:
        tries += 1
        if tries > max_tries:
            raise EulerCalcError(f"could not place {count} shapes in general position")
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind == "rectangle":
            w = int(rng.integers(1, min(max_side, width) + 1))
            h = int(rng.integers(1, min(max_side, height) + 1))
            shape = ShapeSpec.rectangle(
                int(rng.integers(0, width - w + 1)), int(rng.integers(0, height - h + 1)), w, h
            )
        else:
            r = int(rng.integers(1, max(1, min(max_radius, (min(width, height) - 2) // 2)) + 1))
            cx = int(rng.integers(r + 1, width - r))
            cy = int(rng.integers(r + 1, height - r))
            if kind == "annulus":
                if r < 2:
                    continue
                shape = ShapeSpec.annulus(cx, cy, r, int(rng.integers(1, r)))
            else:
                shape = ShapeSpec.disk(cx, cy, r)
        if cov.try_add(shape):
            shapes.append(shape)
    return shapes
