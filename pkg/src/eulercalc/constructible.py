"""Integer-valued constructible functions and their Euler integrals.

A :class:`ConstructibleFunction` assigns an integer to each open simplex of an
ambient complex.  Three independent ways of integrating it against χ are
provided (cell by cell, through upper level sets, and by inclusion–exclusion
over a cover), together with pushforward along simplicial maps.
"""

from __future__ import annotations

from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .complex import CellSet, Simplex, SimplicialComplex, SimplicialMap, chi_cellset, make_simplex
from .errors import EulerCalcError

MAX_COVER = 20


class ConstructibleFunction:
    """Integer coefficients on the open simplices of ``ambient`` (absent means 0)."""

    __slots__ = ("ambient", "_coeffs")

    def __init__(self, ambient: SimplicialComplex, coeffs: Mapping[Simplex, int] | None = None):
        clean = {}
        for s, c in (coeffs or {}).items():
            if isinstance(c, bool) or not isinstance(c, int):
                raise EulerCalcError(f"coefficient on {list(s)} must be an integer, got {c!r}")
            if s not in ambient.simplices:
                raise EulerCalcError(f"simplex {list(s)} is not in the ambient complex")
            if c:
                clean[s] = c
        self.ambient = ambient
        self._coeffs = MappingProxyType(clean)

    @classmethod
    def from_items(cls, ambient: SimplicialComplex, items: Iterable[tuple[Sequence[int], int]]):
        coeffs: dict[Simplex, int] = {}
        for verts, c in items:
            s = make_simplex(verts)
            coeffs[s] = coeffs.get(s, 0) + c
        return cls(ambient, coeffs)

    @property
    def coeffs(self) -> Mapping[Simplex, int]:
        """Nonzero coefficients only."""
        return self._coeffs

    def __call__(self, simplex: Simplex) -> int:
        return self._coeffs.get(simplex, 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConstructibleFunction):
            return NotImplemented
        return self.ambient == other.ambient and dict(self._coeffs) == dict(other._coeffs)

    def __hash__(self):
        return hash((self.ambient, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"ConstructibleFunction({len(self._coeffs)} nonzero cells)"

    def __add__(self, other: "ConstructibleFunction") -> "ConstructibleFunction":
        return cf_add(self, other)

    def __neg__(self) -> "ConstructibleFunction":
        return self.scale(-1)

    def __sub__(self, other: "ConstructibleFunction") -> "ConstructibleFunction":
        return cf_add(self, -other)

    def scale(self, k: int) -> "ConstructibleFunction":
        return ConstructibleFunction(self.ambient, {s: k * c for s, c in self._coeffs.items()})

    def support(self) -> CellSet:
        return CellSet(self.ambient, self._coeffs.keys())

    def restrict(self, cells: CellSet) -> "ConstructibleFunction":
        """Multiply by the indicator of ``cells``."""
        keep = cells.members
        return ConstructibleFunction(
            self.ambient, {s: c for s, c in self._coeffs.items() if s in keep}
        )

    def level_set(self, value: int) -> CellSet:
        if value == 0:
            return CellSet(self.ambient, self.ambient.simplices - self._coeffs.keys())
        return CellSet(self.ambient, (s for s, c in self._coeffs.items() if c == value))

    def upper_set(self, threshold: int) -> CellSet:
        """``{h >= threshold}``; only meaningful as a finite set for threshold >= 1."""
        if threshold <= 0:
            return CellSet(
                self.ambient,
                (s for s in self.ambient.simplices if self(s) >= threshold),
            )
        return CellSet(self.ambient, (s for s, c in self._coeffs.items() if c >= threshold))

    def max(self) -> int:
        return max(self._coeffs.values(), default=0)

    def min(self) -> int:
        return min(self._coeffs.values(), default=0)


def cf_indicator(cells: CellSet) -> ConstructibleFunction:
    return ConstructibleFunction(cells.ambient, dict.fromkeys(cells.members, 1))


def cf_add(h1: ConstructibleFunction, h2: ConstructibleFunction) -> ConstructibleFunction:
    if h1.ambient is not h2.ambient and h1.ambient != h2.ambient:
        raise EulerCalcError("incompatible ambient complexes")
    out = dict(h1.coeffs)
    for s, c in h2.coeffs.items():
        out[s] = out.get(s, 0) + c
    return ConstructibleFunction(h1.ambient, out)


def euler_integral(h: ConstructibleFunction) -> int:
    """Cell-wise integral: ``sum c(σ) (-1)**dim σ``."""
    return sum(c if len(s) % 2 else -c for s, c in h.coeffs.items())


def euler_integral_levelsets(h: ConstructibleFunction) -> int:
    """Integral of a nonnegative function as ``sum_{s>=1} χ{h >= s}``."""
    if h.min() < 0:
        raise EulerCalcError("level-set algorithm requires nonnegative integrand")
    return sum(chi_cellset(h.upper_set(s)) for s in range(1, h.max() + 1))


def integrate_over_cover(h: ConstructibleFunction, cover: Sequence[CellSet]) -> int:
    """Integral of ``h`` by inclusion–exclusion over the pieces of ``cover``.

    Sums ``(-1)**(|J|+1) * ∫ h·1[∩_{j in J} cover_j] dχ`` over every nonempty
    index set ``J``.
    """
    cover = list(cover)
    if len(cover) > MAX_COVER:
        raise EulerCalcError("cover too large for exact inclusion–exclusion")
    union: set = set()
    for piece in cover:
        if piece.ambient is not h.ambient and piece.ambient != h.ambient:
            raise EulerCalcError("incompatible ambient complexes")
        union |= piece.members
    if not h.coeffs.keys() <= union:
        raise EulerCalcError("cover misses support")
    total = 0
    for k in range(1, len(cover) + 1):
        sign = 1 if k % 2 else -1
        for idx in combinations(range(len(cover)), k):
            cells = cover[idx[0]].members
            for j in idx[1:]:
                cells = cells & cover[j].members
            if cells:
                total += sign * euler_integral(h.restrict(CellSet(h.ambient, cells)))
    return total


def pushforward(p: SimplicialMap, h: ConstructibleFunction) -> ConstructibleFunction:
    """Fibrewise Euler integral of ``h`` along ``p``.

    Over an interior point of an open target simplex τ, each source simplex σ
    with image τ contributes an open cell of dimension ``dim σ - dim τ``, so
    ``(p_* h)(τ) = sum h(σ) (-1)**(dim σ - dim τ)``.
    """
    if h.ambient is not p.source and h.ambient != p.source:
        raise EulerCalcError("integrand is not defined on the source of the map")
    out: dict[Simplex, int] = {}
    for s, c in h.coeffs.items():
        t = p.image(s)
        out[t] = out.get(t, 0) + (c if (len(s) - len(t)) % 2 == 0 else -c)
    return ConstructibleFunction(p.target, out)

