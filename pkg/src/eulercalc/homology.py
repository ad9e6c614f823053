"""Rational simplicial homology: boundary ranks, Betti numbers, Euler-Poincaré χ."""

from __future__ import annotations

from fractions import Fraction

from .complex import CellSet, SimplicialComplex
from .errors import EulerCalcError


def _closed(complex_) -> SimplicialComplex:
    if isinstance(complex_, CellSet):
        return complex_.as_complex()
    if not isinstance(complex_, SimplicialComplex):
        raise EulerCalcError("homology requires a closed complex")
    return complex_


def boundary_columns(complex_: SimplicialComplex, d: int) -> list[dict[int, int]]:
    """Columns of the boundary map from d-chains to (d-1)-chains.

    Column ``j`` is the boundary of the j-th d-simplex (sorted order) as a
    sparse map from (d-1)-simplex index to coefficient ±1.
    """
    if d <= 0:
        return []
    rows = {s: i for i, s in enumerate(complex_.simplices_of_dim(d - 1))}
    cols = []
    for s in complex_.simplices_of_dim(d):
        col = {}
        for i in range(len(s)):
            col[rows[s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
        cols.append(col)
    return cols


def rank_over_q(columns: list[dict[int, int]]) -> int:
    """Exact rank over the rationals of a sparse matrix given by columns."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for col in columns:
        v = {r: Fraction(c) for r, c in col.items() if c}
        while v:
            low = max(v)
            p = pivots.get(low)
            if p is None:
                pivots[low] = v
                break
            factor = v[low] / p[low]
            for r, c in p.items():
                x = v.get(r, 0) - factor * c
                if x:
                    v[r] = x
                else:
                    v.pop(r, None)
    return len(pivots)


def betti_numbers(complex_) -> list[int]:
    """Rational Betti numbers ``[b_0, ..., b_dim]`` of a closed complex."""
    k = _closed(complex_)
    top = k.dim
    if top < 0:
        return []
    counts = k.counts_by_dim()
    ranks = [0] + [rank_over_q(boundary_columns(k, d)) for d in range(1, top + 1)] + [0]
    return [counts[d] - ranks[d] - ranks[d + 1] for d in range(top + 1)]


def chi_homology(complex_) -> int:
    """χ as the alternating sum of rational Betti numbers."""
    return sum(b if d % 2 == 0 else -b for d, b in enumerate(betti_numbers(complex_)))
