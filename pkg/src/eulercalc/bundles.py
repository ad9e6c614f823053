"""Fibre bundles over finite complexes and the multiplicativity of χ.

:func:`bundle_chi_via_inclusion_exclusion` computes χ(E) the long way: it
covers the base by pieces ``B_1..B_m``, applies inclusion–exclusion to the
preimages ``p^{-1}(B_J)`` and uses local triviality, χ(p^{-1}(A)) = χ(A)·χ(F),
on every intersection.  Each step of that chain is recorded so it can be
audited line by line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .complex import CellSet, SimplicialComplex, SimplicialMap, build_complex, chi_cellset, preimage_cellset
from .constructible import MAX_COVER
from .errors import EulerCalcError, LocalTrivialityError


@dataclass(frozen=True)
class BundleSpec:
    total: SimplicialComplex
    base: SimplicialComplex
    projection: SimplicialMap
    cover: tuple
    fiber_chi: int

    def __post_init__(self):
        object.__setattr__(self, "cover", tuple(self.cover))
        if self.projection.source != self.total or self.projection.target != self.base:
            raise EulerCalcError("projection must map the total complex onto the base")
        m = len(self.cover)
        if not 1 <= m <= MAX_COVER:
            raise EulerCalcError(f"cover must have between 1 and {MAX_COVER} pieces, got {m}")
        covered = set()
        for piece in self.cover:
            if piece.ambient != self.base:
                raise EulerCalcError("cover pieces must be cell sets over the base")
            covered |= piece.members
        if covered != self.base.simplices:
            raise EulerCalcError("cover pieces do not cover the base")

    def with_cover(self, cover: Sequence[CellSet]) -> "BundleSpec":
        return BundleSpec(self.total, self.base, self.projection, tuple(cover), self.fiber_chi)


@dataclass(frozen=True)
class TraceRow:
    """One index set ``J`` of the inclusion–exclusion sum."""

    subset: tuple[int, ...]
    chi_base_piece: int
    chi_preimage: int
    sign: int

    def as_dict(self) -> dict:
        return {
            "subset": list(self.subset),
            "chi_base_piece": self.chi_base_piece,
            "chi_preimage": self.chi_preimage,
            "sign": self.sign,
        }


@dataclass(frozen=True)
class LocalTrivialityRow:
    subset: tuple[int, ...]
    chi_base_piece: int
    chi_preimage: int
    expected: int

    @property
    def passed(self) -> bool:
        return self.chi_preimage == self.expected


@dataclass(frozen=True)
class LocalTrivialityReport:
    fiber_chi: int
    rows: tuple[LocalTrivialityRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def failures(self) -> list[LocalTrivialityRow]:
        return [r for r in self.rows if not r.passed]


@dataclass(frozen=True)
class BundleResult:
    chi: int
    chi_total: int
    chi_base: int
    fiber_chi: int
    trace: tuple[TraceRow, ...] = field(repr=False)

    def recomputed_sum(self) -> int:
        return sum(r.sign * r.chi_preimage for r in self.trace)

    def equation_lines(self) -> list[str]:
        """The chain χ(E) = Σ± χ(p⁻¹(B_J)) = Σ± χ(B_J)·χ(F) = χ(F)·χ(B) with numbers."""
        f = self.fiber_chi

        def signed(values):
            out = []
            for k, (sign, v) in enumerate(values):
                term = f"({v})" if v < 0 else str(v)
                if k == 0:
                    out.append(term if sign > 0 else f"-{term}")
                else:
                    out.append(f"{'+' if sign > 0 else '-'} {term}")
            return " ".join(out) if out else "0"

        rows = self.trace
        pre = signed([(r.sign, r.chi_preimage) for r in rows])
        prod = signed([(r.sign, r.chi_base_piece * f) for r in rows])
        base = signed([(r.sign, r.chi_base_piece) for r in rows])
        lines = [
            f"chi(E) = {self.chi_total}",
            f"  = sum_J (-1)^(|J|+1) chi(p^-1(B_J)) = {pre} = {self.chi}",
            f"  = sum_J (-1)^(|J|+1) chi(B_J x F) = {prod} = {self.chi}",
            f"  = chi(F) * ({base}) = {f} * {self.chi_base}",
            f"  = chi(F) * chi(B) = {f * self.chi_base}",
        ]
        for r in rows:
            idx = ",".join(str(i + 1) for i in r.subset)
            lines.append(
                f"    J={{{idx}}} sign={'+' if r.sign > 0 else '-'} "
                f"chi(B_J)={r.chi_base_piece} chi(p^-1(B_J))={r.chi_preimage}"
            )
        return lines


def _intersections(cover: Sequence[CellSet]):
    """Yield ``(J, ∩_{j in J} cover_j)`` for every nonempty J with nonempty intersection."""
    m = len(cover)
    for k in range(1, m + 1):
        for idx in combinations(range(m), k):
            cells = cover[idx[0]].members
            for j in idx[1:]:
                cells = cells & cover[j].members
                if not cells:
                    break
            if cells:
                yield idx, CellSet(cover[0].ambient, cells)


def check_local_triviality_chi(spec: BundleSpec) -> LocalTrivialityReport:
    """Compare χ(p⁻¹(B_J)) with χ(B_J)·χ(F) on every nonempty intersection B_J."""
    rows = []
    for idx, piece in _intersections(spec.cover):
        base_chi = chi_cellset(piece)
        rows.append(
            LocalTrivialityRow(
                subset=idx,
                chi_base_piece=base_chi,
                chi_preimage=chi_cellset(preimage_cellset(spec.projection, piece)),
                expected=base_chi * spec.fiber_chi,
            )
        )
    return LocalTrivialityReport(spec.fiber_chi, tuple(rows))


def bundle_chi_via_inclusion_exclusion(spec: BundleSpec) -> BundleResult:
    """χ(E) through inclusion–exclusion over the cover of the base.

    Raises ``LocalTrivialityError`` if some intersection fails the χ-level
    local triviality check, and ``EulerCalcError`` if the alternating sum does
    not reproduce both χ(E) and χ(B)·χ(F).
    """
    report = check_local_triviality_chi(spec)
    if not report.passed:
        bad = report.failures[0]
        raise LocalTrivialityError(
            f"local triviality fails on J={[i + 1 for i in bad.subset]}: "
            f"chi(p^-1(B_J))={bad.chi_preimage}, chi(B_J)*chi(F)={bad.expected}",
            report,
        )
    trace = tuple(
        TraceRow(
            subset=r.subset,
            chi_base_piece=r.chi_base_piece,
            chi_preimage=r.chi_preimage,
            sign=1 if len(r.subset) % 2 else -1,
        )
        for r in report.rows
    )
    value = sum(r.sign * r.chi_preimage for r in trace)
    chi_total = chi_cellset(spec.total)
    chi_base = chi_cellset(spec.base)
    if value != chi_total or value != chi_base * spec.fiber_chi:
        raise EulerCalcError(
            f"inclusion–exclusion disagrees with direct χ: sum={value}, "
            f"chi(E)={chi_total}, chi(B)*chi(F)={chi_base * spec.fiber_chi}"
        )
    return BundleResult(value, chi_total, chi_base, spec.fiber_chi, trace)


@dataclass(frozen=True)
class MappingTorus:
    """Total space, base circle and projection of a mapping torus."""

    total: SimplicialComplex
    base: SimplicialComplex
    projection: SimplicialMap
    fiber: SimplicialComplex


def mapping_torus(
    fiber: SimplicialComplex, monodromy: Mapping[int, int], n: int = 3
) -> MappingTorus:
    """Triangulate ``F × [0, n] / (x, n) ~ (φ(x), 0)`` as a bundle over an n-gon.

    Each slab ``F × [i, i+1]`` is triangulated by the staircase rule in the
    vertex order of ``F``.  ``monodromy`` must be a simplicial automorphism of
    ``F``; ``n >= 3`` keeps the result a simplicial complex.
    """
    if n < 3:
        raise EulerCalcError("mapping torus needs at least 3 slabs")
    verts = fiber.vertices
    if sorted(monodromy.get(v, -1) for v in verts) != verts:
        raise EulerCalcError("monodromy must permute the fiber's vertices")
    if {tuple(sorted(monodromy[v] for v in s)) for s in fiber.simplices} != set(fiber.simplices):
        raise EulerCalcError("monodromy is not a simplicial automorphism of the fiber")
    pos = {v: k for k, v in enumerate(verts)}
    m = len(verts)

    def vid(level: int, v: int) -> int:
        if level == n:
            level, v = 0, monodromy[v]
        return level * m + pos[v]

    tops = []
    for i in range(n):
        for s in fiber.maximal_simplices():
            for j in range(len(s)):
                tops.append([vid(i, v) for v in s[: j + 1]] + [vid(i + 1, v) for v in s[j:]])
    total = build_complex(tops)
    base = build_complex([[i, (i + 1) % n] for i in range(n)])
    proj = SimplicialMap(total, base, {level * m + pos[v]: level for level in range(n) for v in verts})
    return MappingTorus(total, base, proj, fiber)


def arc_cover(base: SimplicialComplex, pieces: int = 2) -> list[CellSet]:
    """Cover an n-gon base by ``pieces`` closed arcs that overlap at their endpoints."""
    n = len(base.vertices)
    if not 1 <= pieces <= n:
        raise EulerCalcError("number of arcs must be between 1 and the number of vertices")
    cuts = [round(k * n / pieces) for k in range(pieces + 1)]
    cover = []
    for a, b in zip(cuts, cuts[1:]):
        cells = {(v % n,) for v in range(a, b + 1)}
        cells |= {tuple(sorted((v % n, (v + 1) % n))) for v in range(a, b)}
        cover.append(CellSet(base, cells))
    return cover


def product_bundle(fiber: SimplicialComplex, base: SimplicialComplex | None = None) -> BundleSpec:
    """The trivial bundle ``F -> pt`` (base a single point), covered by one piece."""
    if base is None:
        base = build_complex([[0]])
    if len(base.vertices) != 1:
        raise EulerCalcError("product_bundle only builds bundles over a point")
    (b,) = base.vertices
    proj = SimplicialMap(fiber, base, {v: b for v in fiber.vertices})
    return BundleSpec(fiber, base, proj, (base.cells(),), chi_cellset(fiber))


def torus_bundle_spec(torus: MappingTorus, pieces: int = 2) -> BundleSpec:
    return BundleSpec(
        torus.total,
        torus.base,
        torus.projection,
        tuple(arc_cover(torus.base, pieces)),
        chi_cellset(torus.fiber),
    )


@dataclass(frozen=True)
class RamificationData:
    sheets: int
    base_chi: int
    indices: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        if self.sheets < 1:
            raise EulerCalcError("number of sheets must be at least 1")
        for e in self.indices:
            if e < 2:
                raise EulerCalcError("trivial ramification index must be omitted")
            if e > self.sheets:
                raise EulerCalcError(f"ramification index {e} exceeds the number of sheets {self.sheets}")


def riemann_hurwitz(data: RamificationData) -> int:
    """χ of the covering surface: ``n·χ(S) - Σ (e - 1)``."""
    return data.sheets * data.base_chi - sum(e - 1 for e in data.indices)
