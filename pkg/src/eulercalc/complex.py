"""Finite abstract simplicial complexes and sets of open cells.

A simplex is a strictly increasing tuple of nonnegative vertex ids and always
stands for the *open* simplex (its interior).  A :class:`SimplicialComplex` is
closed under faces; a :class:`CellSet` is an arbitrary subset of the open
simplices of a complex and need not be closed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import EulerCalcError

Simplex = tuple  # tuple[int, ...], strictly increasing


def make_simplex(vertices: Iterable[int]) -> Simplex:
    """Return the canonical (sorted) form of a simplex.

    Raises ``EulerCalcError`` on repeated vertices, empty input or
    negative/non-integer ids.
    """
    vs = tuple(vertices)
    if not vs:
        raise EulerCalcError("empty simplex")
    for v in vs:
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise EulerCalcError(f"vertex ids must be nonnegative integers, got {v!r}")
    out = tuple(sorted(vs))
    if len(set(out)) != len(out):
        raise EulerCalcError(f"degenerate simplex {list(vs)}")
    return out


def dim(simplex: Simplex) -> int:
    return len(simplex) - 1


def faces(simplex: Simplex) -> Iterator[Simplex]:
    """Yield every nonempty face of ``simplex``, itself included."""
    for k in range(1, len(simplex) + 1):
        yield from combinations(simplex, k)


def _sign(simplex: Simplex) -> int:
    return 1 if len(simplex) % 2 else -1


class SimplicialComplex:
    """An immutable, face-closed, finite set of simplices."""

    __slots__ = ("_simplices", "_hash")

    def __init__(self, simplices: Iterable[Simplex]):
        simplices = frozenset(simplices)
        for s in simplices:
            for k in range(1, len(s)):
                for f in combinations(s, k):
                    if f not in simplices:
                        raise EulerCalcError(f"not closed under faces: {list(s)} lacks {list(f)}")
        self._simplices = simplices
        self._hash = None

    @classmethod
    def _trusted(cls, simplices: frozenset) -> "SimplicialComplex":
        obj = cls.__new__(cls)
        obj._simplices = simplices
        obj._hash = None
        return obj

    @property
    def simplices(self) -> frozenset:
        return self._simplices

    def __contains__(self, simplex) -> bool:
        return simplex in self._simplices

    def __iter__(self) -> Iterator[Simplex]:
        return iter(sorted(self._simplices, key=lambda s: (len(s), s)))

    def __len__(self) -> int:
        return len(self._simplices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._simplices == other._simplices

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._simplices)
        return self._hash

    def __repr__(self) -> str:
        return f"SimplicialComplex(counts={self.counts_by_dim()})"

    @property
    def dim(self) -> int:
        return max((len(s) for s in self._simplices), default=0) - 1

    @property
    def vertices(self) -> list[int]:
        return sorted(s[0] for s in self._simplices if len(s) == 1)

    def counts_by_dim(self) -> list[int]:
        """Number of simplices of each dimension, ``[c_0, c_1, ...]``."""
        counts = Counter(len(s) - 1 for s in self._simplices)
        return [counts[d] for d in range(self.dim + 1)]

    def simplices_of_dim(self, d: int) -> list[Simplex]:
        return sorted(s for s in self._simplices if len(s) == d + 1)

    def maximal_simplices(self) -> list[Simplex]:
        facets = set(self._simplices)
        for s in self._simplices:
            if len(s) > 1:
                for f in combinations(s, len(s) - 1):
                    facets.discard(f)
        return sorted(facets, key=lambda s: (len(s), s))

    def cells(self, members: Iterable[Sequence[int]] | None = None) -> "CellSet":
        """A :class:`CellSet` over this complex; all simplices when ``members`` is None."""
        if members is None:
            return CellSet(self, self._simplices)
        return CellSet(self, (make_simplex(m) for m in members))


def build_complex(maximal_simplices: Iterable[Sequence[int]]) -> SimplicialComplex:
    """Closure under faces of the given simplices."""
    tops = [make_simplex(s) for s in maximal_simplices]
    if not tops:
        raise EulerCalcError("empty complex")
    closed: set[Simplex] = set()
    for s in tops:
        if s in closed:
            continue
        closed.update(faces(s))
    return SimplicialComplex._trusted(frozenset(closed))


@dataclass(frozen=True, eq=False)
class CellSet:
    """A subset of the open simplices of ``ambient``."""

    ambient: SimplicialComplex
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        members = self.members
        if not isinstance(members, frozenset):
            members = frozenset(members)
            object.__setattr__(self, "members", members)
        stray = members - self.ambient.simplices
        if stray:
            bad = sorted(stray)[0]
            raise EulerCalcError(f"simplex {list(bad)} is not in the ambient complex")

    def __eq__(self, other) -> bool:
        if not isinstance(other, CellSet):
            return NotImplemented
        return self.members == other.members and self.ambient == other.ambient

    def __hash__(self) -> int:
        return hash((self.ambient, self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(sorted(self.members, key=lambda s: (len(s), s)))

    def __contains__(self, simplex) -> bool:
        return simplex in self.members

    def __repr__(self) -> str:
        return f"CellSet({len(self.members)} cells)"

    def _check(self, other: "CellSet") -> None:
        if self.ambient is not other.ambient and self.ambient != other.ambient:
            raise EulerCalcError("incompatible ambient complexes")

    def __or__(self, other: "CellSet") -> "CellSet":
        self._check(other)
        return CellSet(self.ambient, self.members | other.members)

    def __and__(self, other: "CellSet") -> "CellSet":
        self._check(other)
        return CellSet(self.ambient, self.members & other.members)

    def __sub__(self, other: "CellSet") -> "CellSet":
        self._check(other)
        return CellSet(self.ambient, self.members - other.members)

    def is_closed(self) -> bool:
        return all(f in self.members for s in self.members for f in faces(s))

    def closure(self) -> "CellSet":
        return CellSet(self.ambient, {f for s in self.members for f in faces(s)})

    def as_complex(self) -> SimplicialComplex:
        if not self.is_closed():
            raise EulerCalcError("homology requires a closed complex")
        return SimplicialComplex._trusted(self.members)

    def counts_by_dim(self) -> list[int]:
        counts = Counter(len(s) - 1 for s in self.members)
        top = max(counts, default=-1)
        return [counts[d] for d in range(top + 1)]


Cells = Union[CellSet, SimplicialComplex]


def _members(cells: Cells) -> Iterable[Simplex]:
    if isinstance(cells, SimplicialComplex):
        return cells.simplices
    return cells.members


def chi_cellset(cells: Cells) -> int:
    """Combinatorial Euler characteristic: sum of ``(-1)**dim`` over open cells."""
    return sum(_sign(s) for s in _members(cells))


@dataclass(frozen=True)
class CellComplexSummary:
    """Cell counts by dimension, for spaces whose cells are not simplices."""

    cell_counts: tuple[int, ...]

    def __post_init__(self):
        counts = list(self.cell_counts)
        if any(c < 0 for c in counts):
            raise EulerCalcError("cell counts must be nonnegative")
        while counts and counts[-1] == 0:
            counts.pop()
        object.__setattr__(self, "cell_counts", tuple(counts))

    @property
    def chi(self) -> int:
        return sum(c if d % 2 == 0 else -c for d, c in enumerate(self.cell_counts))

    def as_dict(self) -> dict[int, int]:
        return {d: c for d, c in enumerate(self.cell_counts) if c}


def product_cellset(first: Cells, second: Cells) -> CellComplexSummary:
    """Cell counts of the product of two cell sets (products of open simplices)."""
    a = _counts(first)
    b = _counts(second)
    out = [0] * max(len(a) + len(b) - 1, 0)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return CellComplexSummary(tuple(out))


def _counts(cells: Cells) -> list[int]:
    if isinstance(cells, CellComplexSummary):
        return list(cells.cell_counts)
    counts = Counter(len(s) - 1 for s in _members(cells))
    top = max(counts, default=-1)
    return [counts[d] for d in range(top + 1)]


class SimplicialMap:
    """A vertex map ``source -> target`` that carries simplices to simplices.

    Simplices may collapse: the image of a simplex is its deduplicated vertex
    image.
    """

    __slots__ = ("source", "target", "vertex_map")

    def __init__(
        self,
        source: SimplicialComplex,
        target: SimplicialComplex,
        vertex_map: Mapping[int, int],
    ):
        vmap = {int(k): int(v) for k, v in vertex_map.items()}
        missing = [v for v in source.vertices if v not in vmap]
        if missing:
            raise EulerCalcError(f"vertex map is not total: no image for vertex {missing[0]}")
        self.source = source
        self.target = target
        self.vertex_map = {v: vmap[v] for v in source.vertices}
        for s in source.maximal_simplices():
            img = self.image(s)
            if img not in target.simplices:
                raise EulerCalcError(
                    f"image {list(img)} of simplex {list(s)} is not a simplex of the target"
                )

    def image(self, simplex: Simplex) -> Simplex:
        return tuple(sorted({self.vertex_map[v] for v in simplex}))

    def compose(self, after: "SimplicialMap") -> "SimplicialMap":
        """``after ∘ self``."""
        if after.source != self.target:
            raise EulerCalcError("maps are not composable")
        return SimplicialMap(
            self.source,
            after.target,
            {v: after.vertex_map[w] for v, w in self.vertex_map.items()},
        )

    @classmethod
    def identity(cls, complex_: SimplicialComplex) -> "SimplicialMap":
        return cls(complex_, complex_, {v: v for v in complex_.vertices})

    def __repr__(self) -> str:
        return f"SimplicialMap({len(self.source)} -> {len(self.target)} simplices)"


def preimage_cellset(p: SimplicialMap, cells: CellSet) -> CellSet:
    """All source simplices whose open image lies in ``cells``.

    Exact as a set-theoretic preimage, because a simplicial map sends each
    open simplex onto the open simplex spanned by its image vertices.
    """
    if cells.ambient != p.target:
        raise EulerCalcError("cell set is not over the target of the map")
    wanted = cells.members
    return CellSet(p.source, (s for s in p.source.simplices if p.image(s) in wanted))


def barycentric_subdivide(
    complex_: SimplicialComplex, max_simplices: int | None = None
) -> SimplicialComplex:
    """Barycentric subdivision: vertices are simplices, simplices are chains.

    New vertex ids number the old simplices in (dimension, lexicographic)
    order.  If ``max_simplices`` is given and the result would exceed it, an
    ``EulerCalcError`` is raised before the chains are enumerated.
    """
    if max_simplices is not None:
        expected = sum(_chain_count(len(s)) for s in complex_.simplices)
        if expected > max_simplices:
            raise EulerCalcError(
                f"subdivision would have {expected} simplices (cap {max_simplices})"
            )
    index = {s: i for i, s in enumerate(complex_)}
    out: set[Simplex] = set()
    for top in complex_.maximal_simplices():
        for order in permutations(top):
            # order fixes a full flag v0 < v0v1 < ... < top
            flag = [index[tuple(sorted(order[: k + 1]))] for k in range(len(order))]
            for k in range(1, len(flag) + 1):
                for chain in combinations(flag, k):
                    out.add(tuple(sorted(chain)))
    return SimplicialComplex._trusted(frozenset(out))


def _chain_count(n: int) -> int:
    """Chains in the face poset of an (n-1)-simplex that end at the simplex itself."""
    # ordered set partitions of n labelled points (Fubini numbers)
    fub = [1]
    for m in range(1, n + 1):
        fub.append(sum(comb(m, k) * fub[m - k] for k in range(1, m + 1)))
    return fub[n]

