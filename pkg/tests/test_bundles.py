import pytest
from hypothesis import given, strategies as st

from eulercalc import fixtures
from eulercalc.bundles import (
    BundleSpec,
    RamificationData,
    arc_cover,
    bundle_chi_via_inclusion_exclusion,
    check_local_triviality_chi,
    mapping_torus,
    product_bundle,
    riemann_hurwitz,
    torus_bundle_spec,
)
from eulercalc.complex import CellSet, SimplicialMap, build_complex, chi_cellset
from eulercalc.errors import EulerCalcError, LocalTrivialityError

from generators import refine_cover, seeded

BUNDLES = {
    "cylinder": (fixtures.interval, {0: 0, 1: 1}),
    "mobius": (fixtures.interval, {0: 1, 1: 0}),
    "torus": (lambda: fixtures.circle(3), {0: 0, 1: 1, 2: 2}),
    "klein": (lambda: fixtures.circle(3), {0: 0, 1: 2, 2: 1}),
}


def bundle(name, n=4, pieces=2):
    fiber, mono = BUNDLES[name]
    return torus_bundle_spec(mapping_torus(fiber(), mono, n), pieces)


def random_cover(rng, base, m):
    simplices = sorted(base.simplices)
    pieces = [{s for s in simplices if rng.random() < 0.5} for _ in range(m)]
    for s in simplices:
        if not any(s in p for p in pieces):
            pieces[int(rng.integers(m))].add(s)
    return [CellSet(base, p) for p in pieces]


class TestMappingTorus:
    def test_cylinder_counts(self):
        # circle(3) x interval, staircase: V = 3*2, E = 3*2 + 3 + 3, F = 3*2
        total = mapping_torus(fixtures.interval(), {0: 0, 1: 1}, 3).total
        assert total.counts_by_dim() == [6, 12, 6]
        assert chi_cellset(total) == 0

    def test_rejects_short_circle(self):
        with pytest.raises(EulerCalcError):
            mapping_torus(fixtures.interval(), {0: 0, 1: 1}, 2)

    def test_rejects_non_automorphism(self):
        path = build_complex([[0, 1], [1, 2]])
        with pytest.raises(EulerCalcError, match="automorphism"):
            mapping_torus(path, {0: 1, 1: 0, 2: 2}, 3)

    @pytest.mark.parametrize("name", sorted(BUNDLES))
    def test_projection_fibres(self, name):
        spec = bundle(name)
        for v in spec.base.vertices:
            fibre = CellSet(spec.total, [s for s in spec.total.simplices if spec.projection.image(s) == (v,)])
            assert chi_cellset(fibre) == spec.fiber_chi


class TestLocalTriviality:
    @pytest.mark.parametrize("seed", range(5))
    def test_trivial_bundles_pass_any_cover(self, seed):
        rng = seeded(seed)
        for name in ("cylinder", "torus"):
            spec = bundle(name)
            spec = spec.with_cover(random_cover(rng, spec.base, int(rng.integers(1, 6))))
            assert check_local_triviality_chi(spec).passed

    def test_mobius_two_arcs(self):
        report = check_local_triviality_chi(bundle("mobius"))
        assert report.passed
        assert [r.subset for r in report.rows] == [(0,), (1,), (0, 1)]
        assert all(r.chi_preimage == r.chi_base_piece for r in report.rows)

    def test_wrong_fiber_chi(self):
        spec = bundle("cylinder")
        spec = BundleSpec(spec.total, spec.base, spec.projection, spec.cover, 2)
        report = check_local_triviality_chi(spec)
        for row in report.rows:
            assert row.passed == (row.chi_base_piece == 0)
        assert not report.passed

    def test_non_bundle_fails_precheck(self):
        # a "V" mapped onto an edge: fibre has two points except over vertex 0
        vee = build_complex([[0, 1], [0, 2]])
        p = SimplicialMap(vee, fixtures.interval(), {0: 0, 1: 1, 2: 1})
        spec = BundleSpec(vee, p.target, p, (p.target.cells(),), 2)
        with pytest.raises(LocalTrivialityError) as info:
            bundle_chi_via_inclusion_exclusion(spec)
        assert not info.value.report.passed


class TestInclusionExclusion:
    @pytest.mark.parametrize("name", sorted(BUNDLES))
    def test_fixtures(self, name):
        spec = bundle(name)
        result = bundle_chi_via_inclusion_exclusion(spec)
        assert result.chi == chi_cellset(spec.total) == chi_cellset(spec.base) * spec.fiber_chi == 0
        assert result.recomputed_sum() == result.chi

    def test_klein_fibre_is_a_circle(self):
        assert bundle("klein").fiber_chi == 0

    def test_point_times_octahedron(self):
        result = bundle_chi_via_inclusion_exclusion(product_bundle(fixtures.octahedron()))
        assert (result.chi, result.chi_base, result.fiber_chi) == (2, 1, 2)

    @pytest.mark.parametrize("name", sorted(BUNDLES))
    @pytest.mark.parametrize("seed", range(3))
    def test_refinement_stability(self, name, seed):
        rng = seeded(seed)
        spec = bundle(name, n=5, pieces=3)
        finer = spec.with_cover(refine_cover(rng, spec.cover))
        assert bundle_chi_via_inclusion_exclusion(finer).chi == bundle_chi_via_inclusion_exclusion(spec).chi

    def test_trace_rows(self):
        result = bundle_chi_via_inclusion_exclusion(bundle("mobius", n=6, pieces=3))
        for row in result.trace:
            assert row.sign == (-1) ** (len(row.subset) + 1)
        lines = result.equation_lines()
        assert lines[0] == "chi(E) = 0"
        assert lines[4] == "  = chi(F) * chi(B) = 0"

    def test_mismatch_detected(self):
        spec = bundle("cylinder")
        # skip validation to feed a cover that misses part of the base
        broken = object.__new__(BundleSpec)
        for name, value in vars(spec).items():
            object.__setattr__(broken, name, value)
        object.__setattr__(broken, "cover", (spec.cover[0],))
        with pytest.raises(EulerCalcError, match="disagrees with direct"):
            bundle_chi_via_inclusion_exclusion(broken)

    def test_more_pieces(self):
        spec = bundle("klein", n=8, pieces=8)
        assert len(spec.cover) == 8
        assert bundle_chi_via_inclusion_exclusion(spec).chi == 0


class TestBundleSpec:
    def test_cover_must_cover(self):
        spec = bundle("cylinder")
        with pytest.raises(EulerCalcError, match="do not cover"):
            spec.with_cover([spec.cover[0]])

    def test_cover_size(self):
        spec = bundle("cylinder")
        with pytest.raises(EulerCalcError):
            spec.with_cover([])
        with pytest.raises(EulerCalcError):
            spec.with_cover([spec.base.cells()] * 21)

    def test_projection_must_match(self):
        spec = bundle("cylinder")
        other = bundle("torus")
        with pytest.raises(EulerCalcError, match="projection"):
            BundleSpec(spec.total, spec.base, other.projection, spec.cover, 1)

    def test_arc_cover(self):
        base = fixtures.circle(6)
        cover = arc_cover(base, 3)
        assert set().union(*(p.members for p in cover)) == base.simplices
        assert [chi_cellset(p) for p in cover] == [1, 1, 1]


class TestRiemannHurwitz:
    def test_square_map_on_sphere(self):
        assert riemann_hurwitz(RamificationData(2, 2, (2, 2))) == 2

    def test_unramified_torus_cover(self):
        assert riemann_hurwitz(RamificationData(2, 0, ())) == 0

    def test_hyperelliptic_genus_two(self):
        assert riemann_hurwitz(RamificationData(2, 2, (2,) * 6)) == -2

    @pytest.mark.parametrize("indices", [(1,), (0, 2), (3,)])
    def test_invalid_indices(self, indices):
        with pytest.raises(EulerCalcError):
            RamificationData(2, 2, indices)

    def test_trivial_index_message(self):
        with pytest.raises(EulerCalcError, match="trivial ramification index must be omitted"):
            RamificationData(3, 2, (1,))

    def test_sheets_positive(self):
        with pytest.raises(EulerCalcError):
            RamificationData(0, 2)

    @given(st.integers(2, 8), st.integers(-6, 2), st.data())
    def test_monotone_and_linear(self, n, chi, data):
        indices = tuple(data.draw(st.lists(st.integers(2, n), max_size=6)))
        e = data.draw(st.integers(2, n))
        base = riemann_hurwitz(RamificationData(n, chi, indices))
        assert riemann_hurwitz(RamificationData(n, chi, indices + (e,))) < base
        assert riemann_hurwitz(RamificationData(n, chi + 1, indices)) - base == n
