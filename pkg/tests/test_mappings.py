import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixlab.errors import DomainError, InvariantError, PreconditionError, UnsupportedError
from fixlab.geodesic import euclidean
from fixlab.mappings import (
    CATALOG,
    GAUGES,
    MappingSpec,
    all_pairs,
    check_condition_c,
    check_condition_i,
    check_gen_alpha,
    check_monotone,
    check_quasi_nonexpansive,
    check_residual_image_bound,
    comparable_pairs,
    from_catalog,
    gen_alpha_margins,
    interval,
    jump_map,
    parse_pieces,
    piecewise_poly_map,
    run_property_suite,
    scalar_grid,
    validate_mapping,
)
from fixlab.order import order_for

SLACK = 1e-12


def jump_grid_pairs():
    pts = scalar_grid(0.0, 4.0, 0.01)
    return all_pairs(pts)


def jump_comparable():
    m = jump_map()
    pts = scalar_grid(0.0, 4.0, 0.01)
    return comparable_pairs(m.rel(), pts)


class TestCatalog:
    def test_jump_values(self):
        m = jump_map()
        assert float(m.apply(np.array([0.9]))[0]) == 0.0
        assert float(m.apply(np.array([4.0]))[0]) == 2.0
        assert float(m.apply(np.array([0.0]))[0]) == 0.0

    def test_jump_unique_fixed_point(self):
        m = jump_map()
        assert m.fixed_points.shape == (1, 1)
        assert m.fixed_points[0, 0] == 0.0

    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_all_entries_valid(self, name):
        validate_mapping(from_catalog(name))

    def test_unknown_name(self):
        with pytest.raises(DomainError):
            from_catalog("does-not-exist")

    def test_validate_rejects_escaping_map(self):
        m = MappingSpec(
            name="escape",
            space=euclidean(1),
            domain=interval(0.0, 1.0),
            apply=lambda x: x + 2.0,
        )
        with pytest.raises(InvariantError):
            validate_mapping(m)

    def test_validate_rejects_bogus_fixed_point(self):
        m = MappingSpec(
            name="bogus",
            space=euclidean(1),
            domain=interval(0.0, 1.0),
            apply=lambda x: 0.5 * x,
            fixed_points=np.array([[0.5]]),
        )
        with pytest.raises(InvariantError):
            validate_mapping(m)


class TestConditionC:
    def test_jump_refuted_with_replayable_witness(self):
        m = jump_map()
        report = check_condition_c(m, jump_grid_pairs())
        assert not report.holds()
        w = report.witnesses[0]
        x, y = np.asarray(w.inputs["x"]), np.asarray(w.inputs["y"])
        tx, ty = m.apply(x), m.apply(y)
        space = m.space
        # the trigger fires and the conclusion fails, by at least the margin
        assert 0.5 * space.dist(x, tx) <= space.dist(x, y)
        assert space.dist(tx, ty) - space.dist(x, y) >= -report.worst_margin - SLACK

    def test_named_witness_from_grid_search(self):
        # x = 4, y = 2.5: trigger 1 <= 1.5 but images are 2 > 1.5 apart
        m = jump_map()
        pairs = (np.array([[4.0]]), np.array([[2.5]]))
        report = check_condition_c(m, pairs)
        assert not report.holds()
        assert report.worst_margin == pytest.approx(-0.5, abs=1e-12)

    def test_contraction_holds(self):
        m = from_catalog("halve")
        pts = scalar_grid(0.0, 1.0, 0.01)
        report = check_condition_c(m, all_pairs(pts))
        assert report.holds()

    def test_untriggered_pairs_are_skipped(self):
        m = jump_map()
        # x = 4, y = 3.5: half-residual 1 > 0.5, so the pair is exempt
        report = check_condition_c(m, (np.array([[4.0]]), np.array([[3.5]])))
        assert report.samples_checked == 0
        assert report.holds()


class TestGenAlpha:
    def test_jump_holds_at_one_third(self):
        m = jump_map()
        report = check_gen_alpha(m, 1.0 / 3.0, m.rel(), jump_comparable())
        assert report.holds()
        assert report.worst_margin >= -SLACK

    def test_jump_refuted_at_zero(self):
        # alpha = 0 collapses the bound to plain nonexpansiveness
        m = jump_map()
        report = check_gen_alpha(m, 0.0, m.rel(), jump_comparable())
        assert not report.holds()

    def test_identity_holds_for_any_alpha(self):
        m = from_catalog("identity")
        pairs = comparable_pairs(m.rel(), scalar_grid(0.0, 1.0, 0.05))
        for alpha in (0.0, 0.25, 0.9):
            report = check_gen_alpha(m, alpha, m.rel(), pairs)
            assert report.holds(), alpha

    def test_alpha_domain(self):
        m = jump_map()
        with pytest.raises(DomainError):
            check_gen_alpha(m, 1.0, m.rel(), jump_comparable())

    @settings(max_examples=60, deadline=None)
    @given(
        a1=st.floats(0.0, 0.45),
        a2=st.floats(0.5, 0.95),
        lam=st.floats(0.0, 1.0),
    )
    def test_margins_affine_in_alpha(self, a1, a2, lam):
        m = jump_map()
        x, y = jump_comparable()
        x, y = x[::997], y[::997]
        mid = lam * a1 + (1.0 - lam) * a2
        m1, _ = gen_alpha_margins(m, a1, x, y)
        m2, _ = gen_alpha_margins(m, a2, x, y)
        got, _ = gen_alpha_margins(m, mid, x, y)
        assert np.allclose(got, lam * m1 + (1.0 - lam) * m2, atol=1e-9)


class TestQuasiNonexpansive:
    def test_jump_holds(self):
        m = jump_map()
        report = check_quasi_nonexpansive(m, m.rel(), scalar_grid(0.0, 4.0, 0.01))
        assert report.holds()

    def test_contraction_holds(self):
        m = from_catalog("halve")
        report = check_quasi_nonexpansive(m, m.rel(), scalar_grid(0.0, 1.0, 0.01))
        assert report.holds()

    def test_doubling_refuted_near_zero(self):
        m = from_catalog("double-clip")
        report = check_quasi_nonexpansive(m, m.rel(), scalar_grid(0.0, 1.0, 0.01))
        assert not report.holds()
        w = report.witnesses[0]
        x = float(np.asarray(w.inputs["x"])[0])
        p = float(np.asarray(w.inputs["p"])[0])
        assert p == 0.0 and 0.0 < x <= 0.5

    def test_requires_fixed_points(self):
        m = MappingSpec(
            name="anon",
            space=euclidean(1),
            domain=interval(0.0, 1.0),
            apply=lambda x: x,
        )
        with pytest.raises(PreconditionError):
            check_quasi_nonexpansive(m, m.rel(), scalar_grid(0.0, 1.0, 0.5))


class TestResidualImageBound:
    def test_jump_coefficient_five(self):
        m = jump_map()
        alpha = 1.0 / 3.0
        assert (3.0 + alpha) / (1.0 - alpha) == pytest.approx(5.0, rel=1e-15)
        report = check_residual_image_bound(m, alpha, m.rel(), jump_comparable())
        assert report.holds()

    def test_fixed_point_reduces_to_quasi(self):
        # with x a fixed point the residual term vanishes
        m = jump_map()
        y = scalar_grid(0.0, 4.0, 0.1)
        x = np.zeros_like(y)
        report = check_residual_image_bound(m, 1.0 / 3.0, m.rel(), (x, y))
        assert report.holds()

    def test_diagonal_pairs(self):
        m = jump_map()
        pts = scalar_grid(0.0, 4.0, 0.1)
        report = check_residual_image_bound(m, 1.0 / 3.0, m.rel(), (pts, pts))
        assert report.holds()

    def test_alpha_domain(self):
        m = jump_map()
        with pytest.raises(DomainError):
            check_residual_image_bound(m, 1.0, m.rel(), jump_comparable())


class TestConditionI:
    def test_jump_with_half_gauge(self):
        m = jump_map()
        report = check_condition_i(m, GAUGES["half"], scalar_grid(0.0, 4.0, 0.01))
        assert report.holds()
        # boundary point: residual 2 meets the gauge value h(4) = 2 exactly
        single = check_condition_i(m, GAUGES["half"], np.array([[4.0]]))
        assert single.holds()
        assert single.worst_margin == pytest.approx(0.0, abs=1e-12)

    def test_fixed_points_trivial(self):
        m = from_catalog("halve")
        report = check_condition_i(m, GAUGES["half"], np.array([[0.0]]))
        assert report.holds()

    def test_identity_on_its_grid(self):
        m = from_catalog("identity")
        report = check_condition_i(m, GAUGES["identity"], m.fixed_points)
        assert report.holds()
        assert report.worst_margin == pytest.approx(0.0, abs=1e-15)

    def test_unknown_fixed_set_unsupported(self):
        m = MappingSpec(
            name="anon",
            space=euclidean(1),
            domain=interval(0.0, 1.0),
            apply=lambda x: x,
        )
        with pytest.raises(UnsupportedError):
            check_condition_i(m, GAUGES["half"], scalar_grid(0.0, 1.0, 0.5))


class TestMonotone:
    def test_increasing_affine_holds(self):
        m = from_catalog("toward-one")
        pairs = comparable_pairs(m.rel(), scalar_grid(0.0, 1.0, 0.01))
        assert check_monotone(m, m.rel(), pairs).holds()

    def test_decreasing_refuted(self):
        m = from_catalog("reflect")
        pairs = comparable_pairs(m.rel(), scalar_grid(0.0, 1.0, 0.5))
        report = check_monotone(m, m.rel(), pairs)
        assert not report.holds()
        w = report.witnesses[0]
        assert float(np.asarray(w.inputs["Tx"])[0]) > float(np.asarray(w.inputs["Ty"])[0])

    def test_jump_is_monotone_under_scalar_order(self):
        # the jump at the right endpoint goes up, so x <= y implies Tx <= Ty
        m = jump_map()
        report = check_monotone(m, m.rel(), jump_comparable())
        assert report.holds()

    def test_grid_operator_monotone(self):
        from fixlab.integral import as_mapping, default_problem

        problem = default_problem(n=24)
        m = as_mapping(problem)
        rng = np.random.default_rng(0)
        lo = problem.space().sample(rng, 100)
        hi = lo + np.abs(rng.normal(size=lo.shape))
        assert check_monotone(m, order_for(problem.space()), (lo, hi)).holds()


class TestHierarchy:
    """Testable form of the class-inclusion remarks."""

    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_condition_c_implies_gen_alpha_zero(self, name):
        m = from_catalog(name)
        pairs = comparable_pairs(m.rel(), scalar_grid(0.0, 1.0, 0.02))
        if check_condition_c(m, pairs).holds():
            assert check_gen_alpha(m, 0.0, m.rel(), pairs).holds()

    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_gen_alpha_implies_quasi(self, name):
        m = from_catalog(name)
        lo = float(m.domain.lo[0])
        hi = float(m.domain.hi[0])
        pts = scalar_grid(lo, hi, 0.02)
        pairs = comparable_pairs(m.rel(), pts)
        alpha = m.declared.get("generalized-alpha")
        if alpha is None:
            return
        if check_gen_alpha(m, float(alpha), m.rel(), pairs).holds():
            assert check_quasi_nonexpansive(m, m.rel(), pts).holds()


class TestPiecewisePolynomial:
    def test_parse_and_apply(self):
        pieces = parse_pieces("0:0.5:0,1 ; 0.5:1:0.25,0.5")
        m = piecewise_poly_map(0.0, 1.0, pieces, fixed_points=[[0.0]])
        validate_mapping(m)
        assert float(m.apply(np.array([0.25]))[0]) == 0.25
        assert float(m.apply(np.array([0.8]))[0]) == pytest.approx(0.65)

    def test_parse_errors(self):
        with pytest.raises(DomainError):
            parse_pieces("")
        with pytest.raises(DomainError):
            parse_pieces("0:1")
        with pytest.raises(DomainError):
            parse_pieces("1:0:1,2")

    def test_quadratic_piece(self):
        pieces = parse_pieces("0:1:0,0,1")
        m = piecewise_poly_map(0.0, 1.0, pieces)
        assert float(m.apply(np.array([0.5]))[0]) == pytest.approx(0.25)


class TestSuiteDriver:
    def test_jump_suite_matches_declarations(self):
        m = jump_map()
        reports = {r.name: r for r in run_property_suite(m)}
        assert not reports["condition-C"].holds()
        assert reports["generalized-alpha"].holds()
        assert reports["quasi-nonexpansive"].holds()
        assert reports["residual-image-bound"].holds()
        assert reports["condition-I"].holds()
        assert reports["monotone"].holds()

    def test_witness_serialisation(self):
        m = jump_map()
        for r in run_property_suite(m):
            d = r.to_dict()
            assert set(d) == {"property", "verdict", "samples", "worst_margin", "witnesses"}
