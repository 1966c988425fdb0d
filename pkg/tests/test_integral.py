import numpy as np
import pytest

from fixlab.errors import (
    DomainError,
    InvariantError,
    NonConvergenceError,
    SpaceMismatchError,
)
from fixlab.integral import (
    GAUSS_LEGENDRE,
    TRAPEZOID,
    GridFunction,
    KernelSpec,
    apply_operator,
    as_mapping,
    build_grid,
    check_kernel_conditions,
    containment_radius,
    default_kernel,
    default_problem,
    l2_norm,
    linear_kernel,
    make_problem,
    refine_check,
    solve_picard,
    solve_thakur,
    zero_kernel,
)
from fixlab.order import leq_many, order_for
from fixlab.report import all_hold
from fixlab.schemes import check_fejer_monotone

GL2_NODES = (0.21132486540518713, 0.7886751345948129)


def linear_problem(n=64, m=0.25):
    grid = build_grid(n)
    return make_problem(grid, linear_kernel(m), GridFunction(grid, np.ones(n)))


def zero_problem(n=32):
    grid = build_grid(n)
    return make_problem(grid, zero_kernel(), GridFunction(grid, grid.nodes.copy()))


class TestGrids:
    def test_trapezoid_three_nodes(self):
        g = build_grid(3)
        assert np.array_equal(g.nodes, [0.0, 0.5, 1.0])
        assert np.array_equal(g.weights, [0.25, 0.5, 0.25])

    @pytest.mark.parametrize("rule", (TRAPEZOID, GAUSS_LEGENDRE))
    @pytest.mark.parametrize("n", (2, 5, 64))
    def test_weights_normalised(self, rule, n):
        g = build_grid(n, rule)
        assert abs(g.weights.sum() - 1.0) <= 1e-12
        assert np.all(g.weights > 0)
        assert np.all(np.diff(g.nodes) > 0)
        assert g.nodes[0] >= 0.0 and g.nodes[-1] <= 1.0

    def test_gauss_legendre_two_point(self):
        g = build_grid(2, GAUSS_LEGENDRE)
        assert g.nodes == pytest.approx(GL2_NODES, rel=1e-14)
        assert g.weights == pytest.approx((0.5, 0.5), rel=1e-14)

    def test_too_few_nodes(self):
        with pytest.raises(DomainError):
            build_grid(1)

    def test_unknown_rule(self):
        with pytest.raises(DomainError):
            build_grid(8, "simpson")


class TestGridFunctions:
    def test_norm_of_constant_one(self):
        g = build_grid(17)
        assert l2_norm(GridFunction(g, np.ones(17))) == pytest.approx(1.0, rel=1e-12)

    def test_norm_of_identity_function(self):
        g = build_grid(101)
        value = l2_norm(GridFunction(g, g.nodes.copy()))
        assert value == pytest.approx(1.0 / np.sqrt(3.0), abs=5e-4)

    def test_norm_of_zero(self):
        g = build_grid(5)
        assert l2_norm(GridFunction(g, np.zeros(5))) == 0.0

    def test_length_mismatch(self):
        g = build_grid(5)
        with pytest.raises(SpaceMismatchError):
            GridFunction(g, np.zeros(6))

    def test_non_finite_rejected(self):
        g = build_grid(5)
        with pytest.raises(DomainError):
            GridFunction(g, np.array([0.0, 1.0, np.nan, 0.0, 0.0]))


class TestOperator:
    def test_zero_kernel_returns_start(self):
        p = zero_problem()
        x = GridFunction(p.grid, np.zeros(p.grid.n))
        tx = apply_operator(p, x)
        assert np.array_equal(tx.values, p.y0.values)

    def test_default_kernel_at_zero_state(self):
        # b(t, z, 0) = t*z integrates to t/2; trapezoid is exact on linear z
        p = default_problem(n=64)
        tx = apply_operator(p, GridFunction(p.grid, np.zeros(64)))
        expected = p.grid.nodes + 0.5 * p.grid.nodes
        assert np.allclose(tx.values, expected, atol=1e-12)

    def test_solution_is_fixed(self):
        p = default_problem(n=32)
        sol, _ = solve_picard(p, tol=1e-12)
        residual = l2_norm(
            GridFunction(p.grid, apply_operator(p, sol).values - sol.values)
        )
        assert residual <= 1e-11

    def test_cross_grid_rejected(self):
        p = default_problem(n=16)
        other = build_grid(24)
        with pytest.raises(SpaceMismatchError):
            apply_operator(p, GridFunction(other, np.zeros(24)))


class TestKernelConditions:
    def test_default_kernel_all_hold(self):
        reports = check_kernel_conditions(default_problem(n=32), rng_seed=7)
        assert all_hold(reports), [(r.name, r.verdict) for r in reports]
        names = {r.name for r in reports}
        assert {
            "growth-constant-below-half",
            "kernel-nonnegative",
            "kernel-monotone-step",
            "kernel-lipschitz-step",
            "growth-bound-integrated",
            "operator-self-map",
            "operator-monotone",
            "operator-nonexpansive-ordered",
            "start-below-image",
        } <= names

    def test_linear_kernel_all_hold(self):
        reports = check_kernel_conditions(linear_problem(n=32), rng_seed=7)
        assert all_hold(reports), [(r.name, r.verdict) for r in reports]

    def test_large_growth_constant_reported(self):
        grid = build_grid(16)
        problem = make_problem(
            grid, default_kernel(m=0.6), GridFunction(grid, grid.nodes.copy())
        )
        reports = {r.name: r for r in check_kernel_conditions(problem, rng_seed=7)}
        assert not reports["growth-constant-below-half"].holds()

    def test_steep_linear_kernel_refutes_lipschitz(self):
        grid = build_grid(16)
        problem = make_problem(
            grid, linear_kernel(m=2.0), GridFunction(grid, np.ones(16))
        )
        reports = {r.name: r for r in check_kernel_conditions(problem, rng_seed=7)}
        bad = reports["kernel-lipschitz-step"]
        assert not bad.holds()
        w = bad.witnesses[0]
        u, v = w.inputs["u"], w.inputs["v"]
        assert 2.0 * (v - u) > (v - u)


class TestPicard:
    def test_zero_kernel_one_step(self):
        sol, trace = solve_picard(zero_problem(), tol=1e-12)
        assert len(trace.records) == 1
        assert np.array_equal(sol.values, trace.records[0].x)

    def test_default_problem_converges(self):
        p = default_problem(n=64)
        sol, trace = solve_picard(p, tol=1e-10)
        assert trace.termination == "tol-reached"
        assert trace.records[-1].residual <= 1e-10
        # iterates increase pointwise and stay norm-bounded
        pts = trace.points()
        assert np.all(np.diff(pts, axis=0) >= 0.0)
        assert l2_norm(sol) <= p.radius

    def test_dense_grid_oracle(self):
        coarse, _ = solve_picard(default_problem(n=64), tol=1e-12)
        fine, _ = solve_picard(default_problem(n=1024), tol=1e-12)
        interp = np.interp(
            fine.grid.nodes, coarse.grid.nodes, coarse.values
        )
        gap = l2_norm(GridFunction(fine.grid, interp - fine.values))
        assert gap <= 1e-4

    def test_linear_kernel_closed_form(self):
        sol, _ = solve_picard(linear_problem(), tol=1e-12)
        assert np.max(np.abs(sol.values - 4.0 / 3.0)) <= 1e-9

    def test_non_convergence_raises(self):
        with pytest.raises(NonConvergenceError) as err:
            solve_picard(default_problem(n=16), tol=1e-10, max_iter=2)
        assert err.value.residual is not None and err.value.residual > 0

    def test_decreasing_kernel_violates_invariant(self):
        def b(t, z, s):
            return np.maximum(0.3 - 0.3 * s, 0.0) + 0.0 * t * z

        def f(t, z):
            return 0.3 + 0.0 * t * z

        grid = build_grid(16)
        kernel = KernelSpec(name="decreasing", b=b, f=f, growth_constant=0.3)
        problem = make_problem(grid, kernel, GridFunction(grid, np.zeros(16)))
        with pytest.raises(InvariantError):
            solve_picard(problem, tol=1e-12)


class TestThakurSolver:
    def test_agrees_with_picard(self):
        p = default_problem(n=64)
        picard_sol, _ = solve_picard(p, tol=1e-10)
        thakur_sol, trace = solve_thakur(p, tol=1e-10)
        gap = l2_norm(GridFunction(p.grid, picard_sol.values - thakur_sol.values))
        assert gap <= 1e-6
        assert trace.records[-1].residual <= 1e-10

    def test_zero_kernel_returns_start(self):
        sol, _ = solve_thakur(zero_problem(), tol=1e-12)
        assert np.allclose(sol.values, zero_problem().y0.values, atol=1e-12)

    def test_linear_kernel_closed_form(self):
        sol, _ = solve_thakur(linear_problem(), tol=1e-12)
        assert np.max(np.abs(sol.values - 4.0 / 3.0)) <= 1e-9

    def test_fejer_toward_reference(self):
        # distance to the successive-approximation solution is nonincreasing
        _, trace = solve_thakur(default_problem(n=32), tol=1e-10)
        assert check_fejer_monotone(trace, slack=1e-12).holds()

    def test_order_chain_recorded(self):
        _, trace = solve_thakur(default_problem(n=32), tol=1e-10)
        assert all(r.order_chain_ok for r in trace.records)


class TestRefine:
    def test_default_kernel_consistency(self):
        value = refine_check(lambda n: default_problem(n=n), 64)
        assert value <= 1e-3

    def test_zero_kernel_exact_on_linear_start(self):
        # y0(t) = t interpolates exactly between grids
        value = refine_check(lambda n: zero_problem(n=n), 16)
        assert value <= 1e-12

    def test_constant_solution_exact(self):
        value = refine_check(lambda n: linear_problem(n=n), 16)
        assert value <= 1e-12

    def test_solver_name_checked(self):
        with pytest.raises(DomainError):
            refine_check(lambda n: zero_problem(n=n), 8, solver="newton")

    def test_thakur_route(self):
        value = refine_check(lambda n: default_problem(n=n), 16, solver="thakur")
        assert value <= 1e-2


class TestOperatorOrderFacts:
    def test_monotone_exactly(self):
        p = default_problem(n=32)
        rng = np.random.default_rng(11)
        space = p.space()
        rel = order_for(space)
        lo = space.sample(rng, 200)
        hi = lo + np.abs(rng.normal(size=lo.shape))
        m = as_mapping(p)
        tlo, thi = m.apply(lo), m.apply(hi)
        assert np.all(leq_many(rel, tlo, thi))

    def test_nonexpansive_on_ordered_pairs(self):
        p = default_problem(n=32)
        rng = np.random.default_rng(12)
        space = p.space()
        lo = space.sample(rng, 1000)
        hi = lo + np.abs(rng.normal(size=lo.shape))
        m = as_mapping(p)
        tlo, thi = m.apply(lo), m.apply(hi)
        assert np.all(
            space.dist(tlo, thi) <= space.dist(lo, hi) + 1e-10
        )

    def test_start_below_every_image(self):
        p = default_problem(n=32)
        rng = np.random.default_rng(13)
        xs = p.space().sample_in_ball(rng, 200, np.zeros(32), p.radius)
        m = as_mapping(p)
        txs = m.apply(xs)
        assert np.all(txs >= p.y0.values)


class TestProblemConstruction:
    def test_default_radius_has_margin(self):
        p = default_problem(n=32)
        assert p.radius == pytest.approx(
            containment_radius(p.grid, p.kernel, p.y0) + 1.0
        )

    def test_small_radius_rejected(self):
        grid = build_grid(16)
        y0 = GridFunction(grid, grid.nodes.copy())
        with pytest.raises(DomainError):
            make_problem(grid, default_kernel(), y0, radius=0.1)
