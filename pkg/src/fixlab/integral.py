"""Second-kind integral equations on [0, 1], discretised by quadrature.

The continuous problem is to find x with

    x(t) = y0(t) + integral_0^1 b(t, z, x(z)) dz .

Nystrom discretisation replaces the integral by a weighted sum over
quadrature nodes, turning the right-hand side into a self-map T of grid
functions:

    (T x)_i = y0_i + sum_j w_j * b(t_i, t_j, x_j) .

For kernels that are nonnegative, monotone and 1-Lipschitz in the state
argument and obey a growth bound with constant M < 1/2, T maps the ball
C = {||x|| <= r} into itself (for r >= 2(||y0|| + ||int f||)), is monotone
for the pointwise order and nonexpansive on ordered pairs; those facts are
what check_kernel_conditions samples.  Two solvers are provided: plain
successive approximation from y0 (whose iterates increase pointwise), and
the three-stage scheme run on the grid space, with the successive
approximation solution as reference.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DomainError,
    InvariantError,
    NonConvergenceError,
    NumericError,
    SpaceMismatchError,
)
from .geodesic import Space, l2_grid
from .mappings import MappingSpec, NormBall
from .report import HOLDS, REFUTED, PropertyReport, Witness
from .schemes import THAKUR, IterationTrace, SchemeParams, StepRecord, run_scheme
from .order import order_for

TRAPEZOID = "trapezoid"
GAUSS_LEGENDRE = "gauss-legendre"


# ----------------------------------------------------------------------
# grids and grid functions
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Nodes in [0, 1] with positive weights summing to 1."""

    nodes: np.ndarray
    weights: np.ndarray
    rule: str

    @property
    def n(self) -> int:
        return self.nodes.size

    def space(self) -> Space:
        return l2_grid(self.weights)


def build_grid(n: int, rule: str = TRAPEZOID) -> QuadratureGrid:
    """Composite trapezoid or Gauss-Legendre rule on [0, 1], weights normalised."""
    if n < 2:
        raise DomainError("grid needs at least 2 nodes")
    if rule == TRAPEZOID:
        nodes = np.linspace(0.0, 1.0, n)
        weights = np.full(n, 1.0 / (n - 1))
        weights[0] *= 0.5
        weights[-1] *= 0.5
    elif rule == GAUSS_LEGENDRE:
        t, w = np.polynomial.legendre.leggauss(n)
        nodes = 0.5 * (t + 1.0)
        weights = 0.5 * w
    else:
        raise DomainError(f"unknown quadrature rule {rule!r}")
    weights = weights / weights.sum()
    return QuadratureGrid(nodes=nodes, weights=weights, rule=rule)


@dataclass(eq=False)
class GridFunction:
    """Values over one grid's nodes; bound to exactly that grid."""

    grid: QuadratureGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.nodes.shape:
            raise SpaceMismatchError(
                f"values of length {self.values.size} on a grid of {self.grid.n} nodes"
            )
        if not np.all(np.isfinite(self.values)):
            raise DomainError("grid function has non-finite values")


def _same_grid(a: QuadratureGrid, b: QuadratureGrid) -> bool:
    return a is b or (a.n == b.n and np.array_equal(a.nodes, b.nodes))


def l2_norm(x: GridFunction) -> float:
    """Quadrature-weighted root-sum-square; the grid space's norm."""
    return float(np.sqrt(np.sum(x.grid.weights * x.values * x.values)))


# ----------------------------------------------------------------------
# kernels and problems
# ----------------------------------------------------------------------


@dataclass(eq=False)
class KernelSpec:
    """Pointwise kernel b(t, z, s), growth envelope f(t, z) and constant M.

    Valid kernels keep M strictly below 1/2; the dataclass itself stays
    permissive so deliberately broken fixtures can be built and reported by
    check_kernel_conditions instead of failing at construction.
    """

    name: str
    b: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    f: Callable[[np.ndarray, np.ndarray], np.ndarray]
    growth_constant: float
    description: str = ""


def default_kernel(m: float = 0.4, f_scale: float = 1.0) -> KernelSpec:
    """Separable product term plus a saturating nonlinearity.

    b(t, z, s) = f_scale*t*z + m*s/(1+s) on s >= 0 (clamped below 0); the
    saturation keeps the state term below m, so f = f_scale*t*z + m is a
    growth envelope for any state.  Monotone and 1-Lipschitz in s for
    m < 1, with no closed-form solution, so the solvers are exercised
    honestly.
    """

    def b(t, z, s):
        sp = np.maximum(s, 0.0)
        return f_scale * t * z + m * (sp / (1.0 + sp))

    def f(t, z):
        return f_scale * t * z + m

    return KernelSpec(
        name="default",
        b=b,
        f=f,
        growth_constant=m,
        description=f"{f_scale}*t*z + {m}*s/(1+s)",
    )


def linear_kernel(m: float = 0.25) -> KernelSpec:
    """b(t, z, s) = m*s with f = 0.

    With constant y0 = 1 the solution is the constant 1/(1-m) (geometric
    series), which makes this the closed-form oracle instance.  Slopes
    m > 1 deliberately violate the Lipschitz and growth conditions and
    serve as negative fixtures.
    """

    def b(t, z, s):
        return m * (s + 0.0 * t * z)

    def f(t, z):
        return 0.0 * t * z

    return KernelSpec(name="linear", b=b, f=f, growth_constant=m, description=f"{m}*s")


def zero_kernel() -> KernelSpec:
    def b(t, z, s):
        return 0.0 * (t + z + s)

    def f(t, z):
        return 0.0 * (t + z)

    return KernelSpec(name="zero", b=b, f=f, growth_constant=0.0, description="0")


KERNELS: dict[str, Callable[..., KernelSpec]] = {
    "default": default_kernel,
    "linear": linear_kernel,
    "zero": zero_kernel,
}


@dataclass(eq=False)
class IntegralProblem:
    """Grid, kernel and start function, plus the invariant ball radius."""

    grid: QuadratureGrid
    kernel: KernelSpec
    y0: GridFunction
    radius: float

    def space(self) -> Space:
        return self.grid.space()


def containment_radius(grid: QuadratureGrid, kernel: KernelSpec, y0: GridFunction) -> float:
    """Smallest ball radius the growth bound certifies as invariant.

    2*(||y0|| + ||int f(., z) dz||): any r at least this large gives
    T(C) subset of C.
    """
    int_f = kernel.f(grid.nodes[:, None], grid.nodes[None, :]) @ grid.weights
    return 2.0 * (l2_norm(y0) + l2_norm(GridFunction(grid, int_f)))


def make_problem(
    grid: QuadratureGrid,
    kernel: KernelSpec,
    y0: GridFunction,
    radius: float | None = None,
) -> IntegralProblem:
    """Assemble a problem; default radius is the certified one plus 1."""
    needed = containment_radius(grid, kernel, y0)
    if radius is None:
        radius = needed + 1.0
    elif radius < needed:
        raise DomainError(
            f"radius {radius!r} below the containment requirement {needed!r}"
        )
    return IntegralProblem(grid=grid, kernel=kernel, y0=y0, radius=float(radius))


def default_problem(n: int = 64, rule: str = TRAPEZOID) -> IntegralProblem:
    """The shipped default: saturating kernel, y0(t) = t."""
    grid = build_grid(n, rule)
    return make_problem(grid, default_kernel(), GridFunction(grid, grid.nodes.copy()))


# ----------------------------------------------------------------------
# operator
# ----------------------------------------------------------------------


def apply_operator(problem: IntegralProblem, x: GridFunction) -> GridFunction:
    """(T x)_i = y0_i + sum_j w_j b(t_i, t_j, x_j)."""
    if not _same_grid(problem.grid, x.grid):
        raise SpaceMismatchError("grid function bound to a different grid")
    t = problem.grid.nodes
    bmat = problem.kernel.b(t[:, None], t[None, :], x.values[None, :])
    if not np.all(np.isfinite(bmat)):
        raise NumericError("non-finite kernel evaluation")
    return GridFunction(problem.grid, problem.y0.values + bmat @ problem.grid.weights)


def _apply_values(problem: IntegralProblem, values: np.ndarray) -> np.ndarray:
    """Operator on raw value arrays, batched over leading axes."""
    t = problem.grid.nodes
    vals = np.asarray(values, dtype=float)
    if vals.ndim == 1:
        bmat = problem.kernel.b(t[:, None], t[None, :], vals[None, :])
        return problem.y0.values + bmat @ problem.grid.weights
    return np.stack([_apply_values(problem, row) for row in vals])


def as_mapping(problem: IntegralProblem) -> MappingSpec:
    """The discretised operator packaged for the mapping/scheme machinery."""
    space = problem.space()
    return MappingSpec(
        name=f"integral-{problem.kernel.name}",
        space=space,
        domain=NormBall(space=space, radius=problem.radius),
        apply=lambda v: _apply_values(problem, v),
        fixed_points=None,
        declared={"monotone": True},
    )


# ----------------------------------------------------------------------
# hypothesis checks
# ----------------------------------------------------------------------


def _sample_state_functions(problem: IntegralProblem, rng, count: int) -> np.ndarray:
    """Grid functions in C with varied shapes: smooth, rough and spiky."""
    n = problem.grid.n
    out = []
    for _ in range(count):
        style = rng.integers(3)
        if style == 0:
            v = rng.normal(size=n)
        elif style == 1:
            v = np.abs(rng.normal(size=n))
        else:
            v = np.zeros(n)
            v[rng.integers(n)] = rng.random() * 5.0
        norm = np.sqrt(np.sum(problem.grid.weights * v * v))
        if norm > 0:
            v *= rng.random() * problem.radius / norm
        out.append(v)
    return np.asarray(out)


def check_kernel_conditions(
    problem: IntegralProblem, sample_count: int = 400, rng_seed: int = 42
) -> list[PropertyReport]:
    """Sampled verification of the kernel/operator hypotheses.

    Kernel-level: nonnegativity, a nonnegative monotone step in the state
    argument, the 1-Lipschitz step bound b(t,z,v) - b(t,z,u) <= v - u
    (a pointwise strengthening that survives quadrature), and the growth
    bound in integrated form: |sum_j w_j b(t_i, t_j, x_j)| bounded by
    sum_j w_j f(t_i, t_j) + M ||x|| at every node.  Operator-level: the
    ball C stays invariant, the operator is monotone for the pointwise
    order, nonexpansive on ordered pairs, and dominates y0.
    """
    rng = np.random.default_rng(rng_seed)
    grid = problem.grid
    kern = problem.kernel
    reports = []

    # growth-constant precondition
    m_margin = 0.5 - kern.growth_constant
    reports.append(
        PropertyReport(
            name="growth-constant-below-half",
            verdict=HOLDS if m_margin > 0.0 else REFUTED,
            samples_checked=1,
            worst_margin=float(m_margin),
            witnesses=[]
            if m_margin > 0.0
            else [Witness(inputs={}, quantities={"M": kern.growth_constant})],
        )
    )

    # kernel-level samples
    t = rng.random(sample_count)
    z = rng.random(sample_count)
    s = rng.random(sample_count) * 2.0 * problem.radius
    u = rng.random(sample_count) * problem.radius
    v = u + rng.random(sample_count) * problem.radius

    def scalar_report(name, margins, inputs, slack=1e-12):
        margins = np.asarray(margins, dtype=float)
        k = int(np.argmin(margins))
        verdict = HOLDS if margins[k] >= -slack else REFUTED
        witness = Witness(
            inputs={key: float(val[k]) for key, val in inputs.items()},
            quantities={"margin": float(margins[k])},
        )
        return PropertyReport(name, verdict, margins.size, float(margins[k]), [witness])

    reports.append(
        scalar_report("kernel-nonnegative", kern.b(t, z, s), {"t": t, "z": z, "s": s})
    )
    step = kern.b(t, z, v) - kern.b(t, z, u)
    reports.append(
        scalar_report("kernel-monotone-step", step, {"t": t, "z": z, "u": u, "v": v})
    )
    reports.append(
        scalar_report(
            "kernel-lipschitz-step", (v - u) - step, {"t": t, "z": z, "u": u, "v": v}
        )
    )

    # growth bound, integrated over z at every node
    xs = _sample_state_functions(problem, rng, max(50, sample_count // 8))
    f_int = kern.f(grid.nodes[:, None], grid.nodes[None, :]) @ grid.weights
    worst = np.inf
    worst_witness = None
    for vals in xs:
        lhs = np.abs(
            kern.b(grid.nodes[:, None], grid.nodes[None, :], vals[None, :])
            @ grid.weights
        )
        norm = float(np.sqrt(np.sum(grid.weights * vals * vals)))
        margin = f_int + kern.growth_constant * norm - lhs
        k = int(np.argmin(margin))
        if margin[k] < worst:
            worst = float(margin[k])
            worst_witness = Witness(
                inputs={"x": vals, "node": float(grid.nodes[k])},
                quantities={"margin": float(margin[k]), "norm": norm},
            )
    reports.append(
        PropertyReport(
            name="growth-bound-integrated",
            verdict=HOLDS if worst >= -1e-10 else REFUTED,
            samples_checked=len(xs),
            worst_margin=worst,
            witnesses=[worst_witness] if worst_witness else [],
        )
    )

    # operator-level facts
    space = problem.space()
    xs = _sample_state_functions(problem, rng, max(50, sample_count // 8))
    txs = _apply_values(problem, xs)
    norms_tx = np.sqrt(np.sum(grid.weights * txs * txs, axis=-1))
    reports.append(
        scalar_report(
            "operator-self-map",
            problem.radius - norms_tx,
            {"norm_Tx": norms_tx},
            slack=1e-10,
        )
    )

    lo = _sample_state_functions(problem, rng, max(32, sample_count // 12))
    hi = lo + np.abs(rng.normal(size=lo.shape))
    tlo, thi = _apply_values(problem, lo), _apply_values(problem, hi)
    mono_depth = np.min(thi - tlo, axis=-1)
    k = int(np.argmin(mono_depth))
    reports.append(
        PropertyReport(
            name="operator-monotone",
            verdict=HOLDS if mono_depth[k] >= 0.0 else REFUTED,
            samples_checked=len(lo),
            worst_margin=float(mono_depth[k]),
            witnesses=[
                Witness(
                    inputs={"u": lo[k], "v": hi[k]},
                    quantities={"min_pointwise_gap": float(mono_depth[k])},
                )
            ],
        )
    )

    gap_in = np.sqrt(np.sum(grid.weights * (hi - lo) ** 2, axis=-1))
    gap_out = np.sqrt(np.sum(grid.weights * (thi - tlo) ** 2, axis=-1))
    reports.append(
        scalar_report(
            "operator-nonexpansive-ordered",
            gap_in - gap_out,
            {"gap_in": gap_in, "gap_out": gap_out},
            slack=1e-10,
        )
    )

    # y0 <= Tx needs kernel nonnegativity, which is declared on nonnegative
    # states; sample x from the cone part of C accordingly
    xs_pos = np.abs(_sample_state_functions(problem, rng, max(50, sample_count // 8)))
    txs_pos = _apply_values(problem, xs_pos)
    start_depth = np.min(txs_pos - problem.y0.values, axis=-1)
    k = int(np.argmin(start_depth))
    reports.append(
        PropertyReport(
            name="start-below-image",
            verdict=HOLDS if start_depth[k] >= 0.0 else REFUTED,
            samples_checked=len(txs_pos),
            worst_margin=float(start_depth[k]),
            witnesses=[Witness(inputs={"x": xs_pos[k]}, quantities={})],
        )
    )
    return reports


# ----------------------------------------------------------------------
# solvers
# ----------------------------------------------------------------------


def solve_picard(
    problem: IntegralProblem, tol: float = 1e-10, max_iter: int = 200
) -> tuple[GridFunction, IterationTrace]:
    """Successive approximation x_{k+1} = T x_k from x_1 = y0.

    Asserts at every step that the iterates increase pointwise (the
    signature behaviour under the kernel hypotheses; a violation signals a
    kernel that does not meet them) and stay inside the invariant ball.
    Raises NonConvergenceError with the last residual if the step budget
    runs out.
    """
    grid = problem.grid
    x = problem.y0.values.copy()
    trace = IterationTrace(
        params={"scheme": "picard", "tol": tol, "max_iter": max_iter},
        space=problem.space(),
    )
    for k in range(1, max_iter + 1):
        nxt = _apply_values(problem, x)
        if not np.all(np.isfinite(nxt)):
            raise NumericError(f"non-finite iterate at step {k}", step=k)
        if np.any(nxt < x):
            j = int(np.argmin(nxt - x))
            raise InvariantError(
                f"iterate decreased at node {j} on step {k}; kernel does not "
                "meet the monotonicity hypotheses",
                step=k,
            )
        norm = float(np.sqrt(np.sum(grid.weights * nxt * nxt)))
        if norm > problem.radius + 1e-9:
            raise InvariantError(
                f"iterate left the invariant ball at step {k} (norm {norm!r})",
                step=k,
            )
        residual = float(np.sqrt(np.sum(grid.weights * (nxt - x) ** 2)))
        trace.records.append(
            StepRecord(n=k, x=x.copy(), residual=residual, order_chain_ok=True)
        )
        if residual <= tol:
            trace.termination = "tol-reached"
            trace.final = x.copy()
            return GridFunction(grid, x), trace
        x = nxt
    raise NonConvergenceError(
        f"successive approximation did not reach {tol!r} in {max_iter} steps",
        step=max_iter,
        residual=float(trace.records[-1].residual),
    )


def solve_thakur(
    problem: IntegralProblem,
    params: SchemeParams | None = None,
    tol: float = 1e-10,
) -> tuple[GridFunction, IterationTrace]:
    """Three-stage scheme on the grid space, started at y0.

    The successive-approximation solution is computed first and recorded as
    the trace's reference point, so Fejer diagnostics apply; the two
    solvers reach the same fixed point by independent routes.
    """
    reference, _ = solve_picard(problem, tol=min(tol, 1e-10), max_iter=500)
    space = problem.space()
    mapping = as_mapping(problem)
    if params is None:
        params = SchemeParams(
            kind=THAKUR,
            x1=problem.y0.values.copy(),
            max_iter=500,
            stop_tol=tol,
        )
    if params.stop_tol is None:
        params.stop_tol = tol
    if params.p is None:
        params.p = reference.values.copy()
    trace = run_scheme(space, mapping, params, rel=order_for(space))
    if trace.termination != "tol-reached":
        raise NonConvergenceError(
            f"three-stage scheme did not reach {tol!r} in {params.max_iter} steps",
            step=params.max_iter,
            residual=float(trace.records[-1].residual),
        )
    return GridFunction(problem.grid, trace.final.copy()), trace


def refine_check(
    problem_factory: Callable[[int], IntegralProblem],
    n: int,
    solver: str = "picard",
    tol: float = 1e-10,
) -> float:
    """Grid-norm gap between solutions at n and 2n nodes.

    The coarse solution is linearly interpolated to the fine nodes and the
    difference measured in the fine grid's norm; consistency of the
    discretisation makes this shrink as n grows.
    """
    if solver not in ("picard", "thakur"):
        raise DomainError(f"unknown solver {solver!r}")
    solve = solve_picard if solver == "picard" else solve_thakur
    coarse_problem = problem_factory(n)
    fine_problem = problem_factory(2 * n)
    coarse, _ = solve(coarse_problem, tol=tol)
    fine, _ = solve(fine_problem, tol=tol)
    interp = np.interp(
        fine_problem.grid.nodes, coarse_problem.grid.nodes, coarse.values
    )
    diff = GridFunction(fine_problem.grid, interp - fine.values)
    return l2_norm(diff)
