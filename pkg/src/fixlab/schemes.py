"""Iteration schemes over any space instance, with runtime diagnostics.

Two schemes ship.  The one-step averaged scheme ("mann") moves a fraction
a_n from the current point toward its image:

    x_{n+1} = combine(x_n, T x_n, a_n)

The three-stage scheme ("thakur") averages images of two auxiliary points:

    z_n     = combine(x_n, T x_n, c_n)
    y_n     = combine(z_n, T z_n, b_n)          (variant "tz", default)
    x_{n+1} = combine(T z_n, T y_n, a_n)

The "tx" variant replaces T z_n by T x_n in the y-stage; it is exposed for
comparison because the two forms appear interchangeably in the literature,
and the "tz" form is the one whose distance estimates go through.

Traces record every step; the check_* functions turn the convergence
facts the schemes are supposed to obey (Fejer monotonicity of distances to
a fixed point, residual decay, the order chain of iterates for monotone
maps) into replayable verdicts on a recorded trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DomainError,
    DomainEscapeError,
    NumericError,
    PreconditionError,
)
from .geodesic import Space
from .mappings import MappingSpec
from .order import OrderRel, leq
from .report import HOLDS, REFUTED, PropertyReport, Witness

MANN = "mann"
THAKUR = "thakur"

Coefficient = float | Sequence[float] | Callable[[int], float]


def coefficient_at(coef: Coefficient, n: int) -> float:
    """Value of a constant/tabulated/callable coefficient at step n (1-based)."""
    if callable(coef):
        value = float(coef(n))
    elif isinstance(coef, (int, float)):
        value = float(coef)
    else:
        seq = coef
        if n - 1 >= len(seq):
            raise DomainError(f"tabulated coefficient has no entry for n = {n}")
        value = float(seq[n - 1])
    if not 0.0 < value < 1.0:
        raise DomainError(f"coefficient at n = {n} is {value!r}, outside (0, 1)")
    return value


@dataclass
class SchemeParams:
    """Scheme kind, coefficient sequences, start point and stop rule.

    Coefficients live in the open interval (0, 1) for every queried step.
    ``stop_tol`` is compared against the residual dist(x_n, T x_n); None
    disables early stopping so exactly ``max_iter`` steps are recorded.
    ``p`` is an optional known fixed point used for distance diagnostics.
    Full points are stored for at most ``point_cap`` steps (grid-function
    points are large); scalar diagnostics are always kept.
    """

    kind: str
    x1: np.ndarray
    a: Coefficient = 0.85
    b: Coefficient = 0.65
    c: Coefficient = 0.45
    max_iter: int = 100
    stop_tol: float | None = None
    p: np.ndarray | None = None
    yn_variant: str = "tz"
    point_cap: int = 10_000

    def __post_init__(self):
        if self.kind not in (MANN, THAKUR):
            raise DomainError(f"unknown scheme kind {self.kind!r}")
        if self.max_iter < 1:
            raise DomainError("max_iter must be >= 1")
        if self.stop_tol is not None and self.stop_tol < 0.0:
            raise DomainError("stop_tol must be nonnegative")
        if self.yn_variant not in ("tz", "tx"):
            raise DomainError(f"yn_variant must be 'tz' or 'tx', got {self.yn_variant!r}")
        self.x1 = np.asarray(self.x1, dtype=float)
        if self.p is not None:
            self.p = np.asarray(self.p, dtype=float)


@dataclass
class StepRecord:
    """One iteration step; points may be None past the storage cap."""

    n: int
    x: np.ndarray | None
    residual: float
    z: np.ndarray | None = None
    y: np.ndarray | None = None
    dist_to_p: float | None = None
    order_chain_ok: bool | None = None


@dataclass
class IterationTrace:
    params: object
    records: list[StepRecord] = field(default_factory=list)
    termination: str = ""
    final: np.ndarray | None = None
    space: Space | None = None

    def residuals(self) -> np.ndarray:
        return np.array([r.residual for r in self.records])

    def dists_to_p(self) -> np.ndarray:
        return np.array(
            [np.nan if r.dist_to_p is None else r.dist_to_p for r in self.records]
        )

    def points(self) -> np.ndarray:
        missing = [r.n for r in self.records if r.x is None]
        if missing:
            raise PreconditionError(
                f"trace points beyond the storage cap (first missing at n = {missing[0]})"
            )
        return np.array([r.x for r in self.records])


def _apply_checked(space: Space, m: MappingSpec, x, n: int):
    tx = m.apply(x)
    if not np.all(np.isfinite(tx)):
        raise NumericError(f"non-finite image at step {n}", step=n)
    if not np.all(np.asarray(m.domain.contains(tx))):
        raise DomainEscapeError(
            f"{m.name}: image left the domain at step {n}", step=n, point=tx
        )
    return tx


def step_mann(space: Space, m: MappingSpec, x_n, a_n: float):
    """One averaged step combine(x_n, T x_n, a_n)."""
    x_n = np.asarray(x_n, dtype=float)
    tx = _apply_checked(space, m, x_n, 0)
    return space.combine(x_n, tx, a_n)


def step_thakur(space: Space, m: MappingSpec, x_n, a_n, b_n, c_n, yn_variant="tz"):
    """One three-stage step; returns (x_next, z_n, y_n)."""
    x_n = np.asarray(x_n, dtype=float)
    tx = _apply_checked(space, m, x_n, 0)
    z = space.combine(x_n, tx, c_n)
    tz = _apply_checked(space, m, z, 0)
    y = space.combine(z, tz if yn_variant == "tz" else tx, b_n)
    ty = _apply_checked(space, m, y, 0)
    return space.combine(tz, ty, a_n), z, y


def _chain_ok(kind, rel, ascending, x, tx, prev_x, prev_tx):
    """Scheme-appropriate order chain for monotone maps.

    Three-stage scheme, ascending start: x_n <= T x_n <= x_{n+1}.  The
    averaged scheme places x_{n+1} strictly between x_n and T x_n, so its
    chain is x_n <= x_{n+1} <= T x_n.  Descending starts use the duals.
    """
    lo, hi = (lambda u, v: leq(rel, u, v)), (lambda u, v: leq(rel, v, u))
    before = lo if ascending else hi
    ok = before(x, tx)
    if prev_x is not None:
        if kind == THAKUR:
            ok = ok and before(prev_tx, x)
        else:
            ok = ok and before(prev_x, x) and before(x, prev_tx)
    return bool(ok)


def run_scheme(
    space: Space, m: MappingSpec, params: SchemeParams, rel: OrderRel | None = None
) -> IterationTrace:
    """Iterate the chosen scheme, recording a full diagnostic trace.

    Stops when the residual dist(x_n, T x_n) reaches ``stop_tol`` (if set)
    or after ``max_iter`` recorded steps.  When ``rel`` is given and the
    start is order-related to its image, each record carries whether the
    monotone order chain held at that step.
    """
    x = np.asarray(params.x1, dtype=float)
    space.check_points(x)
    if not np.all(np.asarray(m.domain.contains(x))):
        raise DomainError(f"start point {x!r} outside the domain of {m.name}")

    ascending = None
    if rel is not None and rel.kind != "none":
        tx1 = m.apply(x)
        if leq(rel, x, tx1):
            ascending = True
        elif leq(rel, tx1, x):
            ascending = False

    trace = IterationTrace(params=params, space=space)
    prev_x = prev_tx = None
    for n in range(1, params.max_iter + 1):
        tx = _apply_checked(space, m, x, n)
        residual = float(space.dist(x, tx))
        if not np.isfinite(residual):
            raise NumericError(f"non-finite residual at step {n}", step=n)
        record = StepRecord(
            n=n,
            x=x.copy() if n <= params.point_cap else None,
            residual=residual,
        )
        if params.p is not None:
            record.dist_to_p = float(space.dist(x, params.p))
        if ascending is not None:
            record.order_chain_ok = _chain_ok(
                params.kind, rel, ascending, x, tx, prev_x, prev_tx
            )
        trace.records.append(record)

        if params.stop_tol is not None and residual <= params.stop_tol:
            trace.termination = "tol-reached"
            break
        if n == params.max_iter:
            trace.termination = "max-iter"
            break

        if params.kind == MANN:
            x_next = space.combine(x, tx, coefficient_at(params.a, n))
        else:
            a_n = coefficient_at(params.a, n)
            b_n = coefficient_at(params.b, n)
            c_n = coefficient_at(params.c, n)
            z = space.combine(x, tx, c_n)
            tz = _apply_checked(space, m, z, n)
            y = space.combine(z, tz if params.yn_variant == "tz" else tx, b_n)
            ty = _apply_checked(space, m, y, n)
            x_next = space.combine(tz, ty, a_n)
            if n <= params.point_cap:
                record.z = z.copy()
                record.y = y.copy()
        prev_x, prev_tx = x, tx
        x = x_next

    trace.final = x.copy()
    return trace


# ----------------------------------------------------------------------
# diagnostics on recorded traces
# ----------------------------------------------------------------------


def check_fejer_monotone(trace: IterationTrace, slack: float = 1e-12) -> PropertyReport:
    """Distances to the known fixed point must be nonincreasing."""
    dists = trace.dists_to_p()
    if np.any(np.isnan(dists)):
        raise PreconditionError("trace has no recorded dist_to_p; pass p in SchemeParams")
    diffs = dists[:-1] - dists[1:]
    if diffs.size == 0:
        return PropertyReport("fejer-monotone", HOLDS, len(dists), 0.0, [])
    k = int(np.argmin(diffs))
    witnesses = []
    verdict = HOLDS
    if diffs[k] < -slack:
        verdict = REFUTED
        first = int(np.nonzero(diffs < -slack)[0][0])
        witnesses.append(
            Witness(
                inputs={"n": first + 1},
                quantities={
                    "dist_n": float(dists[first]),
                    "dist_next": float(dists[first + 1]),
                },
            )
        )
    return PropertyReport(
        name="fejer-monotone",
        verdict=verdict,
        samples_checked=int(diffs.size),
        worst_margin=float(diffs[k]),
        witnesses=witnesses,
    )


def check_residual_decay(trace: IterationTrace) -> PropertyReport:
    """Residuals must reach the stop tolerance (if one fired) and decay.

    The liminf proxy compares the best residual of the last quarter of the
    trace against the best of the first quarter.
    """
    res = trace.residuals()
    params = trace.params
    stop_tol = getattr(params, "stop_tol", None)
    if stop_tol is None and isinstance(params, dict):
        stop_tol = params.get("tol")
    violations = []
    if trace.termination == "tol-reached" and stop_tol is not None:
        if not res.min() <= stop_tol:
            violations.append(("stop-tol", float(res.min())))
    q = max(1, len(res) // 4)
    head, tail = float(res[:q].min()), float(res[-q:].min())
    if tail > head:
        violations.append(("liminf-proxy", tail - head))
    witnesses = [
        Witness(inputs={"which": name}, quantities={"amount": amt})
        for name, amt in violations
    ]
    return PropertyReport(
        name="residual-decay",
        verdict=HOLDS if not violations else REFUTED,
        samples_checked=len(res),
        worst_margin=float(head - tail),
        witnesses=witnesses,
    )


def dist_to_fixed_set(trace: IterationTrace, fixed_points) -> np.ndarray:
    """Per-step minimum distance from the iterate to a finite fixed-point set."""
    f = np.atleast_2d(np.asarray(fixed_points, dtype=float))
    if f.size == 0:
        raise PreconditionError("fixed-point set must be nonempty")
    if trace.space is None:
        raise PreconditionError("trace carries no space handle")
    pts = trace.points()
    return np.min(trace.space.dist(pts[:, None, :], f[None, :, :]), axis=1)


def asymptotic_radius(tail, x, space: Space) -> float:
    """Finite-sample limsup proxy: max distance from x to the tail window."""
    tail = np.atleast_2d(np.asarray(tail, dtype=float))
    if tail.size == 0:
        raise PreconditionError("tail must be nonempty")
    return float(np.max(space.dist(tail, np.asarray(x, dtype=float))))


def asymptotic_center_estimate(tail, candidates, space: Space):
    """Candidate minimising the asymptotic radius over the tail window.

    Ties break to the first candidate in the given order; returns the
    winning point and its radius.
    """
    candidates = np.atleast_2d(np.asarray(candidates, dtype=float))
    if candidates.size == 0:
        raise PreconditionError("candidates must be nonempty")
    radii = np.array([asymptotic_radius(tail, c, space) for c in candidates])
    k = int(np.argmin(radii))
    return candidates[k], float(radii[k])
