"""Self-map catalog and sampling-based verifiers for mapping classes.

Every checker takes explicit sample sets, evaluates the defining
inequality of one mapping class on them and returns a PropertyReport.
Verdicts are `holds-on-samples`, never "proved"; refutations carry
replayable witnesses.

Margins follow the rhs - lhs convention of the report module, so for a
bound lhs <= rhs the worst margin is the smallest slack seen.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, InvariantError, PreconditionError, UnsupportedError
from .geodesic import ORDER_COORDINATEWISE, ORDER_POINTWISE, Space, euclidean
from .order import OrderRel, comparable, leq_many, order_for
from .report import HOLDS, REFUTED, PropertyReport, Witness

FIXED_POINT_TOL = 1e-12
DEFAULT_SLACK = 1e-12


# ----------------------------------------------------------------------
# domains
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Box:
    """Axis-aligned box; an interval when dim == 1."""

    lo: np.ndarray
    hi: np.ndarray

    def contains(self, x, slack: float = 1e-9) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.all((x >= self.lo - slack) & (x <= self.hi + slack), axis=-1)

    def sample(self, rng, n: int) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, size=(n, len(self.lo)))


@dataclass(frozen=True, eq=False)
class NormBall:
    """Ball {x : dist(x, center) <= radius} in the space's own metric."""

    space: Space
    radius: float
    center: np.ndarray | None = None

    def _center(self) -> np.ndarray:
        return np.zeros(self.space.dim) if self.center is None else self.center

    def contains(self, x, slack: float = 1e-9) -> np.ndarray:
        d = self.space.dist(np.asarray(x, dtype=float), self._center())
        return np.asarray(d) <= self.radius + slack

    def sample(self, rng, n: int) -> np.ndarray:
        return self.space.sample_in_ball(rng, n, self._center(), self.radius)


def interval(lo: float, hi: float) -> Box:
    return Box(lo=np.array([float(lo)]), hi=np.array([float(hi)]))


# ----------------------------------------------------------------------
# mapping specification
# ----------------------------------------------------------------------


@dataclass(eq=False)
class MappingSpec:
    """A self-map of a domain with its declared fixed points and classes.

    ``apply`` must be vectorised: it maps arrays of shape (..., dim) to the
    same shape.  ``declared`` maps check names to the outcome the catalog
    expects from the corresponding checker (True/False, or a parameter such
    as the alpha of the three-term bound or a gauge name); checks not
    present are unclassified.
    """

    name: str
    space: Space
    domain: Box | NormBall
    apply: Callable[[np.ndarray], np.ndarray]
    fixed_points: np.ndarray | None = None
    declared: dict = field(default_factory=dict)

    def rel(self) -> OrderRel:
        return order_for(self.space)


def validate_mapping(m: MappingSpec, sample_count: int = 256, rng_seed: int = 0) -> None:
    """Spot-check the MappingSpec invariants; raises InvariantError.

    Sampled points (plus box corners) must stay inside the domain under
    ``apply``, and every declared fixed point must be fixed to 1e-12.
    """
    rng = np.random.default_rng(rng_seed)
    pts = m.domain.sample(rng, sample_count)
    if isinstance(m.domain, Box):
        pts = np.concatenate([pts, m.domain.lo[None, :], m.domain.hi[None, :]])
    image = m.apply(pts)
    ok = m.domain.contains(image, slack=1e-12)
    if not np.all(ok):
        bad = pts[~np.asarray(ok)][0]
        raise InvariantError(f"{m.name}: apply leaves the domain at {bad!r}")
    if m.fixed_points is not None:
        for p in np.atleast_2d(m.fixed_points):
            res = m.space.dist(p, m.apply(p))
            if res > FIXED_POINT_TOL:
                raise InvariantError(
                    f"{m.name}: declared fixed point {p!r} has residual {res!r}"
                )


# ----------------------------------------------------------------------
# catalog
# ----------------------------------------------------------------------

# condition-(I) gauges addressable from declarations and the CLI
GAUGES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "half": lambda r: 0.5 * r,
    "identity": lambda r: r,
}


def jump_map() -> MappingSpec:
    """Benchmark map on [0, 4]: zero everywhere except a jump to 2 at x = 4.

    Its unique fixed point is 0.  The half-residual trigger exempts exactly
    the pairs that would break plain nonexpansiveness, so the map fails the
    Suzuki condition yet satisfies the three-term alpha bound for
    alpha >= 1/3 on comparable pairs.
    """
    return MappingSpec(
        name="jump",
        space=euclidean(1),
        domain=interval(0.0, 4.0),
        apply=lambda x: np.where(x == 4.0, 2.0, 0.0),
        fixed_points=np.array([[0.0]]),
        declared={
            "condition-C": False,
            "generalized-alpha": 1.0 / 3.0,
            "quasi-nonexpansive": True,
            "residual-image-bound": True,
            "condition-I": "half",
        },
    )


def toward_one() -> MappingSpec:
    """T(x) = (x + 1)/2 on [0, 1]; increasing affine contraction toward 1."""
    return MappingSpec(
        name="toward-one",
        space=euclidean(1),
        domain=interval(0.0, 1.0),
        apply=lambda x: 0.5 * (x + 1.0),
        fixed_points=np.array([[1.0]]),
        declared={
            "monotone": True,
            "condition-C": True,
            "generalized-alpha": 0.0,
            "quasi-nonexpansive": True,
            "residual-image-bound": True,
            "condition-I": "half",
        },
    )


def halving() -> MappingSpec:
    """T(x) = x/2 on [0, 1]; contraction with fixed point 0."""
    return MappingSpec(
        name="halve",
        space=euclidean(1),
        domain=interval(0.0, 1.0),
        apply=lambda x: 0.5 * x,
        fixed_points=np.array([[0.0]]),
        declared={
            "monotone": True,
            "condition-C": True,
            "generalized-alpha": 0.0,
            "quasi-nonexpansive": True,
            "residual-image-bound": True,
            "condition-I": "half",
        },
    )


def identity_map() -> MappingSpec:
    """T(x) = x on [0, 1]; every point fixed (declared as the 0.01 grid)."""
    grid = np.linspace(0.0, 1.0, 101)[:, None]
    return MappingSpec(
        name="identity",
        space=euclidean(1),
        domain=interval(0.0, 1.0),
        apply=lambda x: x,
        fixed_points=grid,
        declared={
            "monotone": True,
            "condition-C": True,
            "generalized-alpha": 0.0,
            "quasi-nonexpansive": True,
            "residual-image-bound": True,
            "condition-I": "identity",
        },
    )


def reflection() -> MappingSpec:
    """T(x) = 1 - x on [0, 1]; an isometry, decreasing, fixed point 1/2."""
    return MappingSpec(
        name="reflect",
        space=euclidean(1),
        domain=interval(0.0, 1.0),
        apply=lambda x: 1.0 - x,
        fixed_points=np.array([[0.5]]),
        declared={
            "monotone": False,
            "condition-C": True,
            "quasi-nonexpansive": True,
        },
    )


def doubling_clipped() -> MappingSpec:
    """T(x) = min(2x, 1) on [0, 1]; expands near 0, so not quasi-nonexpansive."""
    return MappingSpec(
        name="double-clip",
        space=euclidean(1),
        domain=interval(0.0, 1.0),
        apply=lambda x: np.minimum(2.0 * x, 1.0),
        fixed_points=np.array([[0.0], [1.0]]),
        declared={
            "monotone": True,
            "condition-C": False,
            "quasi-nonexpansive": False,
        },
    )


CATALOG: dict[str, Callable[[], MappingSpec]] = {
    "jump": jump_map,
    "toward-one": toward_one,
    "halve": halving,
    "identity": identity_map,
    "reflect": reflection,
    "double-clip": doubling_clipped,
}


def from_catalog(name: str) -> MappingSpec:
    try:
        return CATALOG[name]()
    except KeyError:
        raise DomainError(f"unknown mapping {name!r}; known: {sorted(CATALOG)}") from None


# ----------------------------------------------------------------------
# piecewise-polynomial custom maps (config-file surface)
# ----------------------------------------------------------------------


def parse_pieces(text: str) -> list[tuple[float, float, list[float]]]:
    """Parse 'lo:hi:c0,c1,... ; lo:hi:...' into piece triples.

    Each piece applies on [lo, hi) (the last piece is closed) and evaluates
    the polynomial c0 + c1*x + c2*x^2 + ...
    """
    pieces = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 3:
            raise DomainError(f"bad piece {chunk!r}; expected lo:hi:c0,c1,...")
        lo, hi = float(parts[0]), float(parts[1])
        coeffs = [float(c) for c in parts[2].split(",") if c.strip()]
        if hi <= lo or not coeffs:
            raise DomainError(f"bad piece {chunk!r}")
        pieces.append((lo, hi, coeffs))
    if not pieces:
        raise DomainError("empty piecewise-polynomial spec")
    return sorted(pieces, key=lambda p: p[0])


def piecewise_poly_map(
    domain_lo: float,
    domain_hi: float,
    pieces: list[tuple[float, float, list[float]]],
    fixed_points=None,
    name: str = "custom",
) -> MappingSpec:
    """Scalar map assembled from polynomial pieces on [domain_lo, domain_hi]."""

    def apply(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        done = np.zeros(x.shape, dtype=bool)
        for i, (lo, hi, coeffs) in enumerate(pieces):
            last = i == len(pieces) - 1
            mask = (x >= lo) & ((x <= hi) if last else (x < hi)) & ~done
            val = np.zeros_like(x)
            for c in reversed(coeffs):
                val = val * x + c
            out = np.where(mask, val, out)
            done |= mask
        return out

    fixed = None if fixed_points is None else np.atleast_2d(np.asarray(fixed_points, float))
    return MappingSpec(
        name=name,
        space=euclidean(1),
        domain=interval(domain_lo, domain_hi),
        apply=apply,
        fixed_points=fixed,
    )


# ----------------------------------------------------------------------
# sample-set builders
# ----------------------------------------------------------------------


def scalar_grid(lo: float, hi: float, step: float = 0.01, include=()) -> np.ndarray:
    """Regular grid on [lo, hi] as (m, 1) points, with forced extra points.

    The endpoints are always present; maps whose behaviour concentrates at
    a boundary point (like the jump map at 4) are exercised there.
    """
    count = int(round((hi - lo) / step)) + 1
    pts = np.linspace(lo, hi, count)
    if len(include):
        pts = np.unique(np.concatenate([pts, np.asarray(include, dtype=float)]))
    return pts[:, None]


def all_pairs(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full ordered Cartesian square of a point set."""
    m = len(points)
    i, j = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    return points[i.ravel()], points[j.ravel()]


def comparable_pairs(rel: OrderRel, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All pairs (x, y) from the set with x <= y under the relation."""
    x, y = all_pairs(points)
    mask = leq_many(rel, x, y)
    return x[mask], y[mask]


def sample_comparable_pairs(
    m: MappingSpec, rel: OrderRel, count: int, rng, scale: float = 0.5
) -> tuple[np.ndarray, np.ndarray]:
    """Random pairs x <= y inside the domain (x sampled, y = x + noise)."""
    xs, ys = [], []
    while len(xs) < count:
        x = m.domain.sample(rng, count)
        y = x + np.abs(rng.normal(scale=scale, size=x.shape))
        keep = np.asarray(m.domain.contains(y, slack=0.0))
        xs.extend(x[keep])
        ys.extend(y[keep])
    return np.asarray(xs[:count]), np.asarray(ys[:count])


# ----------------------------------------------------------------------
# checkers
# ----------------------------------------------------------------------


def _report(name, margins, pairs_stuff, slack, samples=None, extra=None):
    """Assemble a PropertyReport from per-sample margins."""
    margins = np.asarray(margins, dtype=float)
    n = margins.size if samples is None else samples
    if margins.size == 0:
        return PropertyReport(name, HOLDS, 0, np.inf, [])
    k = int(np.argmin(margins))
    inputs = {key: val[k] for key, val in pairs_stuff.items()}
    quantities = {"margin": float(margins[k])}
    if extra:
        quantities.update({key: float(val[k]) for key, val in extra.items()})
    verdict = HOLDS if margins[k] >= -slack else REFUTED
    return PropertyReport(
        name=name,
        verdict=verdict,
        samples_checked=int(n),
        worst_margin=float(margins[k]),
        witnesses=[Witness(inputs=inputs, quantities=quantities)],
    )


def check_monotone(m: MappingSpec, rel: OrderRel, pairs) -> PropertyReport:
    """Tx <= Ty for sampled comparable pairs x <= y (exact comparison)."""
    x, y = pairs
    tx, ty = m.apply(x), m.apply(y)
    depth = np.min(ty - tx, axis=-1)
    return _report(
        "monotone",
        depth,
        {"x": x, "y": y, "Tx": tx, "Ty": ty},
        slack=0.0,
    )


def check_condition_c(m: MappingSpec, pairs, slack: float = DEFAULT_SLACK) -> PropertyReport:
    """Half-residual trigger implies nonexpansiveness on the pair.

    For pairs with 0.5*d(x, Tx) <= d(x, y), asserts d(Tx, Ty) <= d(x, y).
    Pairs failing the trigger are skipped, not counted.
    """
    x, y = pairs
    tx, ty = m.apply(x), m.apply(y)
    space = m.space
    trig = 0.5 * space.dist(x, tx) <= space.dist(x, y)
    dxy = space.dist(x, y)[trig]
    margins = dxy - space.dist(tx, ty)[trig]
    return _report(
        "condition-C",
        margins,
        {"x": x[trig], "y": y[trig], "Tx": tx[trig], "Ty": ty[trig]},
        slack,
        extra={"lhs": space.dist(tx, ty)[trig], "rhs": dxy},
    )


def gen_alpha_margins(m: MappingSpec, alpha: float, x, y):
    """Per-pair margins of the three-term alpha bound, plus the trigger mask.

    margin = alpha*d(Tx, y) + alpha*d(x, Ty) + (1 - 2*alpha)*d(x, y) - d(Tx, Ty),
    which is affine in alpha for a fixed pair.
    """
    space = m.space
    tx, ty = m.apply(x), m.apply(y)
    trig = 0.5 * space.dist(x, tx) <= space.dist(x, y)
    rhs = (
        alpha * space.dist(tx, y)
        + alpha * space.dist(x, ty)
        + (1.0 - 2.0 * alpha) * space.dist(x, y)
    )
    return rhs - space.dist(tx, ty), trig


def check_gen_alpha(
    m: MappingSpec, alpha: float, rel: OrderRel, pairs, slack: float = DEFAULT_SLACK
) -> PropertyReport:
    """Three-term alpha bound under the half-residual trigger, on comparable pairs.

    ``pairs`` must already be comparable (x <= y); use comparable_pairs or
    sample_comparable_pairs to build them.
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError("alpha must lie in [0, 1)")
    x, y = pairs
    margins, trig = gen_alpha_margins(m, alpha, x, y)
    return _report(
        "generalized-alpha",
        margins[trig],
        {"x": x[trig], "y": y[trig], "alpha": np.full(int(trig.sum()), alpha)},
        slack,
    )


def check_quasi_nonexpansive(
    m: MappingSpec, rel: OrderRel, points, slack: float = DEFAULT_SLACK
) -> PropertyReport:
    """d(Tx, p) <= d(x, p) for sampled x against comparable fixed points p."""
    if m.fixed_points is None or len(m.fixed_points) == 0:
        raise PreconditionError(f"{m.name}: no declared fixed points")
    x = np.asarray(points, dtype=float)
    p = np.atleast_2d(m.fixed_points)
    tx = m.apply(x)
    xb, pb = x[:, None, :], p[None, :, :]
    if rel.kind in (ORDER_COORDINATEWISE, ORDER_POINTWISE):
        comp = np.all(xb <= pb, axis=-1) | np.all(pb <= xb, axis=-1)
    else:
        comp = np.array(
            [[comparable(rel, xi, pi) for pi in p] for xi in x], dtype=bool
        )
    dxp = m.space.dist(xb, pb)
    dtxp = m.space.dist(tx[:, None, :], pb)
    margins = (dxp - dtxp)[comp]
    xi, pi = np.nonzero(comp)
    return _report(
        "quasi-nonexpansive",
        margins,
        {"x": x[xi], "p": p[pi], "Tx": tx[xi]},
        slack,
    )


def check_residual_image_bound(
    m: MappingSpec, alpha: float, rel: OrderRel, pairs, slack: float = DEFAULT_SLACK
) -> PropertyReport:
    """d(x, Ty) <= ((3+alpha)/(1-alpha)) d(x, Tx) + d(x, y) on comparable pairs.

    The coefficient transports the residual at x across the pair; maps
    satisfying the three-term alpha bound satisfy this for the same alpha.
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError("alpha must lie in [0, 1)")
    coef = (3.0 + alpha) / (1.0 - alpha)
    x, y = pairs
    tx, ty = m.apply(x), m.apply(y)
    space = m.space
    margins = coef * space.dist(x, tx) + space.dist(x, y) - space.dist(x, ty)
    return _report(
        "residual-image-bound",
        margins,
        {"x": x, "y": y},
        slack,
        extra={"coefficient": np.full(len(x), coef)},
    )


def check_condition_i(
    m: MappingSpec, h: Callable, points, slack: float = DEFAULT_SLACK
) -> PropertyReport:
    """Residual dominates a gauge of the distance to the fixed-point set.

    Asserts d(x, Tx) >= h(min_p d(x, p)) for sampled x; needs a finite
    declared fixed-point set, and h nondecreasing with h(0) = 0, h(r) > 0
    for r > 0.
    """
    if m.fixed_points is None or len(m.fixed_points) == 0:
        raise UnsupportedError(f"{m.name}: fixed-point set unknown or empty")
    x = np.asarray(points, dtype=float)
    tx = m.apply(x)
    p = np.atleast_2d(m.fixed_points)
    dist_to_set = np.min(m.space.dist(x[:, None, :], p[None, :, :]), axis=1)
    residual = m.space.dist(x, tx)
    margins = residual - h(dist_to_set)
    return _report(
        "condition-I",
        margins,
        {"x": x},
        slack,
        extra={"residual": residual, "dist_to_fixed_set": dist_to_set},
    )


# ----------------------------------------------------------------------
# suite driver (shared by the CLI and the acceptance tests)
# ----------------------------------------------------------------------


def run_property_suite(
    m: MappingSpec,
    step: float = 0.01,
    rng_seed: int = 42,
    alpha: float | None = None,
    sample_count: int = 512,
) -> list[PropertyReport]:
    """Run every applicable class check on a shared sample set.

    Scalar box domains get the exhaustive step-grid (endpoints forced);
    other domains get seeded random samples.  The alpha for the three-term
    bound defaults to the declared one.
    """
    rel = m.rel()
    rng = np.random.default_rng(rng_seed)
    if isinstance(m.domain, Box) and m.space.dim == 1:
        points = scalar_grid(float(m.domain.lo[0]), float(m.domain.hi[0]), step)
        pairs = all_pairs(points)
        comp = comparable_pairs(rel, points)
    else:
        points = m.domain.sample(rng, sample_count)
        pairs = (points[: sample_count // 2], points[sample_count // 2:])
        comp = sample_comparable_pairs(m, rel, sample_count, rng)

    if alpha is None:
        declared_alpha = m.declared.get("generalized-alpha")
        alpha = float(declared_alpha) if declared_alpha is not None else 1.0 / 3.0

    reports = [
        check_monotone(m, rel, comp),
        check_condition_c(m, pairs),
        check_gen_alpha(m, alpha, rel, comp),
    ]
    if m.fixed_points is not None and len(m.fixed_points) > 0:
        reports.append(check_quasi_nonexpansive(m, rel, points))
        reports.append(check_residual_image_bound(m, alpha, rel, comp))
        gauge_name = m.declared.get("condition-I")
        if gauge_name is not None:
            reports.append(check_condition_i(m, GAUGES[gauge_name], points))
    return reports
