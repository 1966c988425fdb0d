"""Metric spaces carrying a geodesic convex-combination map.

A space here is a metric ``dist`` together with a combination map
``combine(u, v, beta)`` returning the point a fraction ``beta`` of the way
along the geodesic from ``u`` to ``v``.  Three concrete instances ship:

* ``euclidean(d)``      -- R^d with the usual norm and affine combination,
* ``poincare_disk()``   -- the open unit disk with the hyperbolic metric
                           rho(u, v) = arcosh(1 + 2|u-v|^2 / ((1-|u|^2)(1-|v|^2)))
                           and combination along hyperbolic geodesics,
* ``l2_grid(weights)``  -- real vectors indexed by quadrature nodes with the
                           weighted norm sqrt(sum w_i x_i^2), affine combination.

Four structural axioms tie the two together (checked numerically by
``check_axioms``): the metric is convex along combinations, the combination
is an affinely parametrised geodesic, it is symmetric under swapping
endpoints, and it is jointly nonexpansive in both endpoints.

All operations are pure functions of their inputs; randomness enters only
through explicit integer seeds, so results are reproducible and safe to
call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EstimationError, SpaceMismatchError
from .report import HOLDS, REFUTED, PropertyReport, Witness

EUCLIDEAN = "euclidean"
POINCARE_DISK = "poincare_disk"
L2_GRID = "l2_grid"
BROKEN_DISK = "broken_disk"

# Disk points must stay strictly interior; arcosh blows up on the boundary.
DISK_MARGIN = 1e-12
# Random disk samples are capped at this euclidean radius to keep the
# metric well conditioned during axiom/modulus sampling.
DISK_SAMPLE_RADIUS = 0.95

ORDER_NONE = "none"
ORDER_COORDINATEWISE = "coordinatewise"
ORDER_POINTWISE = "pointwise"


def _complex(u: np.ndarray) -> np.ndarray:
    return u[..., 0] + 1j * u[..., 1]


def _real2(c: np.ndarray) -> np.ndarray:
    return np.stack([c.real, c.imag], axis=-1)


@dataclass(frozen=True, eq=False)
class Space:
    """One concrete metric-plus-combination structure.

    ``dim`` is the length of point vectors.  For ``l2_grid`` spaces,
    ``weights`` are the positive quadrature weights (summing to 1) that
    define the inner product; the node count doubles as the grid identity,
    so vectors of a different length are rejected.  ``order_kind`` records
    which partial order this space ships with (see the order module).
    """

    kind: str
    dim: int
    weights: np.ndarray | None = None
    order_kind: str = ORDER_NONE

    # ------------------------------------------------------------------
    # validation
    # ------------------------------------------------------------------
    def check_points(self, *points) -> None:
        """Raise if any argument is not a (batch of) point(s) of this space."""
        for u in points:
            a = np.asarray(u, dtype=float)
            if a.ndim == 0 or a.shape[-1] != self.dim:
                raise SpaceMismatchError(
                    f"expected points of length {self.dim} for {self.kind}, "
                    f"got shape {a.shape}"
                )
            if not np.all(np.isfinite(a)):
                raise DomainError("non-finite point coordinates")
            if self.kind in (POINCARE_DISK, BROKEN_DISK):
                r = np.linalg.norm(a, axis=-1)
                if np.any(r > 1.0 - DISK_MARGIN):
                    raise DomainError(
                        f"disk point with |u| = {float(np.max(r))!r} on or outside "
                        f"the boundary margin {1.0 - DISK_MARGIN!r}"
                    )

    # ------------------------------------------------------------------
    # metric and combination
    # ------------------------------------------------------------------
    def dist(self, u, v):
        """Distance between two points (or elementwise between batches)."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        self.check_points(u, v)
        if self.kind == EUCLIDEAN:
            d = np.linalg.norm(u - v, axis=-1)
        elif self.kind == L2_GRID:
            diff = u - v
            d = np.sqrt(np.sum(self.weights * diff * diff, axis=-1))
        else:
            cu, cv = _complex(u), _complex(v)
            t = np.abs((cv - cu) / (1.0 - np.conj(cu) * cv))
            d = 2.0 * np.arctanh(t)
        return float(d) if d.ndim == 0 else d

    def combine(self, u, v, beta):
        """Geodesic point ``(1-beta) u (+) beta v``; beta in [0, 1]."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        self.check_points(u, v)
        b = np.asarray(beta, dtype=float)
        if np.any(b < 0.0) or np.any(b > 1.0):
            raise DomainError(f"combination parameter outside [0, 1]: {beta!r}")
        if self.kind == POINCARE_DISK:
            return self._disk_combine(u, v, b)
        bb = b[..., None] if b.ndim else b
        out = (1.0 - bb) * u + bb * v
        # identical endpoints return the point itself, exactly
        same = np.all(u == v, axis=-1)
        if np.any(same):
            out = np.where(np.expand_dims(same, -1), u, out)
        return out

    @staticmethod
    def _disk_combine(u, v, b):
        cu, cv = _complex(u), _complex(v)
        t = (cv - cu) / (1.0 - np.conj(cu) * cv)
        r = np.abs(t)
        # move to hyperbolic distance b*rho(u,v) along the radial geodesic,
        # then translate back; r == 0 means u == v and the answer is u.
        s = np.tanh(0.5 * b * 2.0 * np.arctanh(r))
        w = np.where(r > 0.0, s / np.where(r > 0.0, r, 1.0), 0.0) * t
        out = (w + cu) / (1.0 + np.conj(cu) * w)
        out = np.where(b == 0.0, cu, out)
        out = np.where(b == 1.0, cv, out)
        return _real2(out)

    # ------------------------------------------------------------------
    # samplers (explicit rng, deterministic for a fixed seed)
    # ------------------------------------------------------------------
    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n random points of the space, as an (n, dim) array."""
        if self.kind in (POINCARE_DISK, BROKEN_DISK):
            ang = rng.uniform(0.0, 2.0 * np.pi, size=n)
            rad = DISK_SAMPLE_RADIUS * np.sqrt(rng.random(n))
            return np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=-1)
        return rng.normal(size=(n, self.dim))

    def sample_in_ball(self, rng, n, center, radius) -> np.ndarray:
        """n random points at distance <= radius from center."""
        center = np.asarray(center, dtype=float)
        self.check_points(center)
        if self.kind in (POINCARE_DISK, BROKEN_DISK):
            ang = rng.uniform(0.0, 2.0 * np.pi, size=n)
            s = radius * rng.random(n)
            return _disk_point_at(center, ang, s)
        dirs = rng.normal(size=(n, self.dim))
        dirs /= self._norm(dirs)[:, None]
        rad = radius * rng.random(n)
        return center + rad[:, None] * dirs

    def _norm(self, x):
        if self.kind == L2_GRID:
            return np.sqrt(np.sum(self.weights * x * x, axis=-1))
        return np.linalg.norm(x, axis=-1)


def euclidean(dim: int) -> Space:
    if dim < 1:
        raise DomainError("euclidean dimension must be >= 1")
    return Space(kind=EUCLIDEAN, dim=dim, order_kind=ORDER_COORDINATEWISE)


def poincare_disk() -> Space:
    return Space(kind=POINCARE_DISK, dim=2, order_kind=ORDER_NONE)


def l2_grid(weights) -> Space:
    """Discrete L2 space over quadrature nodes with the given weights."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size < 1:
        raise DomainError("weights must be a 1-d array")
    if np.any(w <= 0.0):
        raise DomainError("quadrature weights must be positive")
    if abs(float(w.sum()) - 1.0) > 1e-12:
        raise DomainError("quadrature weights must sum to 1")
    return Space(kind=L2_GRID, dim=w.size, weights=w, order_kind=ORDER_POINTWISE)


def broken_disk() -> Space:
    """Test fixture: disk metric paired with the (wrong) affine combination.

    The mismatch makes the affine-geodesic axiom fail, which is what the
    negative axiom tests look for.
    """
    return Space(kind=BROKEN_DISK, dim=2, order_kind=ORDER_NONE)


def _disk_point_at(center, angle, distance):
    """Point(s) at hyperbolic ``distance`` from ``center`` along ``angle``."""
    ca = _complex(np.asarray(center, dtype=float))
    wp = np.tanh(np.asarray(distance, dtype=float) / 2.0) * np.exp(1j * np.asarray(angle))
    return _real2((wp + ca) / (1.0 + np.conj(ca) * wp))


# ----------------------------------------------------------------------
# axiom checking
# ----------------------------------------------------------------------

AXIOM_NAMES = (
    "axiom-i-metric-convexity",
    "axiom-ii-affine-geodesic",
    "axiom-iii-endpoint-symmetry",
    "axiom-iv-joint-nonexpansive",
)


def check_axioms(space: Space, sample_count: int, rng_seed: int, tol: float = 1e-9):
    """Check the four combination axioms on random tuples.

    Returns one PropertyReport per axiom, each carrying the pass count and
    the worst-margin tuple as a witness.  Margins follow the convention
    rhs - lhs (equality axioms use minus the absolute deviation), so a
    sample passes iff its margin >= -tol.
    """
    if sample_count < 1:
        raise DomainError("sample_count must be >= 1")
    rng = np.random.default_rng(rng_seed)
    u = space.sample(rng, sample_count)
    v = space.sample(rng, sample_count)
    w = space.sample(rng, sample_count)
    z = space.sample(rng, sample_count)
    beta = rng.random(sample_count)
    gamma = rng.random(sample_count)

    h_b = space.combine(u, v, beta)
    h_g = space.combine(u, v, gamma)
    duv = space.dist(u, v)

    margins = {
        AXIOM_NAMES[0]: (1.0 - beta) * space.dist(z, u) + beta * space.dist(z, v)
        - space.dist(z, h_b),
        AXIOM_NAMES[1]: -np.abs(space.dist(h_b, h_g) - np.abs(beta - gamma) * duv),
        AXIOM_NAMES[2]: -space.dist(h_b, space.combine(v, u, 1.0 - beta)),
        AXIOM_NAMES[3]: (1.0 - beta) * duv + beta * space.dist(z, w)
        - space.dist(space.combine(u, z, beta), space.combine(v, w, beta)),
    }

    reports = []
    for name, margin in margins.items():
        k = int(np.argmin(margin))
        witness = Witness(
            inputs={
                "u": u[k],
                "v": v[k],
                "w": w[k],
                "z": z[k],
                "beta": beta[k],
                "gamma": gamma[k],
            },
            quantities={"margin": float(margin[k])},
        )
        passed = int(np.count_nonzero(margin >= -tol))
        verdict = HOLDS if passed == sample_count else REFUTED
        reports.append(
            PropertyReport(
                name=name,
                verdict=verdict,
                samples_checked=sample_count,
                worst_margin=float(margin[k]),
                witnesses=[witness],
            )
        )
    return reports


# ----------------------------------------------------------------------
# modulus of uniform convexity
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ModulusQuery:
    """Parameters for one sampled modulus estimate."""

    r: float
    epsilon: float
    sample_count: int
    rng_seed: int

    def __post_init__(self):
        if not self.r > 0.0:
            raise DomainError("modulus radius r must be positive")
        if not 0.0 < self.epsilon <= 2.0:
            raise DomainError("modulus epsilon must lie in (0, 2]")
        if self.sample_count < 1:
            raise DomainError("sample_count must be >= 1")


def hilbert_modulus(r: float, epsilon: float) -> float:
    """Closed-form modulus of uniform convexity of a Hilbert-type space.

    The value 1 - sqrt(1 - eps^2/4) does not depend on r; the argument is
    accepted for interface symmetry with the sampled estimator.
    """
    if not r > 0.0:
        raise DomainError("r must be positive")
    if not 0.0 < epsilon <= 2.0:
        raise DomainError("epsilon must lie in (0, 2]")
    return 1.0 - np.sqrt(1.0 - epsilon * epsilon / 4.0)


def _orthonormal_pair(space: Space, rng) -> tuple[np.ndarray, np.ndarray]:
    """Two orthonormal directions in the space's inner product (dim >= 2)."""
    w = space.weights if space.kind == L2_GRID else np.ones(space.dim)

    def ip(x, y):
        return float(np.sum(w * x * y))

    while True:
        g1 = rng.normal(size=space.dim)
        g2 = rng.normal(size=space.dim)
        n1 = np.sqrt(ip(g1, g1))
        if n1 < 1e-12:
            continue
        e1 = g1 / n1
        g2 = g2 - ip(g2, e1) * e1
        n2 = np.sqrt(ip(g2, g2))
        if n2 < 1e-12:
            continue
        return e1, g2 / n2


def extremal_pair(space: Space, center, r: float, epsilon: float, rng):
    """An admissible pair with dist(u, v) = r*eps attaining the modulus infimum.

    For dim >= 2 the pair sits symmetrically on the sphere of radius r
    around the center; on a line both points are pushed toward one end.
    This configuration keeps the sampled estimate tight in Hilbert-type
    spaces; random admissible pairs alone never approach the infimum.
    """
    center = np.asarray(center, dtype=float)
    if space.kind in (POINCARE_DISK, BROKEN_DISK):
        c = r * epsilon
        cos2t = (np.cosh(r) ** 2 - np.cosh(c)) / np.sinh(r) ** 2
        theta = np.arccos(np.clip(cos2t, -1.0, 1.0)) / 2.0
        phi = rng.uniform(0.0, 2.0 * np.pi)
        u = _disk_point_at(center, phi + theta, r)
        v = _disk_point_at(center, phi - theta, r)
        return u, v
    if space.dim == 1:
        # On a line the tight configuration pushes both points to one end.
        u = center + np.array([r])
        v = center + np.array([r * (1.0 - epsilon)])
        return u, v
    e1, e2 = _orthonormal_pair(space, rng)
    sin_t = epsilon / 2.0
    cos_t = np.sqrt(1.0 - sin_t * sin_t)
    u = center + r * (cos_t * e1 + sin_t * e2)
    v = center + r * (cos_t * e1 - sin_t * e2)
    return u, v


def modulus_sampled(space: Space, query: ModulusQuery, center, include_extremal: bool = True) -> float:
    """Sampled estimate of the modulus of uniform convexity at (r, eps).

    Minimises 1 - dist(midpoint(u, v), center)/r over sampled admissible
    pairs (both within distance r of center, at least r*eps apart).  The
    sampled minimum upper-bounds the true infimum.  With
    ``include_extremal`` (the default) the deterministic symmetric
    configuration is added so the estimate is tight in Hilbert-type spaces.
    """
    center = np.asarray(center, dtype=float)
    space.check_points(center)
    rng = np.random.default_rng(query.rng_seed)
    r, eps = query.r, query.epsilon

    u = space.sample_in_ball(rng, query.sample_count, center, r)
    v = space.sample_in_ball(rng, query.sample_count, center, r)
    keep = space.dist(u, v) >= r * eps
    u, v = u[keep], v[keep]
    if include_extremal:
        ue, ve = extremal_pair(space, center, r, eps, rng)
        u = np.concatenate([u, ue[None, :]], axis=0)
        v = np.concatenate([v, ve[None, :]], axis=0)
    if len(u) == 0:
        raise EstimationError(
            f"no admissible pair among {query.sample_count} samples at "
            f"(r, eps) = ({r}, {eps})"
        )
    mids = space.combine(u, v, 0.5)
    values = 1.0 - space.dist(mids, center) / r
    return float(np.min(values))
