"""Partial orders on space instances and order-interval sampling checks.

Two concrete orders ship: coordinatewise on R^d and pointwise (at every
quadrature node) on grid functions.  Comparisons are exact on the stored
doubles -- a tolerant comparison would break antisymmetry and with it the
partial-order axioms.  The disk ships with no order; it is used for
geometry only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnsupportedOrderError
from .geodesic import (
    ORDER_COORDINATEWISE,
    ORDER_NONE,
    ORDER_POINTWISE,
    Space,
)
from .report import HOLDS, REFUTED, PropertyReport, Witness

UP = "up"
DOWN = "down"


@dataclass(frozen=True, eq=False)
class OrderRel:
    """A partial order bound to one space.

    ``predicate`` allows custom relations for test fixtures; the shipped
    kinds compare componentwise and ignore it.
    """

    kind: str
    space: Space
    predicate: Callable[[np.ndarray, np.ndarray], bool] | None = None


def order_for(space: Space) -> OrderRel:
    """The order this space ships with (kind 'none' when unordered)."""
    return OrderRel(kind=space.order_kind, space=space)


def leq(rel: OrderRel, u, v) -> bool:
    """Exact u <= v under the relation."""
    if rel.kind == ORDER_NONE:
        raise UnsupportedOrderError(f"space kind {rel.space.kind!r} has no order")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if rel.kind in (ORDER_COORDINATEWISE, ORDER_POINTWISE):
        return bool(np.all(u <= v))
    if rel.predicate is None:
        raise UnsupportedOrderError(f"unknown order kind {rel.kind!r}")
    return bool(rel.predicate(u, v))


def leq_many(rel: OrderRel, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rowwise u <= v for batches; vectorised for the shipped kinds."""
    if rel.kind == ORDER_NONE:
        raise UnsupportedOrderError(f"space kind {rel.space.kind!r} has no order")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if rel.kind in (ORDER_COORDINATEWISE, ORDER_POINTWISE):
        return np.all(u <= v, axis=-1)
    return np.array([leq(rel, a, b) for a, b in zip(u, v)], dtype=bool)


def comparable(rel: OrderRel, u, v) -> bool:
    return leq(rel, u, v) or leq(rel, v, u)


@dataclass(frozen=True, eq=False)
class OrderInterval:
    """An up-interval [anchor, ->) or down-interval (<-, anchor]."""

    kind: str
    anchor: np.ndarray

    def contains(self, rel: OrderRel, u) -> bool:
        if self.kind == UP:
            return leq(rel, self.anchor, u)
        if self.kind == DOWN:
            return leq(rel, u, self.anchor)
        raise UnsupportedOrderError(f"unknown interval kind {self.kind!r}")


def _sample_triples(rel: OrderRel, space: Space, kind: str, count: int, rng):
    """(anchor, u, v) triples with u, v members of the anchor's interval.

    Constructive for the shipped kinds; rejection sampling for custom
    relations (anchors whose interval yields no members are skipped).
    """
    anchors, us, vs = [], [], []
    attempts = 0
    while len(anchors) < count and attempts < 50 * count:
        attempts += 1
        a = space.sample(rng, 1)[0]
        if rel.kind in (ORDER_COORDINATEWISE, ORDER_POINTWISE):
            bump = np.abs(rng.normal(size=(2, space.dim)))
            u, v = (a + bump) if kind == UP else (a - bump)
        else:
            cand = space.sample(rng, 64)
            interval = OrderInterval(kind, a)
            members = [row for row in cand if interval.contains(rel, row)]
            if len(members) < 2:
                continue
            u, v = members[0], members[1]
        anchors.append(a)
        us.append(u)
        vs.append(v)
    if not anchors:
        raise UnsupportedOrderError("could not sample any interval members")
    return np.asarray(anchors), np.asarray(us), np.asarray(vs)


def check_interval_convexity(
    rel: OrderRel, space: Space, sample_count: int, rng_seed: int
) -> PropertyReport:
    """Sampled check that order intervals are convex under the space's combine.

    For anchors a and members u, v of [a, ->), the combination must stay in
    [a, ->); dually for down-intervals.  This is a standing assumption of
    everything built on ordered spaces, so every shipped (space, order)
    pairing must pass.
    """
    if rel.kind == ORDER_NONE:
        raise UnsupportedOrderError("interval convexity needs an ordered space")
    rng = np.random.default_rng(rng_seed)
    checked = 0
    worst = np.inf
    witnesses: list[Witness] = []
    for kind in (UP, DOWN):
        anchors, u, v = _sample_triples(rel, space, kind, sample_count, rng)
        betas = rng.random(len(anchors))
        mids = space.combine(u, v, betas)
        for i, a in enumerate(anchors):
            checked += 1
            inside = OrderInterval(kind, a).contains(rel, mids[i])
            if rel.kind in (ORDER_COORDINATEWISE, ORDER_POINTWISE):
                depth = mids[i] - a if kind == UP else a - mids[i]
                margin = float(np.min(depth))
            else:
                margin = 0.0 if inside else -1.0
            if margin < worst:
                worst = margin
            if not inside and len(witnesses) < 5:
                witnesses.append(
                    Witness(
                        inputs={
                            "interval": kind,
                            "anchor": a,
                            "u": u[i],
                            "v": v[i],
                            "beta": float(betas[i]),
                        },
                        quantities={"combined": mids[i], "margin": margin},
                    )
                )
    verdict = HOLDS if not witnesses else REFUTED
    return PropertyReport(
        name="order-interval-convexity",
        verdict=verdict,
        samples_checked=checked,
        worst_margin=float(worst),
        witnesses=witnesses,
    )
