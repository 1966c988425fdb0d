"""Verdict/witness records produced by the sampling-based property checks.

A check never claims a universally quantified property; it reports
``holds-on-samples`` or ``refuted``.  A refutation always carries at least
one witness whose stored inputs reproduce the violation when replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HOLDS = "holds-on-samples"
REFUTED = "refuted"


def plain(value):
    """Convert numpy scalars/arrays (possibly nested) to JSON-friendly types."""
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()] if value.ndim else plain(value.item())
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, dict):
        return {k: plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    return value


@dataclass
class Witness:
    """Inputs of one checked sample plus the quantities evaluated on it."""

    inputs: dict
    quantities: dict

    def to_dict(self):
        return {"inputs": plain(self.inputs), "quantities": plain(self.quantities)}


@dataclass
class PropertyReport:
    """Outcome of one sampled property check.

    ``worst_margin`` is the minimum slack seen over all checked samples;
    the convention is margin >= -tolerance for a passing sample, so a
    refuted report has worst_margin below the check's tolerance.
    """

    name: str
    verdict: str
    samples_checked: int
    worst_margin: float
    witnesses: list[Witness] = field(default_factory=list)

    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self):
        return {
            "property": self.name,
            "verdict": self.verdict,
            "samples": int(self.samples_checked),
            "worst_margin": plain(self.worst_margin),
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


def all_hold(reports) -> bool:
    return all(r.holds() for r in reports)
