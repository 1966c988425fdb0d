"""Figure rendering for the CLI report paths.

Figures are written next to the delimited output as PNG.  Rendering is
deterministic: the Agg backend, fixed dpi, and pinned metadata keep two
runs byte-identical, which the determinism contract of the CLI relies on.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SAVE_KWARGS = {"dpi": 130, "metadata": {"Software": "fixlab"}}


def save_iteration_figure(path, steps, series, ylabel, title, logy=False):
    """One line per named series against the step index.

    With ``logy`` only positive entries are drawn; if no series has any,
    the plot falls back to a linear axis.
    """
    steps = np.asarray(steps)
    logy = logy and any(np.any(np.asarray(v, dtype=float) > 0.0) for v in series.values())
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, values in series.items():
        values = np.asarray(values, dtype=float)
        if logy:
            keep = values > 0.0
            ax.semilogy(
                steps[: len(values)][keep], values[keep], marker="o", markersize=3, label=label
            )
        else:
            ax.plot(steps[: len(values)], values, marker="o", markersize=3, label=label)
    ax.set_xlabel("iteration n")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def save_solution_figure(path, nodes, curves, residual_series=None, title=""):
    """Solution curves over [0, 1], with an optional residual-decay panel."""
    if residual_series:
        fig, (ax, ax2) = plt.subplots(1, 2, figsize=(9.5, 4.0))
    else:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        ax2 = None
    for label, values in curves.items():
        ax.plot(nodes, values, label=label)
    ax.set_xlabel("t")
    ax.set_ylabel("x(t)")
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    if ax2 is not None:
        for label, values in residual_series.items():
            values = np.asarray(values, dtype=float)
            keep = values > 0.0
            if not np.any(keep):
                continue
            ax2.semilogy(np.arange(1, len(values) + 1)[keep], values[keep], label=label)
        ax2.set_xlabel("iteration n")
        ax2.set_ylabel("residual")
        ax2.set_title("residual decay")
        if ax2.lines:
            ax2.legend()
        ax2.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
