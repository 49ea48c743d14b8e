"""Figures written next to verification reports."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}


def plot_ratio_histograms(result, path) -> None:
    """One panel per selection method: histogram of optimal/selected ratios."""
    methods = list(result.summaries)
    by_method = {m: np.array([r["ratio"] for r in result.rows if r["method"] == m]) for m in methods}
    cfg = result.config
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, len(methods), figsize=(3.0 * len(methods), 2.6), sharey=True)
        for ax, m in zip(np.atleast_1d(axes), methods):
            ratios = by_method[m]
            summary = result.summaries[m]
            hi = max(ratios.max(), 1.0 + 1e-6)
            ax.hist(ratios, bins=np.linspace(1.0, hi, 30), color="0.35")
            ax.set_title(m)
            ax.set_xlabel("optimal / selected")
            ax.text(0.97, 0.95, f"max {summary.max_ratio:.4f}\nbound {summary.bound:.4g}",
                    transform=ax.transAxes, ha="right", va="top")
            if summary.bound <= hi:
                ax.axvline(summary.bound, color="C3", lw=1)
        np.atleast_1d(axes)[0].set_ylabel("pools")
        fig.suptitle(f"n={cfg.n}, k={cfg.k}, h={cfg.h}, {cfg.trials} pools, seed {cfg.seed}")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_theorem_bounds(points, path) -> None:
    """Normalized slack of both team-value bounds; every point must sit at or below 1."""
    arr = np.array([p[1:] for p in points])
    lower, g, upper = arr.T
    keep = g > 0
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.0))
        ax.scatter(g[keep], (g / upper)[keep], s=6, color="C0", label="value / upper bound")
        ax.scatter(g[keep], (lower / g)[keep], s=6, color="C1", label="lower bound / value")
        ax.axhline(1.0, color="C3", lw=1)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("exact team value")
        ax.set_ylabel("ratio")
        ax.legend(loc="lower right")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
