"""Report figures rendered next to the delimited outputs.

Two views of the scored pairs: a rank-difference vs proximity scatter
where darker points are more anomalous and dot size tracks the shared
match count, and per-context distance histograms.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .features import PairFeatures

_PNG_METADATA = {"Software": "collusion-toolkit"}


def save_score_scatter(
    rows: Sequence[PairFeatures], scores: Sequence[float], path: str | Path
) -> Path:
    """Scatter of every scored pair: x rank difference, y proximity."""
    path = Path(path)
    x = [r.avg_rank_diff_opp for r in rows]
    y = [r.avg_distance_opp for r in rows]
    sizes = np.array([r.num_matches_opp for r in rows], dtype=float)
    sizes = 12.0 + 8.0 * sizes

    fig, ax = plt.subplots(figsize=(7, 5))
    sc = ax.scatter(x, y, c=list(scores), s=sizes, cmap="inferno", alpha=0.8, linewidths=0)
    fig.colorbar(sc, ax=ax, label="anomaly score (lower = more anomalous)")
    ax.set_xlabel("average rank difference")
    ax.set_ylabel("average landing distance (game units)")
    ax.set_title("opponent pairs by rank difference and proximity")
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return path


def save_distance_histograms(
    teammate_avgs: Sequence[float], opponent_avgs: Sequence[float], path: str | Path
) -> Path:
    """Distance distributions for teammate and opponent pairs."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 5))
    bins = 50
    if teammate_avgs:
        ax.hist(teammate_avgs, bins=bins, alpha=0.6, label="teammates", color="tab:blue")
    if opponent_avgs:
        ax.hist(opponent_avgs, bins=bins, alpha=0.6, label="opponents", color="tab:orange")
    ax.set_xlabel("average pair distance (game units)")
    ax.set_ylabel("pairs")
    ax.set_title("landing distance distribution by relationship")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)
    return path
