"""Figure rendering for experiment reports."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiment import BUCKET_LABELS, ExperimentReport


def render_histograms(report: ExperimentReport, path: str) -> Path:
    """One bar chart per diagnosis set: users per solution-count bucket."""
    names = report.delta_names
    cols = min(4, max(1, len(names)))
    rows = max(1, math.ceil(len(names) / cols))
    fig, axes = plt.subplots(rows, cols, figsize=(3.2 * cols, 2.6 * rows),
                             squeeze=False, sharey=True)
    positions = range(len(BUCKET_LABELS))
    for i, name in enumerate(names):
        ax = axes[i // cols][i % cols]
        counts = [report.histograms[name][label] for label in BUCKET_LABELS]
        ax.bar(positions, counts, color="#4878a8")
        ax.set_xticks(list(positions))
        ax.set_xticklabels(BUCKET_LABELS)
        ax.set_title(name, fontsize=10)
        ax.set_xlabel("solutions per user", fontsize=8)
        ax.set_ylabel("users", fontsize=8)
    for j in range(len(names), rows * cols):
        axes[j // cols][j % cols].set_visible(False)
    fig.suptitle(
        f"Solution distribution by diagnosis set "
        f"(baseline solvability {report.solvability_rate:.2f})")
    fig.tight_layout(rect=(0, 0, 1, 0.95))
    out = Path(path)
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return out
