"""SVG rendering of sweep results; the CSV files remain the authoritative output."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["plot_results"]


def plot_results(results, path, title: str = "", log_y: bool = True,
                 x_label: str = "", y_label: str = "") -> Path:
    """One line per (family, evaluator); simulated points are drawn as markers only."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for label, result in results.items():
        evaluators = dict.fromkeys(r.evaluator for r in result.rows)
        for ev in evaluators:
            pts = [(r.axis, r.ber) for r in result.rows
                   if r.evaluator == ev and math.isfinite(r.ber) and (r.ber > 0 or not log_y)]
            if not pts:
                continue
            xs, ys = zip(*pts)
            style = "o" if ev.startswith("mc") or "_mc" in ev else "-"
            ax.plot(xs, ys, style, label=f"{label} {ev}", markersize=4, fillstyle="none")
    if log_y:
        ax.set_yscale("log")
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=6, ncol=2)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed hash salt and no date keep the SVG stable across reruns
    with matplotlib.rc_context({"svg.hashsalt": "ehrelay"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
