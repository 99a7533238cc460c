"""Render the ratio-sweep summary figures to image files.

Three figures mirror the three summary statistics families: the found
element relative to the matrix maximum (with its guaranteed floor), the
cross error relative to the noise level (with its bound curve), and the
probability of sitting in a bad column before and after the search.

Figures are drawn directly on :class:`matplotlib.figure.Figure` objects, so
no global pyplot state or GUI backend is touched.
"""

from __future__ import annotations

import math
from pathlib import Path

from matplotlib.figure import Figure

__all__ = ["render_figures"]


def _plot_series(ax, ratios, values, label, marker):
    points = [(x, y) for x, y in zip(ratios, values) if not math.isnan(y)]
    if points:
        ax.plot([p[0] for p in points], [p[1] for p in points], marker=marker, label=label)


def _new_axes(title, ylabel):
    fig = Figure(figsize=(6.0, 4.0), dpi=120)
    ax = fig.add_subplot()
    ax.set_xscale("log", base=2)
    ax.set_xlabel("ratio")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    return fig, ax


def render_figures(summary_rows, out_dir, stem: str = "") -> list[Path]:
    """Write ``found_vs_ratio.png``, ``error_vs_ratio.png`` and
    ``bad_column_vs_ratio.png`` under ``out_dir`` (optionally prefixed by
    ``stem``); returns the created paths.

    Undefined points (NaN aggregates at ratios where the quality thresholds
    do not exist) are simply omitted from their series.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    prefix = f"{stem}_" if stem else ""
    ratios = [s.ratio for s in summary_rows]
    paths = []

    fig, ax = _new_axes("Found element relative to the matrix maximum", "found / max")
    _plot_series(ax, ratios, [s.mean_found_over_max for s in summary_rows], "mean", "o")
    _plot_series(ax, ratios, [s.min_found_over_max for s in summary_rows], "min", "v")
    _plot_series(ax, ratios, [s.lower_bound_curve for s in summary_rows], "guaranteed floor", "s")
    ax.legend()
    path = out_dir / f"{prefix}found_vs_ratio.png"
    fig.savefig(path, bbox_inches="tight")
    paths.append(path)

    fig, ax = _new_axes("Cross error relative to the noise level", "error / delta")
    _plot_series(ax, ratios, [s.mean_err_over_delta for s in summary_rows], "mean", "o")
    _plot_series(ax, ratios, [s.max_err_over_delta for s in summary_rows], "max", "^")
    _plot_series(ax, ratios, [s.error_bound_curve for s in summary_rows], "bound", "s")
    ax.legend()
    path = out_dir / f"{prefix}error_vs_ratio.png"
    fig.savefig(path, bbox_inches="tight")
    paths.append(path)

    fig, ax = _new_axes("Probability of a bad column", "probability")
    _plot_series(ax, ratios, [s.p_bad_random_start for s in summary_rows], "random column", "o")
    _plot_series(ax, ratios, [s.p_bad_after_algorithm for s in summary_rows], "after search", "^")
    ax.legend()
    path = out_dir / f"{prefix}bad_column_vs_ratio.png"
    fig.savefig(path, bbox_inches="tight")
    paths.append(path)

    return paths
