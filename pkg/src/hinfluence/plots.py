"""Figure rendering for sweep output.

Kept apart from the computational path: plots are derived views of the
delimited data and never feed back into any reported number.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_sweep(points, var_name: str, report_name: str, path) -> None:
    """Plot the ratio column of a sweep against the varying parameter.

    ``points`` is a list of (value, InequalityReport); degenerate reports
    are dropped from the curve.
    """
    xs, ys = [], []
    for value, report in points:
        if report is None or report.degenerate or math.isnan(report.ratio):
            continue
        try:
            xs.append(float(value))
        except (TypeError, ValueError):
            xs.append(len(xs))
        ys.append(report.ratio)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, ys, marker="o")
    ax.set_xlabel(var_name)
    ax.set_ylabel("lhs / rhs")
    ax.set_title(f"{report_name} ratio sweep")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
