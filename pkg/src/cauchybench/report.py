"""Rendering of experiment results: "mean (std)" score tables, plot-ready
series for noise sweeps, and influence-curve grids.

Everything here is a pure function of already-computed results; nothing
re-runs training or touches an RNG. Rendering stays plain text / CSV so
any plotting tool can consume the output.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .losses import LossSpec, influence

__all__ = [
    "PlotSeries",
    "save_results",
    "load_results",
    "format_table",
    "emit_plot_series",
    "series_to_csv",
    "influence_csv",
]


@dataclass
class PlotSeries:
    label: str
    x: list[float]
    y: list[float]
    y_err: list[float] | None = None

    def __post_init__(self):
        if len(self.x) != len(self.y) or (self.y_err is not None and len(self.y_err) != len(self.x)):
            raise ValueError("series vectors must have equal lengths")


def save_results(result, path) -> None:
    doc = result.to_dict() if hasattr(result, "to_dict") else result
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)


def load_results(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def format_table(results: dict, metric: str, fmt: str = "text") -> str:
    """One row per model, "mean (std)" to three decimals, minimum flagged.

    ``results`` is a results document (dict) as produced by
    ExperimentResult.to_dict(); no score is recomputed.
    """
    metric = metric.lower()
    if metric not in ("mae", "rmse"):
        raise ValueError(f"unknown metric {metric!r}")
    if fmt not in ("text", "csv"):
        raise ValueError(f"unknown format {fmt!r}")
    models = results["models"]
    agg = results["aggregate"]
    means = {m: agg[m][metric]["mean"] for m in models}
    stds = {m: agg[m][metric]["std"] for m in models}
    best = min(models, key=lambda m: means[m])

    if fmt == "csv":
        out = io.StringIO()
        out.write(f"model,{metric}_mean,{metric}_std,lowest\n")
        for m in models:
            out.write(f"{m},{means[m]:.3f},{stds[m]:.3f},{'yes' if m == best else 'no'}\n")
        return out.getvalue()

    cells = {m: f"{means[m]:.3f} ({stds[m]:.3f})" for m in models}
    name_w = max(len("Model"), max(len(m) for m in models))
    cell_w = max(len(metric.upper()), max(len(c) for c in cells.values()) + 2)
    lines = [f"{'Model':<{name_w}}  {metric.upper():>{cell_w}}"]
    for m in models:
        mark = " *" if m == best else "  "
        lines.append(f"{m:<{name_w}}  {cells[m] + mark:>{cell_w}}")
    lines.append("(* lowest mean)")
    return "\n".join(lines) + "\n"


_SWEEP_AXES = {
    "sigma": ("gaussian", "sigma"),
    "tau": ("cauchy", "tau"),
    "proportion": ("uniform_outlier", "proportion"),
}


def emit_plot_series(results_list, metric: str, sweep_axis: str) -> list[PlotSeries]:
    """Score-versus-noise-level series, one per model, from sweep results.

    ``results_list`` holds results documents that differ only in the
    swept noise parameter; ``sweep_axis`` is sigma, tau, or proportion.
    A clean-data (family "none") result contributes the point x = 0.
    """
    if sweep_axis not in _SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {sweep_axis!r}")
    family, param = _SWEEP_AXES[sweep_axis]
    metric = metric.lower()
    if metric not in ("mae", "rmse"):
        raise ValueError(f"unknown metric {metric!r}")
    docs = [r.to_dict() if hasattr(r, "to_dict") else r for r in results_list]
    if not docs:
        raise ValueError("no results supplied")

    points = []
    models = docs[0]["models"]
    for doc in docs:
        if doc["models"] != models:
            raise ValueError("results in a sweep must share the same model list")
        noise = doc["config"]["noise"]
        if noise["family"] == "none":
            x = 0.0
        elif noise["family"] == family:
            x = float(noise[param])
        else:
            raise ValueError(
                f"mixed sweep axes: expected {family} noise, found {noise['family']}"
            )
        points.append((x, doc["aggregate"]))
    points.sort(key=lambda t: t[0])

    series = []
    for m in models:
        series.append(
            PlotSeries(
                label=m,
                x=[x for x, _ in points],
                y=[agg[m][metric]["mean"] for _, agg in points],
                y_err=[agg[m][metric]["std"] for _, agg in points],
            )
        )
    return series


def series_to_csv(series: list[PlotSeries]) -> str:
    """Tidy long-format CSV: label,x,y,y_err."""
    out = io.StringIO()
    out.write("label,x,y,y_err\n")
    for s in series:
        errs = s.y_err if s.y_err is not None else [""] * len(s.x)
        for x, y, e in zip(s.x, s.y, errs):
            out.write(f"{s.label},{x:.10g},{y:.10g},{e if e == '' else format(e, '.10g')}\n")
    return out.getvalue()


def influence_csv(specs: list[LossSpec], rmax: float, steps_per_unit: int) -> str:
    """Influence curves on a residual grid, one CSV column per loss.

    The grid runs from 0 to rmax with ``steps_per_unit`` points per unit
    residual (spacing 1/steps_per_unit), so integer residuals land on
    grid points exactly.
    """
    if rmax <= 0 or steps_per_unit < 1:
        raise ValueError("need rmax > 0 and steps_per_unit >= 1")
    n = int(round(rmax * steps_per_unit))
    grid = np.arange(n + 1) / steps_per_unit
    out = io.StringIO()
    out.write("r," + ",".join(s.label for s in specs) + "\n")
    cols = [influence(grid, s) for s in specs]
    for i, r in enumerate(grid):
        out.write(f"{r:.17g}," + ",".join(f"{col[i]:.17g}" for col in cols) + "\n")
    return out.getvalue()
