"""Figures written next to the CSV/JSON reports."""

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .constants import Z_THRESHOLD  # noqa: E402

_STYLE = {
    "figure.dpi": 110,
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
}

_COLORS = {"pass": "#2b6ca3", "fail": "#c0392b", "flag": "#999999", "error": "#000000"}


def _label(row):
    keys = ("d", "n", "k", "gamma", "c", "a", "b")
    parts = [f"{k}={row.params[k]}" for k in keys if k in row.params]
    return row.target_id + (" (" + ", ".join(parts) + ")" if parts else "")


def _with_z(report):
    return [r for r in report.rows if r.z is not None and math.isfinite(r.z)]


def plot_z_scores(report, path):
    """Horizontal bars of the z-scores with the pass band shaded."""
    rows = _with_z(report)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(6.5, 0.22 * max(len(rows), 4) + 1.0))
        y = range(len(rows))
        ax.barh(list(y), [r.z for r in rows], color=[_COLORS[r.status] for r in rows], height=0.7)
        ax.axvspan(-Z_THRESHOLD, Z_THRESHOLD, color="#e8f0f7", zorder=0)
        ax.axvline(0.0, color="k", lw=0.6)
        ax.set_yticks(list(y))
        ax.set_yticklabels([_label(r) for r in rows], fontsize=6)
        ax.invert_yaxis()
        ax.set_xlabel("z-score (estimate - oracle) / stderr")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_relative_errors(report, path):
    """Estimate / oracle with two-standard-error bars, for rows with a nonzero oracle."""
    rows = [r for r in _with_z(report) if r.oracle not in (None, 0.0) and r.stderr is not None]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(6.5, 0.22 * max(len(rows), 4) + 1.0))
        for i, r in enumerate(rows):
            ratio = r.mean / r.oracle
            err = 2.0 * r.stderr / abs(r.oracle)
            ax.errorbar(ratio, i, xerr=err, fmt="o", ms=3, color=_COLORS[r.status], capsize=2)
        ax.axvline(1.0, color="k", lw=0.6)
        ax.set_yticks(range(len(rows)))
        ax.set_yticklabels([_label(r) for r in rows], fontsize=6)
        ax.invert_yaxis()
        ax.set_xlabel("estimate / oracle (bars: 2 stderr)")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_cone_limit(report, path):
    """Section facet means against n with the exact curve and the limit."""
    rows = [r for r in report.rows if r.target_id.startswith("cone_section_f_") and "n" in r.params]
    if not rows:
        return None
    d = rows[0].params["d"]
    top = [r for r in rows if r.target_id == f"cone_section_f_{d - 1}"]
    ref = [r for r in report.rows if r.target_id == f"cone_limit_reference_f_{d - 1}"]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        ns = [r.params["n"] for r in top]
        ax.errorbar(ns, [r.mean for r in top], yerr=[2 * r.stderr for r in top], fmt="o", ms=3, capsize=2, label="Monte Carlo")
        ax.plot(ns, [r.oracle for r in top], "-", lw=1, label="exact")
        if ref and ref[0].oracle is not None:
            ax.axhline(ref[0].oracle, ls="--", lw=0.8, color="k", label="limit")
        ax.set_xscale("log")
        ax.set_xlabel("n")
        ax.set_ylabel(f"mean number of facets, d={d}")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_report(report, out):
    """Render every applicable figure into directory ``out``; returns the paths."""
    paths = []
    if _with_z(report):
        paths.append(plot_z_scores(report, os.path.join(out, "z_scores.png")))
        paths.append(plot_relative_errors(report, os.path.join(out, "relative_errors.png")))
    cone = plot_cone_limit(report, os.path.join(out, "cone_limit.png"))
    if cone:
        paths.append(cone)
    return paths


_GNUPLOT = """# z-scores of report.csv; render with: gnuplot {name}
set datafile separator ","
set terminal pngcairo size 900,600
set output "z_scores_gnuplot.png"
set key off
set xlabel "row"
set ylabel "z-score"
set yrange [-6:6]
set arrow from graph 0, first {z} to graph 1, first {z} nohead dt 2
set arrow from graph 0, first -{z} to graph 1, first -{z} nohead dt 2
plot "report.csv" every ::1 using 0:(strlen(stringcolumn(6)) > 0 ? column(6) : NaN) with impulses lw 3
"""


def write_gnuplot(report, out, name="report.gp"):
    path = os.path.join(out, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_GNUPLOT.format(name=name, z=Z_THRESHOLD))
    return path
