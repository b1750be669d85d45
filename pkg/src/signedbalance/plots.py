"""SVG time-series charts rendered from already-computed report rows.

No statistic is computed here: every function takes the exact rows that go
into the corresponding CSV, so the charts cannot drift from the data.  The
SVG writer is pinned to a fixed hash salt and a null date so repeated runs
produce identical bytes.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["plot_summary", "plot_static_z", "plot_growth_z", "PERIOD_MARKERS"]

#: Boundary years separating the three historical periods.
PERIOD_MARKERS = (1866, 1941)

plt.rcParams["svg.hashsalt"] = "signedbalance"


def _to_float(value) -> float:
    return math.nan if value is None else float(value)


def _mark_periods(ax, years) -> None:
    if not years:
        return
    lo, hi = min(years), max(years)
    for marker in PERIOD_MARKERS:
        if lo <= marker <= hi:
            ax.axvline(marker, color="0.4", linestyle="--", linewidth=0.8)


def _save(fig, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_summary(rows: list[list], path) -> None:
    """Four-panel overview: nodes, average degree, positive and balanced fractions."""
    years = [r[0] for r in rows]
    panels = [
        ("number of nodes", [_to_float(r[1]) for r in rows]),
        ("average degree", [_to_float(r[2]) for r in rows]),
        ("fraction of positive edges", [_to_float(r[3]) for r in rows]),
        ("fraction of balanced triads", [_to_float(r[4]) for r in rows]),
    ]
    fig, axes = plt.subplots(2, 2, figsize=(9, 6), sharex=True)
    for ax, (label, series) in zip(axes.flat, panels):
        ax.plot(years, series, "-", color="tab:blue", linewidth=1.2)
        ax.set_ylabel(label)
        _mark_periods(ax, years)
    for ax in axes[1]:
        ax.set_xlabel("year")
    fig.tight_layout()
    _save(fig, path)


def plot_static_z(rows: list[list], path) -> None:
    """Yearly z-score of the balanced fraction against the sign-shuffle null."""
    years = [r[0] for r in rows]
    z = [_to_float(r[4]) for r in rows]
    fig, ax = plt.subplots(figsize=(9, 3.2))
    ax.plot(years, z, "-", color="tab:blue", linewidth=1.2)
    for level in (2.0, -2.0):
        ax.axhline(level, color="0.6", linestyle=":", linewidth=0.8)
    _mark_periods(ax, years)
    ax.set_xlabel("year")
    ax.set_ylabel("z-score, balanced fraction")
    fig.tight_layout()
    _save(fig, path)


def plot_growth_z(rows: list[list], path) -> None:
    """Stacked z-score panels for the three transition statistics.

    Years whose transition ensemble is empty (nothing to randomize) are
    drawn as filled black circles on the zero line, mirroring how such
    years are flagged in the CSV.
    """
    by_stat: dict[str, list[list]] = {}
    order: list[str] = []
    for row in rows:
        name = row[1]
        if name not in by_stat:
            by_stat[name] = []
            order.append(name)
        by_stat[name].append(row)
    fig, axes = plt.subplots(len(order) or 1, 1, figsize=(9, 2.6 * max(1, len(order))),
                             sharex=True, squeeze=False)
    for ax, name in zip(axes.flat, order):
        stat_rows = by_stat[name]
        years = [r[0] for r in stat_rows]
        z = [_to_float(r[5]) for r in stat_rows]
        ax.plot(years, z, "-", color="tab:blue", linewidth=1.2)
        silent = [r[0] for r in stat_rows if r[6] == "nothing_to_randomize"]
        if silent:
            ax.plot(silent, [0.0] * len(silent), "o", color="black", markersize=4)
        for level in (2.0, -2.0):
            ax.axhline(level, color="0.6", linestyle=":", linewidth=0.8)
        _mark_periods(ax, years)
        ax.set_ylabel(name.replace("_", " "))
    axes.flat[-1].set_xlabel("year")
    fig.tight_layout()
    _save(fig, path)
