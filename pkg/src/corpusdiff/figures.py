"""PNG rendering of plot-data payloads.

Consumes the JSON-ready payload dicts produced by :mod:`corpusdiff.plots`
and draws them with matplotlib's Agg backend.  Rendering touches no
analysis code: everything a figure shows comes from the payload, so a
saved plot-data file regenerates the identical image.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_figure"]

# Stable PNG metadata so repeated renders are byte-identical.
_PNG_METADATA = {"Software": "corpusdiff"}

_GROUP_COLORS = ("#4c72b0", "#dd8452", "#55a868", "#c44e52")


def _save(fig, path: Path, dpi: int) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=dpi, metadata=_PNG_METADATA)
    plt.close(fig)


def _render_boxplot(payload: dict, path: Path, dpi: int) -> None:
    stats = []
    for series in payload["series"]:
        data = series["data"]
        stats.append(
            {
                "label": series["label"],
                "med": data["median"],
                "q1": data["q1"],
                "q3": data["q3"],
                "whislo": data["whisker_low"],
                "whishi": data["whisker_high"],
                "fliers": data["outliers"],
            }
        )
    fig, ax = plt.subplots(figsize=(1.8 + 1.4 * len(stats), 4.2))
    ax.bxp(stats, showfliers=True, flierprops={"marker": ".", "markersize": 3})
    ax.set_title(payload["title"])
    ax.set_xlabel(payload["x_label"])
    ax.set_ylabel(payload["y_label"])
    fig.tight_layout()
    _save(fig, path, dpi)


def _render_scatter(payload: dict, path: Path, dpi: int) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    for series in payload["series"]:
        points = series["data"]["points"]
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        ax.plot(xs, ys, ".", markersize=2.5, alpha=0.35, label=series["label"])
    limit = 0.0
    for series in payload["series"]:
        for p in series["data"]["points"]:
            limit = max(limit, p[0], p[1])
    ax.plot([0.0, limit], [0.0, limit], lw=0.8, color="0.4", zorder=0)
    ax.set_title(payload["title"])
    ax.set_xlabel(payload["x_label"])
    ax.set_ylabel(payload["y_label"])
    fig.tight_layout()
    _save(fig, path, dpi)


def _render_barchart(payload: dict, path: Path, dpi: int) -> None:
    series_list = payload["series"]
    fig, axes = plt.subplots(
        1, len(series_list), figsize=(4.2 * len(series_list), 4.6), squeeze=False
    )
    for idx, series in enumerate(series_list):
        ax = axes[0][idx]
        bars = series["data"]["bars"]
        terms = [b[0] for b in bars]
        values = [b[1] for b in bars]
        positions = range(len(bars))
        ax.barh(positions, values, color=_GROUP_COLORS[idx % len(_GROUP_COLORS)])
        ax.set_yticks(list(positions), labels=terms, fontsize=8)
        ax.invert_yaxis()
        ax.set_title(series["label"])
        ax.set_xlabel(payload["x_label"])
    fig.suptitle(payload["title"])
    fig.tight_layout()
    _save(fig, path, dpi)


def _render_histogram(payload: dict, path: Path, dpi: int) -> None:
    series_list = payload["series"]
    n = len(series_list)
    ncols = min(4, max(1, n))
    nrows = math.ceil(n / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(3.2 * ncols, 2.4 * nrows), squeeze=False
    )
    for idx, series in enumerate(series_list):
        ax = axes[idx // ncols][idx % ncols]
        edges = series["data"]["bin_edges"]
        for gidx, (group, counts) in enumerate(sorted(series["data"]["groups"].items())):
            ax.stairs(
                counts,
                edges,
                label=group,
                color=_GROUP_COLORS[gidx % len(_GROUP_COLORS)],
            )
        ax.set_title(series["label"], fontsize=8)
        ax.tick_params(labelsize=7)
        if idx == 0:
            ax.legend(fontsize=7)
    for idx in range(n, nrows * ncols):
        axes[idx // ncols][idx % ncols].axis("off")
    fig.suptitle(payload["title"])
    fig.tight_layout()
    _save(fig, path, dpi)


_RENDERERS = {
    "boxplot": _render_boxplot,
    "scatter": _render_scatter,
    "barchart": _render_barchart,
    "histogram": _render_histogram,
}


def render_figure(payload: dict, path: str | Path, dpi: int = 100) -> Path:
    """Draw one plot-data payload to a PNG file."""
    kind = payload.get("kind")
    renderer = _RENDERERS.get(str(kind))
    if renderer is None:
        raise ValueError(f"unknown plot kind {kind!r}")
    path = Path(path)
    renderer(payload, path, dpi)
    return path
