"""Plot-data builders: figures as data, not images.

Each builder reduces analysis results to a :class:`PlotData` payload
holding everything a renderer needs (precomputed box statistics, point
coordinates, bars, histogram bins) so figures can be regenerated without
re-running any analysis.  The JSON form of these payloads is the canonical
report artifact; PNG rendering on top of them lives in
:mod:`corpusdiff.figures`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .features import FrequencyTable, frequency_pairs
from .logodds import LogOddsTable
from .workflow import HistogramData

__all__ = [
    "PLOT_KINDS",
    "PlotSeries",
    "PlotData",
    "tukey_box_stats",
    "build_boxplot",
    "build_scatter",
    "build_barchart",
    "build_histogram_plot",
]

PLOT_KINDS = ("boxplot", "scatter", "barchart", "histogram")


@dataclass(eq=False)
class PlotSeries:
    """One labeled series; ``data`` is a kind-specific payload."""

    label: str
    data: dict


@dataclass(eq=False)
class PlotData:
    """Complete, renderer-independent description of one figure."""

    kind: str
    title: str
    x_label: str
    y_label: str
    series: list[PlotSeries]
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in PLOT_KINDS:
            raise ValueError(f"kind must be one of {PLOT_KINDS}, got {self.kind!r}")

    def to_payload(self) -> dict:
        return {
            "kind": self.kind,
            "title": self.title,
            "x_label": self.x_label,
            "y_label": self.y_label,
            "series": [{"label": s.label, "data": s.data} for s in self.series],
            "meta": self.meta,
        }


def tukey_box_stats(values: Sequence[float]) -> dict:
    """Five-number box summary with 1.5*IQR whiskers and fliers."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("box statistics need a non-empty 1-D sample")
    q1, median, q3 = (float(q) for q in np.percentile(arr, [25.0, 50.0, 75.0]))
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    inside = arr[(arr >= lo_fence) & (arr <= hi_fence)]
    whisker_lo = float(inside.min()) if inside.size else q1
    whisker_hi = float(inside.max()) if inside.size else q3
    outliers = sorted(float(v) for v in arr[(arr < lo_fence) | (arr > hi_fence)])
    return {
        "n": int(arr.size),
        "median": median,
        "q1": q1,
        "q3": q3,
        "whisker_low": whisker_lo,
        "whisker_high": whisker_hi,
        "outliers": outliers,
    }


def build_boxplot(
    values_by_group: Mapping[str, Sequence[float]],
    title: str = "Document word counts by group",
    y_label: str = "tokens per document",
) -> PlotData:
    """Box-and-whisker summary per group (group order alphabetical)."""
    series = [
        PlotSeries(label=group, data=tukey_box_stats(values_by_group[group]))
        for group in sorted(values_by_group)
    ]
    if not series:
        raise ValueError("boxplot needs at least one group")
    return PlotData(
        kind="boxplot",
        title=title,
        x_label="group",
        y_label=y_label,
        series=series,
    )


def build_scatter(table: FrequencyTable) -> PlotData:
    """Per-term frequency agreement between the two groups.

    Coordinates are log10(count + 1) over the union vocabulary so that
    terms absent from a group sit on an axis.
    """
    terms, x, y = frequency_pairs(table)
    points = [
        [float(np.log10(xv + 1.0)), float(np.log10(yv + 1.0))]
        for xv, yv in zip(x, y)
    ]
    return PlotData(
        kind="scatter",
        title=f"Term frequency agreement (order {table.order})",
        x_label=f"log10(count + 1), {table.groups[0]}",
        y_label=f"log10(count + 1), {table.groups[1]}",
        series=[PlotSeries(label="terms", data={"points": points})],
        meta={"groups": list(table.groups), "n_terms": len(terms), "order": table.order},
    )


def build_barchart(table: LogOddsTable, k: int = 10) -> PlotData:
    """The k most group-associated terms per group with their z scores."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    series = []
    for group in table.groups:
        descending = group == table.groups[0]
        entries = table.by_z(descending=descending)[:k]
        series.append(
            PlotSeries(
                label=group,
                data={"bars": [[e.term, e.z] for e in entries]},
            )
        )
    return PlotData(
        kind="barchart",
        title=f"Most group-associated terms (order {table.order})",
        x_label="weighted log odds z",
        y_label="term",
        series=series,
        meta={"alpha0": table.alpha0, "k": k, "groups": list(table.groups)},
    )


def build_histogram_plot(
    histograms: Sequence[HistogramData],
    dataset: str,
) -> PlotData:
    """Per-variable, per-group count histograms on shared edges."""
    if not histograms:
        raise ValueError("no histograms to plot")
    series = [
        PlotSeries(
            label=h.variable,
            data={
                "bin_edges": list(h.bin_edges),
                "groups": {label: list(counts) for label, counts in sorted(h.counts_by_group.items())},
            },
        )
        for h in histograms
    ]
    return PlotData(
        kind="histogram",
        title=f"Per-group distributions: {dataset}",
        x_label="count",
        y_label="documents",
        series=series,
        meta={"dataset": dataset, "n_variables": len(series)},
    )
