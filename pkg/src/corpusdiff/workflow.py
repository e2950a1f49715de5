"""Assumption-screening pipeline around the two-group MANOVA.

Chains the screening steps (low-mean filter, per-group normality screen on
moment skewness/kurtosis, pairwise-correlation collinearity filter) with
the assumption checks (Levene, Box's M, Mahalanobis outliers), the MANOVA
itself with and without multivariate outliers, and Bonferroni-adjusted
Welch post-hoc tests per retained variable.  Every decision lands in the
returned report so the run is fully auditable and reproducible.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .errors import (
    ConfigError,
    CorpusDiffError,
    DegenerateDataError,
    InsufficientDataError,
    SingularMatrixError,
)
from .features import CountMatrix
from .stats import (
    Descriptives,
    MahalanobisReport,
    ManovaResult,
    TestResult,
    bonferroni_adjust,
    box_m_test,
    descriptive_stats,
    levene_test,
    mahalanobis_outliers,
    manova_pillai,
    sample_excess_kurtosis,
    sample_skewness,
    welch_anova,
)

__all__ = [
    "WorkflowConfig",
    "LowMeanDrop",
    "NormalityDrop",
    "CollinearityDrop",
    "ScreeningLog",
    "HistogramData",
    "WorkflowReport",
    "filter_low_mean",
    "normality_screen",
    "multicollinearity_filter",
    "run_manova_workflow",
]

# Conventional alpha used only for descriptive notes about assumption checks.
_ASSUMPTION_ALPHA = 0.05

_CONFIG_KEYS = {
    "low_mean_threshold": ("low_mean_threshold", float),
    "normality.skew_limit": ("skew_limit", float),
    "normality.kurt_limit": ("kurt_limit", float),
    "collinearity_cutoff": ("collinearity_cutoff", float),
    "mahalanobis_quantile": ("mahalanobis_quantile", float),
    "family_alpha": ("family_alpha", float),
    "levene_center": ("levene_center", str),
    "seed": ("seed", int),
}


@dataclass(frozen=True)
class WorkflowConfig:
    """Tunable thresholds for the screening pipeline."""

    low_mean_threshold: float = 20.0
    skew_limit: float = 2.0
    kurt_limit: float = 7.0
    collinearity_cutoff: float = 0.9
    mahalanobis_quantile: float = 0.999
    family_alpha: float = 0.05
    levene_center: str = "median"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.low_mean_threshold < 0:
            raise ConfigError(f"low_mean_threshold must be >= 0, got {self.low_mean_threshold}")
        if self.skew_limit <= 0 or self.kurt_limit <= 0:
            raise ConfigError("normality limits must be positive")
        if not 0.0 < self.collinearity_cutoff < 1.0:
            raise ConfigError(
                f"collinearity_cutoff must lie in (0, 1), got {self.collinearity_cutoff}"
            )
        if not 0.0 < self.mahalanobis_quantile < 1.0:
            raise ConfigError(
                f"mahalanobis_quantile must lie in (0, 1), got {self.mahalanobis_quantile}"
            )
        if not 0.0 < self.family_alpha <= 1.0:
            raise ConfigError(f"family_alpha must lie in (0, 1], got {self.family_alpha}")
        if self.levene_center not in ("median", "mean"):
            raise ConfigError(
                f"levene_center must be 'median' or 'mean', got {self.levene_center!r}"
            )

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, object]) -> "WorkflowConfig":
        """Build a config from the documented dotted key names."""
        kwargs = {}
        for key, value in mapping.items():
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"unknown workflow config key {key!r}")
            attr, cast = _CONFIG_KEYS[key]
            try:
                kwargs[attr] = cast(value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key!r}: {value!r}") from exc
        return cls(**kwargs)


@dataclass(frozen=True)
class LowMeanDrop:
    variable: str
    mean: float


@dataclass(frozen=True)
class NormalityDrop:
    """A variable dropped because one group's distribution is too far from
    normal; records the first offending group's moments."""

    variable: str
    group: str
    skewness: float
    excess_kurtosis: float


@dataclass(frozen=True)
class CollinearityDrop:
    kept: str
    dropped: str
    r: float


@dataclass
class ScreeningLog:
    """Which variables each screening step removed, and why."""

    initial_variables: list[str]
    low_mean: list[LowMeanDrop] = field(default_factory=list)
    non_normal: list[NormalityDrop] = field(default_factory=list)
    collinear: list[CollinearityDrop] = field(default_factory=list)
    retained: list[str] = field(default_factory=list)

    def dropped_variables(self) -> list[str]:
        return (
            [d.variable for d in self.low_mean]
            + [d.variable for d in self.non_normal]
            + [d.dropped for d in self.collinear]
        )

    def is_partition(self) -> bool:
        """True when dropped + retained exactly partitions the input set."""
        dropped = self.dropped_variables()
        combined = dropped + self.retained
        return (
            len(combined) == len(self.initial_variables)
            and set(combined) == set(self.initial_variables)
            and len(set(dropped)) == len(dropped)
        )


@dataclass(eq=False)
class HistogramData:
    """Per-group histogram of one variable on shared bin edges."""

    variable: str
    bin_edges: list[float]
    counts_by_group: dict[str, list[int]]


@dataclass(eq=False)
class WorkflowReport:
    """Everything the screening-plus-MANOVA pipeline decided and computed."""

    dataset: str
    config: WorkflowConfig
    n_docs: int
    group_counts: dict[str, int]
    screening: ScreeningLog
    histograms: list[HistogramData]
    levene: dict[str, TestResult]
    box_m: TestResult | None
    box_m_failure: str | None
    outliers: MahalanobisReport
    outlier_doc_ids: list[str]
    manova_all: ManovaResult
    manova_trimmed: ManovaResult
    posthoc_alpha: float
    posthoc: dict[str, TestResult]
    significant: dict[str, bool]
    group_stats: dict[str, dict[str, Descriptives]]
    notes: list[str]

    @property
    def retained_variables(self) -> list[str]:
        return list(self.screening.retained)


def filter_low_mean(
    matrix: CountMatrix, threshold: float
) -> tuple[CountMatrix, list[LowMeanDrop]]:
    """Drop variables whose overall mean count is below ``threshold``."""
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    means = matrix.column_means()
    drops = [
        LowMeanDrop(variable=var, mean=means[var])
        for var in matrix.variables
        if means[var] < threshold
    ]
    dropped_names = {d.variable for d in drops}
    kept = [var for var in matrix.variables if var not in dropped_names]
    if not kept:
        raise DegenerateDataError(
            f"low-mean filter at threshold {threshold} removed every variable"
        )
    return matrix.select_variables(kept), drops


def _histogram(matrix: CountMatrix, variable: str) -> HistogramData:
    column = matrix.column(variable).astype(float)
    lo, hi = float(column.min()), float(column.max())
    if lo == hi:
        edges = np.array([lo - 0.5, hi + 0.5])
    else:
        # Sturges' rule on the pooled sample; shared edges across groups.
        n_bins = int(math.ceil(math.log2(column.size))) + 1
        edges = np.linspace(lo, hi, n_bins + 1)
    counts_by_group = {}
    for label in matrix.group_names():
        group_col = matrix.group_column(variable, label).astype(float)
        counts, _ = np.histogram(group_col, bins=edges)
        counts_by_group[label] = [int(c) for c in counts]
    return HistogramData(
        variable=variable,
        bin_edges=[float(e) for e in edges],
        counts_by_group=counts_by_group,
    )


def normality_screen(
    matrix: CountMatrix, skew_limit: float = 2.0, kurt_limit: float = 7.0
) -> tuple[list[NormalityDrop], list[HistogramData]]:
    """Flag variables whose within-group moments exceed the limits.

    A variable is dropped when any group's |skewness| exceeds
    ``skew_limit`` or |excess kurtosis| exceeds ``kurt_limit`` (or the
    moments are undefined); the first offending group is recorded.  Also
    returns per-group histograms for every screened variable.  Requires
    at least two groups with 20+ documents each for the moments to be
    meaningful.
    """
    if skew_limit <= 0 or kurt_limit <= 0:
        raise ValueError("normality limits must be positive")
    groups = matrix.group_names()
    if len(groups) < 2:
        raise InsufficientDataError("normality screen requires at least two groups")
    for label in groups:
        size = matrix.group_rows(label).shape[0]
        if size < 20:
            raise InsufficientDataError(
                f"group {label!r} has {size} documents; need at least 20"
            )
    drops: list[NormalityDrop] = []
    histograms: list[HistogramData] = []
    for variable in matrix.variables:
        histograms.append(_histogram(matrix, variable))
        for label in groups:
            column = matrix.group_column(variable, label).astype(float)
            skew = sample_skewness(column)
            kurt = sample_excess_kurtosis(column)
            bad = (
                not math.isfinite(skew)
                or not math.isfinite(kurt)
                or abs(skew) > skew_limit
                or abs(kurt) > kurt_limit
            )
            if bad:
                drops.append(
                    NormalityDrop(
                        variable=variable,
                        group=label,
                        skewness=skew,
                        excess_kurtosis=kurt,
                    )
                )
                break
    return drops, histograms


def multicollinearity_filter(
    matrix: CountMatrix, cutoff: float = 0.9
) -> tuple[CountMatrix, list[CollinearityDrop]]:
    """Iteratively drop one variable of the most-correlated pair until no
    pair's |r| exceeds ``cutoff``.

    Within a pair, the variable with the larger mean |r| to all other
    remaining variables is dropped; ties drop the later variable.
    """
    if not 0.0 < cutoff < 1.0:
        raise ValueError(f"cutoff must lie in (0, 1), got {cutoff}")
    remaining = list(matrix.variables)
    drops: list[CollinearityDrop] = []
    while len(remaining) >= 2:
        sub = matrix.select_variables(remaining)
        with np.errstate(invalid="ignore", divide="ignore"):
            corr = np.corrcoef(sub.rows.astype(float), rowvar=False)
        corr = np.nan_to_num(np.atleast_2d(corr), nan=0.0)
        abs_corr = np.abs(corr)
        np.fill_diagonal(abs_corr, 0.0)
        max_r = float(abs_corr.max())
        if max_r <= cutoff:
            break
        i, j = divmod(int(abs_corr.argmax()), abs_corr.shape[1])
        if i > j:
            i, j = j, i
        k = len(remaining)
        row_means = abs_corr.sum(axis=1) / (k - 1)
        victim, kept = (j, i) if row_means[j] >= row_means[i] else (i, j)
        drops.append(
            CollinearityDrop(
                kept=remaining[kept],
                dropped=remaining[victim],
                r=float(corr[i, j]),
            )
        )
        remaining.pop(victim)
    return matrix.select_variables(remaining), drops


@contextmanager
def _stage(name: str) -> Iterator[None]:
    """Prefix kernel errors with the pipeline stage that raised them."""
    try:
        yield
    except CorpusDiffError as exc:
        raise type(exc)(f"[{name}] {exc}") from exc


def run_manova_workflow(
    matrix: CountMatrix,
    config: WorkflowConfig | None = None,
    dataset: str = "dataset",
) -> WorkflowReport:
    """Run screening, assumption checks, MANOVA, and post hocs end to end."""
    cfg = config if config is not None else WorkflowConfig()
    notes: list[str] = []
    group_counts = {
        label: int(matrix.group_rows(label).shape[0]) for label in matrix.group_names()
    }

    with _stage("low_mean_filter"):
        m_low, low_drops = filter_low_mean(matrix, cfg.low_mean_threshold)

    with _stage("normality_screen"):
        norm_drops, histograms = normality_screen(m_low, cfg.skew_limit, cfg.kurt_limit)
        non_normal_names = {d.variable for d in norm_drops}
        kept = [v for v in m_low.variables if v not in non_normal_names]
        if not kept:
            raise DegenerateDataError("normality screen removed every variable")
        m_norm = m_low.select_variables(kept)

    with _stage("collinearity_filter"):
        m_final, coll_drops = multicollinearity_filter(m_norm, cfg.collinearity_cutoff)
        if len(m_final.variables) < 2:
            raise DegenerateDataError(
                "fewer than two variables survived screening; MANOVA needs at least two"
            )

    screening = ScreeningLog(
        initial_variables=list(matrix.variables),
        low_mean=low_drops,
        non_normal=norm_drops,
        collinear=coll_drops,
        retained=list(m_final.variables),
    )

    groups = m_final.group_names()
    with _stage("levene"):
        levene_results = {
            var: levene_test(
                [m_final.group_column(var, label) for label in groups],
                center=cfg.levene_center,
            )
            for var in m_final.variables
        }
    levene_failures = [
        var for var, res in levene_results.items() if res.p_value < _ASSUMPTION_ALPHA
    ]
    if levene_failures:
        notes.append(
            f"variance homogeneity rejected at alpha={_ASSUMPTION_ALPHA} for "
            f"{len(levene_failures)} variable(s): {', '.join(levene_failures)}; "
            "group comparisons therefore use the Welch statistic"
        )

    box_m_result: TestResult | None = None
    box_m_failure: str | None = None
    try:
        with _stage("box_m"):
            box_m_result = box_m_test([m_final.group_rows(label) for label in groups])
    except SingularMatrixError as exc:
        box_m_failure = str(exc)
        notes.append(f"Box's M not computable: {box_m_failure}")
    if box_m_result is not None and box_m_result.p_value < _ASSUMPTION_ALPHA:
        notes.append(
            "covariance homogeneity rejected by Box's M "
            f"(p={box_m_result.p_value:.3g}); Pillai's trace is reported because "
            "it is the most robust criterion to this violation"
        )

    with _stage("mahalanobis"):
        outliers = mahalanobis_outliers(m_final.rows, cfg.mahalanobis_quantile)
    outlier_doc_ids = [m_final.doc_ids[i] for i in outliers.outlier_indices]

    with _stage("manova"):
        manova_all = manova_pillai(m_final.rows, m_final.labels)
        trimmed = m_final.drop_rows(outliers.outlier_indices)
        manova_trimmed = manova_pillai(trimmed.rows, trimmed.labels)

    with _stage("posthoc"):
        posthoc_alpha = bonferroni_adjust(cfg.family_alpha, len(m_final.variables))
        posthoc = {
            var: welch_anova([m_final.group_column(var, label) for label in groups])
            for var in m_final.variables
        }
    significant = {var: res.p_value < posthoc_alpha for var, res in posthoc.items()}

    group_stats = {
        var: {
            label: descriptive_stats(m_final.group_column(var, label))
            for label in groups
        }
        for var in m_final.variables
    }

    return WorkflowReport(
        dataset=dataset,
        config=cfg,
        n_docs=matrix.rows.shape[0],
        group_counts=group_counts,
        screening=screening,
        histograms=histograms,
        levene=levene_results,
        box_m=box_m_result,
        box_m_failure=box_m_failure,
        outliers=outliers,
        outlier_doc_ids=outlier_doc_ids,
        manova_all=manova_all,
        manova_trimmed=manova_trimmed,
        posthoc_alpha=posthoc_alpha,
        posthoc=posthoc,
        significant=significant,
        group_stats=group_stats,
        notes=notes,
    )
