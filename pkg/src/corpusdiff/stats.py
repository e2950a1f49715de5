"""Univariate and multivariate statistical kernel.

All hypothesis-test routines return plain result dataclasses; p-values come
from the in-package distribution functions in :mod:`corpusdiff.special`.
Matrix plumbing (covariances, Cholesky factorizations, linear solves) uses
numpy; the statistical formulas themselves are spelled out here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import special
from .errors import DegenerateDataError, InsufficientDataError, SingularMatrixError

__all__ = [
    "Descriptives",
    "TestResult",
    "PearsonResult",
    "ManovaResult",
    "MahalanobisReport",
    "descriptive_stats",
    "sample_skewness",
    "sample_excess_kurtosis",
    "pearson_correlation",
    "fisher_confidence_interval",
    "mahalanobis_outliers",
    "levene_test",
    "box_m_test",
    "manova_pillai",
    "pillai_to_f",
    "welch_anova",
    "bonferroni_adjust",
]


@dataclass(frozen=True)
class Descriptives:
    """Summary statistics for one numeric sample."""

    n: int
    mean: float
    sd: float | None
    minimum: float
    maximum: float


@dataclass(frozen=True)
class TestResult:
    """Outcome of a univariate hypothesis test.

    ``df2`` is None for tests whose reference distribution has a single
    degrees-of-freedom parameter (e.g. a chi-square approximation).
    """

    statistic: float
    df1: float
    df2: float | None
    p_value: float
    method: str


@dataclass(frozen=True)
class PearsonResult:
    """Pearson product-moment correlation with a Fisher-transform CI."""

    r: float
    n: int
    df: int
    p_value: float
    ci_low: float
    ci_high: float
    confidence: float
    method: str = "pearson"


@dataclass(frozen=True)
class ManovaResult:
    """One-way MANOVA summarized by Pillai's trace with its F approximation."""

    pillai: float
    f_approx: float
    df1: int
    df2: int
    p_value: float
    eta_squared: float
    n_obs: int
    n_vars: int
    n_groups: int


@dataclass(frozen=True, eq=False)
class MahalanobisReport:
    """Squared Mahalanobis distances with a chi-square outlier cutoff."""

    distances: np.ndarray
    cutoff: float
    quantile: float
    outlier_flags: np.ndarray

    @property
    def n_outliers(self) -> int:
        return int(self.outlier_flags.sum())

    @property
    def outlier_indices(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.outlier_flags)]


def _as_1d_float(values: Sequence[float], what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite values")
    return arr


def descriptive_stats(values: Sequence[float]) -> Descriptives:
    """Mean, sample SD (ddof=1; None when n = 1), minimum and maximum."""
    arr = _as_1d_float(values, "values")
    n = int(arr.size)
    if n == 0:
        raise InsufficientDataError("descriptive_stats requires at least one value")
    sd = float(arr.std(ddof=1)) if n >= 2 else None
    return Descriptives(
        n=n,
        mean=float(arr.mean()),
        sd=sd,
        minimum=float(arr.min()),
        maximum=float(arr.max()),
    )


def _central_moments(arr: np.ndarray) -> tuple[float, float, float]:
    centered = arr - arr.mean()
    m2 = float(np.mean(centered**2))
    m3 = float(np.mean(centered**3))
    m4 = float(np.mean(centered**4))
    return m2, m3, m4


def sample_skewness(values: Sequence[float]) -> float:
    """Moment skewness m3 / m2^(3/2); NaN for a constant sample."""
    arr = _as_1d_float(values, "values")
    if arr.size < 2:
        raise InsufficientDataError("skewness requires at least two values")
    m2, m3, _ = _central_moments(arr)
    if m2 == 0.0:
        return math.nan
    return m3 / m2**1.5


def sample_excess_kurtosis(values: Sequence[float]) -> float:
    """Moment excess kurtosis m4 / m2^2 - 3; NaN for a constant sample."""
    arr = _as_1d_float(values, "values")
    if arr.size < 2:
        raise InsufficientDataError("kurtosis requires at least two values")
    m2, _, m4 = _central_moments(arr)
    if m2 == 0.0:
        return math.nan
    return m4 / m2**2 - 3.0


def fisher_confidence_interval(
    r: float, n: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Confidence interval for a correlation via the Fisher z transform."""
    if not -1.0 <= r <= 1.0:
        raise ValueError(f"r must lie in [-1, 1], got {r}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    if n < 3:
        raise InsufficientDataError(f"Fisher interval requires n >= 3, got {n}")
    if abs(r) == 1.0:
        return (r, r)
    if n == 3:
        # Zero-width z denominator: the interval is uninformative.
        return (-1.0, 1.0)
    z_crit = special.normal_quantile(0.5 + 0.5 * confidence)
    zr = math.atanh(r)
    half = z_crit / math.sqrt(n - 3)
    return (math.tanh(zr - half), math.tanh(zr + half))


def pearson_correlation(
    x: Sequence[float], y: Sequence[float], confidence: float = 0.95
) -> PearsonResult:
    """Pearson r with a two-sided t-test p-value and Fisher-transform CI."""
    ax = _as_1d_float(x, "x")
    ay = _as_1d_float(y, "y")
    if ax.size != ay.size:
        raise ValueError(f"length mismatch: {ax.size} vs {ay.size}")
    n = int(ax.size)
    if n < 3:
        raise InsufficientDataError(f"pearson_correlation requires n >= 3, got {n}")
    xc = ax - ax.mean()
    yc = ay - ay.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateDataError("correlation is undefined for a constant sequence")
    r = float(xc @ yc) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    df = n - 2
    if abs(r) == 1.0:
        p_value = 0.0
    else:
        t = r * math.sqrt(df / (1.0 - r * r))
        p_value = special.student_t_two_sided_p(t, df)
    ci_low, ci_high = fisher_confidence_interval(r, n, confidence)
    return PearsonResult(
        r=r,
        n=n,
        df=df,
        p_value=p_value,
        ci_low=ci_low,
        ci_high=ci_high,
        confidence=confidence,
    )


def _rows_array(data: object, what: str) -> np.ndarray:
    rows = getattr(data, "rows", data)
    arr = np.asarray(rows, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{what} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite values")
    return arr


def _pd_cholesky(matrix: np.ndarray, what: str) -> np.ndarray:
    sym = 0.5 * (matrix + matrix.T)
    try:
        chol = np.linalg.cholesky(sym)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"{what} is not positive definite") from exc
    diag = np.diag(chol)
    # Cholesky pivots are on the square-root scale, so a 1e-6 pivot ratio
    # corresponds to a matrix condition number around 1e12; exactly singular
    # inputs surface as pivots at the sqrt(machine-eps) level (~1e-8) rather
    # than a decomposition failure.
    if diag.min() <= diag.max() * 1e-6:
        raise SingularMatrixError(f"{what} is numerically singular")
    return chol


def mahalanobis_outliers(data: object, quantile: float = 0.999) -> MahalanobisReport:
    """Squared Mahalanobis distance of each row to the sample centroid.

    Rows whose distance exceeds the chi-square quantile with p (number of
    columns) degrees of freedom are flagged as multivariate outliers.
    Accepts a plain 2-D array or any object with a ``rows`` attribute.
    """
    if not 0.0 < quantile < 1.0:
        raise ValueError(f"quantile must lie in (0, 1), got {quantile}")
    arr = _rows_array(data, "data")
    n, p = arr.shape
    if n <= p:
        raise InsufficientDataError(
            f"need more rows than columns for a full-rank covariance ({n} rows, {p} columns)"
        )
    cov = np.atleast_2d(np.cov(arr, rowvar=False, ddof=1))
    chol = _pd_cholesky(cov, "covariance matrix")
    centered = arr - arr.mean(axis=0)
    # Solve L y = (x - mu)^T so that d^2 = ||y||^2.
    y = np.linalg.solve(chol, centered.T)
    d2 = np.sum(y * y, axis=0)
    cutoff = special.chi2_quantile(quantile, p)
    return MahalanobisReport(
        distances=d2,
        cutoff=cutoff,
        quantile=quantile,
        outlier_flags=d2 > cutoff,
    )


def _group_arrays(groups: Sequence[Sequence[float]], min_size: int) -> list[np.ndarray]:
    if len(groups) < 2:
        raise InsufficientDataError(f"need at least two groups, got {len(groups)}")
    arrays = []
    for idx, g in enumerate(groups):
        arr = _as_1d_float(g, f"group {idx}")
        if arr.size < min_size:
            raise InsufficientDataError(
                f"group {idx} has {arr.size} values; need at least {min_size}"
            )
        arrays.append(arr)
    return arrays


def _oneway_f(groups: list[np.ndarray]) -> tuple[float, float, float, float]:
    """Classical one-way ANOVA F on already-validated groups."""
    g = len(groups)
    total_n = sum(a.size for a in groups)
    grand = sum(float(a.sum()) for a in groups) / total_n
    ssb = sum(a.size * (float(a.mean()) - grand) ** 2 for a in groups)
    sse = sum(float(((a - a.mean()) ** 2).sum()) for a in groups)
    df1 = float(g - 1)
    df2 = float(total_n - g)
    if sse == 0.0:
        f_stat = 0.0 if ssb <= 1e-300 else math.inf
    else:
        f_stat = (ssb / df1) / (sse / df2)
    p_value = special.f_sf(f_stat, df1, df2)
    return f_stat, df1, df2, p_value


def levene_test(groups: Sequence[Sequence[float]], center: str = "median") -> TestResult:
    """Homogeneity-of-variance test on absolute deviations from the group
    center (median by default, i.e. the Brown-Forsythe variant)."""
    if center not in ("median", "mean"):
        raise ValueError(f"center must be 'median' or 'mean', got {center!r}")
    arrays = _group_arrays(groups, min_size=2)
    deviations = []
    for arr in arrays:
        loc = float(np.median(arr)) if center == "median" else float(arr.mean())
        deviations.append(np.abs(arr - loc))
    f_stat, df1, df2, p_value = _oneway_f(deviations)
    return TestResult(
        statistic=f_stat,
        df1=df1,
        df2=df2,
        p_value=p_value,
        method=f"levene_{center}",
    )


def box_m_test(groups: Sequence[object]) -> TestResult:
    """Box's M test for equality of group covariance matrices.

    ``statistic`` is the raw M; the p-value uses the standard chi-square
    approximation chi2 = (1 - c) * M with df = p(p+1)(g-1)/2.
    """
    if len(groups) < 2:
        raise InsufficientDataError(f"need at least two groups, got {len(groups)}")
    arrays = [_rows_array(g, f"group {idx}") for idx, g in enumerate(groups)]
    p = arrays[0].shape[1]
    for idx, arr in enumerate(arrays):
        if arr.shape[1] != p:
            raise ValueError(
                f"group {idx} has {arr.shape[1]} variables; expected {p}"
            )
        if arr.shape[0] <= p:
            raise InsufficientDataError(
                f"group {idx} needs more than {p} rows for a full-rank covariance, "
                f"got {arr.shape[0]}"
            )
    g = len(arrays)
    sizes = [arr.shape[0] for arr in arrays]
    total_n = sum(sizes)
    covs = [np.atleast_2d(np.cov(arr, rowvar=False, ddof=1)) for arr in arrays]
    log_dets = []
    for idx, cov in enumerate(covs):
        chol = _pd_cholesky(cov, f"covariance matrix of group {idx}")
        log_dets.append(2.0 * float(np.log(np.diag(chol)).sum()))
    pooled = sum((n_j - 1) * cov for n_j, cov in zip(sizes, covs)) / (total_n - g)
    pooled_chol = _pd_cholesky(pooled, "pooled covariance matrix")
    pooled_log_det = 2.0 * float(np.log(np.diag(pooled_chol)).sum())
    m_stat = (total_n - g) * pooled_log_det - sum(
        (n_j - 1) * ld for n_j, ld in zip(sizes, log_dets)
    )
    m_stat = max(m_stat, 0.0)
    c = (sum(1.0 / (n_j - 1) for n_j in sizes) - 1.0 / (total_n - g)) * (
        (2 * p * p + 3 * p - 1) / (6.0 * (p + 1) * (g - 1))
    )
    df = p * (p + 1) * (g - 1) / 2.0
    chi2_stat = m_stat * (1.0 - c)
    p_value = special.chi2_sf(chi2_stat, df)
    return TestResult(
        statistic=m_stat,
        df1=df,
        df2=None,
        p_value=p_value,
        method="box_m",
    )


def _pillai_f(
    pillai: float, n_obs: int, n_vars: int, n_groups: int
) -> tuple[float, int, int]:
    s = min(n_vars, n_groups - 1)
    if s != 1:
        raise ValueError(
            "the F approximation is implemented for s = min(p, g-1) = 1 "
            f"(two groups, or one variable); got p={n_vars}, g={n_groups}"
        )
    m_par = (abs(n_vars - n_groups + 1) - 1) / 2.0
    n_par = (n_obs - n_groups - n_vars - 1) / 2.0
    df1 = int(round(s * (2.0 * m_par + s + 1.0)))
    df2 = int(round(s * (2.0 * n_par + s + 1.0)))
    if df2 <= 0:
        raise InsufficientDataError(
            f"n={n_obs} is too small for p={n_vars}, g={n_groups} (df2={df2})"
        )
    if pillai >= s:
        f_approx = math.inf
    else:
        f_approx = (df2 / df1) * pillai / (s - pillai)
    return f_approx, df1, df2


def pillai_to_f(
    pillai: float, n_obs: int, n_vars: int, n_groups: int = 2
) -> tuple[float, int, int]:
    """F approximation (F, df1, df2) for a Pillai trace value.

    For two groups: F = ((n - p - 1) / p) * V / (1 - V), df1 = p,
    df2 = n - p - 1.
    """
    if not 0.0 <= pillai <= min(n_vars, n_groups - 1):
        raise ValueError(f"Pillai trace {pillai} outside [0, s]")
    return _pillai_f(pillai, n_obs, n_vars, n_groups)


def manova_pillai(m: object, labels: Sequence[str]) -> ManovaResult:
    """One-way MANOVA via Pillai's trace V = tr(H (H + E)^-1).

    H is the between-group and E the within-group SSCP matrix.  The F
    approximation covers s = min(p, g - 1) = 1, i.e. the two-group design
    (or a single response variable); partial eta squared is V / s.
    """
    arr = _rows_array(m, "data")
    n, p = arr.shape
    labels = list(labels)
    if len(labels) != n:
        raise ValueError(f"got {len(labels)} labels for {n} rows")
    group_names = sorted(set(labels))
    g = len(group_names)
    if g < 2:
        raise InsufficientDataError("MANOVA requires at least two groups")
    if n <= p + g - 1:
        raise InsufficientDataError(
            f"need n > p + g - 1 observations (n={n}, p={p}, g={g})"
        )
    label_arr = np.asarray(labels, dtype=object)
    grand = arr.mean(axis=0)
    h_mat = np.zeros((p, p))
    e_mat = np.zeros((p, p))
    for name in group_names:
        block = arr[label_arr == name]
        if block.shape[0] < 2:
            raise InsufficientDataError(f"group {name!r} has fewer than two rows")
        mean_g = block.mean(axis=0)
        centered = block - mean_g
        e_mat += centered.T @ centered
        diff = mean_g - grand
        h_mat += block.shape[0] * np.outer(diff, diff)
    total = h_mat + e_mat
    _pd_cholesky(total, "total SSCP matrix")
    pillai = float(np.trace(np.linalg.solve(total, h_mat)))
    s = min(p, g - 1)
    pillai = max(0.0, min(float(s), pillai))
    f_approx, df1, df2 = _pillai_f(pillai, n, p, g)
    p_value = special.f_sf(f_approx, df1, df2)
    return ManovaResult(
        pillai=pillai,
        f_approx=f_approx,
        df1=df1,
        df2=df2,
        p_value=p_value,
        eta_squared=pillai / s,
        n_obs=n,
        n_vars=p,
        n_groups=g,
    )


def welch_anova(groups: Sequence[Sequence[float]]) -> TestResult:
    """One-way ANOVA that does not assume equal variances (Welch).

    For two groups the statistic equals the squared Welch t statistic.
    """
    arrays = _group_arrays(groups, min_size=2)
    g = len(arrays)
    for idx, arr in enumerate(arrays):
        if float(arr.var(ddof=1)) == 0.0:
            raise DegenerateDataError(
                f"group {idx} has zero variance; Welch weights are undefined"
            )
    sizes = np.array([a.size for a in arrays], dtype=float)
    means = np.array([float(a.mean()) for a in arrays])
    variances = np.array([float(a.var(ddof=1)) for a in arrays])
    w = sizes / variances
    w_total = float(w.sum())
    mean_w = float((w * means).sum()) / w_total
    a_term = float((w * (means - mean_w) ** 2).sum()) / (g - 1)
    lam = float((((1.0 - w / w_total) ** 2) / (sizes - 1.0)).sum()) / (g * g - 1.0)
    f_stat = a_term / (1.0 + 2.0 * (g - 2.0) * lam)
    df1 = float(g - 1)
    df2 = 1.0 / (3.0 * lam)
    p_value = special.f_sf(f_stat, df1, df2)
    return TestResult(
        statistic=f_stat,
        df1=df1,
        df2=df2,
        p_value=p_value,
        method="welch_anova",
    )


def bonferroni_adjust(family_alpha: float, m: int) -> float:
    """Per-comparison alpha for m tests at a family-wise level."""
    if not 0.0 < family_alpha <= 1.0:
        raise ValueError(f"family_alpha must lie in (0, 1], got {family_alpha}")
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"number of comparisons must be a positive integer, got {m}")
    return family_alpha / m
