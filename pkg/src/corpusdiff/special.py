"""Distribution functions built from first principles.

Provides the regularized incomplete beta and gamma functions (series plus
modified-Lentz continued fractions over :func:`math.lgamma`) and, on top of
them, CDF / survival / quantile helpers for the normal, Student t, F and
chi-square distributions.  Accuracy is around 1e-13 relative over the ranges
used by the statistical layer, which is verified in the test suite against
numerical quadrature of the closed-form densities.
"""

from __future__ import annotations

import math

_EPS = 1e-15
_FPMIN = 1e-300
_MAX_ITER = 500

_SQRT2 = math.sqrt(2.0)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def log_beta(a: float, b: float) -> float:
    """Natural log of the beta function B(a, b)."""
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"shape parameters must be positive, got a={a}, b={b}")
    if x < 0.0 or x > 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = a * math.log(x) + b * math.log1p(-x) - log_beta(a, b)
    front = math.exp(ln_front)
    # Use the continued fraction on whichever side converges fast.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _lower_gamma_series(a: float, x: float) -> float:
    """P(a, x) by power series; valid for x < a + 1."""
    ap = a
    total = 1.0 / a
    term = total
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ArithmeticError(f"incomplete gamma series did not converge (a={a}, x={x})")


def _upper_gamma_cf(a: float, x: float) -> float:
    """Q(a, x) by continued fraction (modified Lentz); valid for x >= a + 1."""
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ArithmeticError(
        f"incomplete gamma continued fraction did not converge (a={a}, x={x})"
    )


def regularized_lower_gamma(a: float, x: float) -> float:
    """Regularized lower incomplete gamma function P(a, x)."""
    if a <= 0.0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"x must be non-negative, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _lower_gamma_series(a, x)
    return 1.0 - _upper_gamma_cf(a, x)


def regularized_upper_gamma(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function Q(a, x) = 1 - P(a, x)."""
    if a <= 0.0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"x must be non-negative, got {x}")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _lower_gamma_series(a, x)
    return _upper_gamma_cf(a, x)


def normal_cdf(x: float) -> float:
    """Standard normal CDF."""
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_sf(x: float) -> float:
    """Standard normal survival function 1 - CDF(x)."""
    return 0.5 * math.erfc(x / _SQRT2)


# Rational-approximation coefficients for the normal quantile (Acklam).
_NQ_A = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_NQ_B = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_NQ_C = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_NQ_D = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF, accurate to roughly machine precision."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    p_low = 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        c, d = _NQ_C, _NQ_D
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    elif p <= 1.0 - p_low:
        q = p - 0.5
        r = q * q
        a, b = _NQ_A, _NQ_B
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / (
            ((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0
        )
    else:
        q = math.sqrt(-2.0 * math.log1p(-p))
        c, d = _NQ_C, _NQ_D
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    # One Halley refinement step drives the error to ~1 ulp.
    e = normal_cdf(x) - p
    u = e * _SQRT_TWO_PI * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def student_t_cdf(t: float, df: float) -> float:
    """CDF of Student's t distribution with df degrees of freedom."""
    if df <= 0.0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if t == 0.0:
        return 0.5
    x = df / (df + t * t)
    half_tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x)
    return 1.0 - half_tail if t > 0.0 else half_tail


def student_t_two_sided_p(t: float, df: float) -> float:
    """Two-sided p-value P(|T| >= |t|) for Student's t."""
    if df <= 0.0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if t == 0.0:
        return 1.0
    if math.isinf(t):
        return 0.0
    return regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t))


def f_cdf(x: float, df1: float, df2: float) -> float:
    """CDF of the F distribution."""
    if df1 <= 0.0 or df2 <= 0.0:
        raise ValueError(f"degrees of freedom must be positive, got ({df1}, {df2})")
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    return regularized_incomplete_beta(0.5 * df1, 0.5 * df2, df1 * x / (df1 * x + df2))


def f_sf(x: float, df1: float, df2: float) -> float:
    """Survival function P(F > x); computed on the complementary side for
    accuracy in the far tail."""
    if df1 <= 0.0 or df2 <= 0.0:
        raise ValueError(f"degrees of freedom must be positive, got ({df1}, {df2})")
    if x <= 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    return regularized_incomplete_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * x))


def chi2_cdf(x: float, df: float) -> float:
    """CDF of the chi-square distribution."""
    if df <= 0.0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if x <= 0.0:
        return 0.0
    return regularized_lower_gamma(0.5 * df, 0.5 * x)


def chi2_sf(x: float, df: float) -> float:
    """Survival function P(X > x) of the chi-square distribution."""
    if df <= 0.0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if x <= 0.0:
        return 1.0
    return regularized_upper_gamma(0.5 * df, 0.5 * x)


def _chi2_pdf(x: float, df: float) -> float:
    half = 0.5 * df
    log_pdf = (half - 1.0) * math.log(x) - 0.5 * x - math.lgamma(half) - half * math.log(2.0)
    return math.exp(log_pdf)


def chi2_quantile(p: float, df: float) -> float:
    """Inverse chi-square CDF by safeguarded Newton iteration."""
    if df <= 0.0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if not 0.0 <= p < 1.0:
        raise ValueError(f"p must lie in [0, 1), got {p}")
    if p == 0.0:
        return 0.0

    # Wilson-Hilferty starting point.
    z = normal_quantile(p)
    g = 2.0 / (9.0 * df)
    x = df * (1.0 - g + z * math.sqrt(g)) ** 3
    if x <= 0.0 or not math.isfinite(x):
        x = 0.5 * df

    lo, hi = 0.0, x
    while chi2_cdf(hi, df) < p:
        lo = hi
        hi *= 2.0
        if hi > 1e308:
            raise ArithmeticError(f"failed to bracket chi-square quantile for p={p}, df={df}")

    x = min(max(x, lo + 1e-12), hi)
    for _ in range(200):
        err = chi2_cdf(x, df) - p
        if err > 0.0:
            hi = x
        else:
            lo = x
        if abs(err) < 1e-14:
            break
        pdf = _chi2_pdf(x, df)
        if pdf > 0.0:
            step = err / pdf
            nxt = x - step
        else:
            nxt = 0.5 * (lo + hi)
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= 1e-15 * max(1.0, x):
            x = nxt
            break
        x = nxt
    return x
