"""Evaluation metrics and Welch's two-sided t-test over repeated-seed results."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

# Floor applied to |truth| in the MAPE denominator so near-zero targets
# (humidity, temperature in physical units) cannot blow the metric up.
MAPE_EPSILON = 1e-8


@dataclass(frozen=True)
class MetricsReport:
    """Point-forecast errors in original units; r2 is None when undefined."""

    mse: float
    mae: float
    mape: float
    r2: float | None
    n: int


def compute_metrics(truth, pred) -> MetricsReport:
    """MSE, MAE, MAPE (percent) and R^2 of predictions against the truth.

    R^2 uses the total sum of squares about the truth mean; a constant truth
    leaves it undefined and reported as None rather than a number.
    """
    y = np.asarray(truth, dtype=float)
    yhat = np.asarray(pred, dtype=float)
    if y.ndim != 1 or yhat.ndim != 1 or y.size == 0 or y.size != yhat.size:
        raise InvalidInputError(
            f"truth and predictions must be equal-length non-empty 1-D arrays, "
            f"got {y.shape} and {yhat.shape}"
        )
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(yhat))):
        raise InvalidInputError("metrics require finite truth and predictions")

    err = y - yhat
    mse = float(np.mean(err**2))
    mae = float(np.mean(np.abs(err)))
    mape = float(100.0 * np.mean(np.abs(err) / np.maximum(np.abs(y), MAPE_EPSILON)))
    ss_res = float(np.sum(err**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = None
    else:
        r2 = 1.0 - ss_res / ss_tot
    return MetricsReport(mse=mse, mae=mae, mape=mape, r2=r2, n=int(y.size))


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz iteration)."""
    max_iter = 300
    eps = 1e-16
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        c = 1.0 + aa / c
        if abs(d) < fpmin:
            d = fpmin
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        c = 1.0 + aa / c
        if abs(d) < fpmin:
            d = fpmin
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise InvalidInputError(f"incomplete beta failed to converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), accurate to ~1e-14, via the symmetric continued fraction."""
    if a <= 0 or b <= 0:
        raise InvalidInputError(f"beta parameters must be positive, got a={a}, b={b}")
    if not (0.0 <= x <= 1.0):
        raise InvalidInputError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with df degrees of freedom."""
    if df <= 0:
        raise InvalidInputError(f"degrees of freedom must be positive, got {df}")
    if math.isinf(t):
        return 0.0
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


def welch_t_test(a, b) -> tuple[float, float]:
    """Welch's unequal-variance two-sided t-test; returns (t, p).

    Degenerate samples (both variances zero) yield (0, 1) for equal means and
    (+/-inf, 0) for different means, so deterministic models with identical
    per-seed results still produce a usable verdict.
    """
    xs = np.asarray(a, dtype=float)
    ys = np.asarray(b, dtype=float)
    if xs.size < 2 or ys.size < 2:
        raise InvalidInputError("welch_t_test needs at least 2 observations per sample")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise InvalidInputError("welch_t_test requires finite samples")
    n1, n2 = xs.size, ys.size
    m1, m2 = float(xs.mean()), float(ys.mean())
    v1 = float(xs.var(ddof=1))
    v2 = float(ys.var(ddof=1))
    se2 = v1 / n1 + v2 / n2
    if se2 == 0.0:
        if m1 == m2:
            return 0.0, 1.0
        return math.copysign(math.inf, m1 - m2), 0.0
    t = (m1 - m2) / math.sqrt(se2)
    df = se2**2 / ((v1 / n1) ** 2 / (n1 - 1) + (v2 / n2) ** 2 / (n2 - 1))
    return t, student_t_two_sided_p(t, df)
