"""Binomial proportion intervals and the exact binomial coverage oracle.

The coverage routines never simulate: every probability is a direct sum of
binomial pmf terms. Membership tests such as ``|k/n - p| <= eps`` are done on
the exact rational values of the float inputs, so boundary outcomes are never
lost to rounding (``|49/100 - 0.5| <= 0.01`` holds here, unlike in floats).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import (
    check_counts,
    check_finite_real,
    check_p_grid,
    check_positive_int,
    check_probability,
)
from .bounds import z_critical
from .core import IntervalEstimate, IntervalMethod, achievable_epsilon

LOG_SPACE_THRESHOLD = 10**5
DEFAULT_GRID = tuple(round(0.01 * i, 2) for i in range(1, 100))
CP_TOLERANCE = 1e-10


def binom_pmf_row(n, p):
    """Full Binomial(n, p) pmf as an array of length ``n + 1``.

    Terms are built outward from the mode with the ratio
    ``f(k+1)/f(k) = (n-k)/(k+1) * p/(1-p)`` and normalised, so nothing
    overflows and tail terms underflow gracefully to zero. Above
    ``LOG_SPACE_THRESHOLD`` trials the ratios are accumulated as logs.
    """
    n = check_positive_int(n, "n")
    p = check_probability(p, "p")
    row = np.zeros(n + 1)
    if p == 0.0:
        row[0] = 1.0
        return row
    if p == 1.0:
        row[n] = 1.0
        return row

    q = 1.0 - p
    mode = min(int(math.floor((n + 1) * p)), n)
    k_up = np.arange(mode, n, dtype=float)  # f(k+1)/f(k) for k = mode..n-1
    up = (n - k_up) / (k_up + 1.0) * (p / q)
    k_dn = np.arange(mode, 0, -1, dtype=float)  # f(k-1)/f(k) for k = mode..1
    down = k_dn / (n - k_dn + 1.0) * (q / p)

    row[mode] = 1.0
    if n > LOG_SPACE_THRESHOLD:
        with np.errstate(divide="ignore"):
            row[mode + 1:] = np.exp(np.cumsum(np.log(up)))
            row[:mode] = np.exp(np.cumsum(np.log(down)))[::-1]
    else:
        row[mode + 1:] = np.cumprod(up)
        row[:mode] = np.cumprod(down)[::-1]
    return row / math.fsum(row)


def binom_cdf(k, n, p):
    """Pr(Bin(n, p) <= k)."""
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    return min(1.0, math.fsum(binom_pmf_row(n, p)[: k + 1]))


def binom_sf_inclusive(k, n, p):
    """Pr(Bin(n, p) >= k)."""
    if k <= 0:
        return 1.0
    if k > n:
        return 0.0
    return min(1.0, math.fsum(binom_pmf_row(n, p)[k:]))


def _window(n, p, epsilon):
    """Integer range [lo, hi] of k with |k/n - p| <= eps, exactly."""
    pf, ef = Fraction(p), Fraction(epsilon)
    lo = math.ceil(n * (pf - ef))
    hi = math.floor(n * (pf + ef))
    return max(lo, 0), min(hi, n)


def coverage_at(n, p, epsilon):
    """Pr(|p_hat_n - p| <= eps) by direct summation."""
    lo, hi = _window(n, p, epsilon)
    if lo > hi:
        return 0.0
    if lo == 0 and hi == n:
        return 1.0
    return min(1.0, math.fsum(binom_pmf_row(n, p)[lo:hi + 1]))


def exact_two_sided_tail(n, p, epsilon):
    """Pr(|p_hat_n - p| >= eps) by direct summation of both tails."""
    n = check_positive_int(n, "n")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    pf, ef = Fraction(p), Fraction(epsilon)
    below = math.floor(n * (pf - ef))  # k <= below  <=>  p - k/n >= eps
    above = math.ceil(n * (pf + ef))  # k >= above  <=>  k/n - p >= eps
    row = binom_pmf_row(n, p)
    terms = []
    if below >= 0:
        terms.append(math.fsum(row[: min(below, n) + 1]))
    if above <= n:
        terms.append(math.fsum(row[max(above, 0):]))
    return math.fsum(terms)


@dataclass(frozen=True)
class CoverageReport:
    n: int
    epsilon: float
    alpha: float
    p_grid: tuple
    coverage: tuple
    min_coverage: float

    @property
    def argmin_p(self):
        return self.p_grid[int(np.argmin(self.coverage))]

    @property
    def guaranteed(self):
        return self.min_coverage >= 1.0 - self.alpha

    def rows(self):
        return list(zip(self.p_grid, self.coverage))


def exact_coverage(n, epsilon, p_grid=DEFAULT_GRID, alpha=0.05) -> CoverageReport:
    """Exact coverage of the fixed-width interval ``p_hat_n +/- eps`` over ``p_grid``."""
    n = check_positive_int(n, "n")
    epsilon = check_finite_real(epsilon, "epsilon")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    alpha = check_probability(alpha, "alpha", open_interval=True)
    grid = tuple(float(p) for p in check_p_grid(p_grid))
    cov = tuple(coverage_at(n, p, epsilon) for p in grid)
    return CoverageReport(n, epsilon, alpha, grid, cov, min(cov))


def wald_interval(successes, n, alpha) -> IntervalEstimate:
    """Normal-approximation interval ``p_hat +/- z sqrt(p_hat (1 - p_hat) / n)``.

    Collapses to a single point when ``successes`` is 0 or ``n``.
    """
    successes, n = check_counts(successes, n)
    alpha = check_probability(alpha, "alpha", open_interval=True)
    z = z_critical(alpha)
    point = successes / n
    half = z * math.sqrt(point * (1.0 - point) / n)
    return IntervalEstimate(max(0.0, point - half), min(1.0, point + half), point,
                            IntervalMethod.WALD, alpha)


def adjusted_wald_interval(successes, n, alpha, variant="paper") -> IntervalEstimate:
    """Wald interval after adding pseudo-counts of successes and failures.

    ``variant="paper"`` adds z/2 of each (point ``(k + z/2)/(n + z)``);
    ``variant="standard"`` is the Agresti-Coull form with z^2/2 of each.
    """
    successes, n = check_counts(successes, n)
    alpha = check_probability(alpha, "alpha", open_interval=True)
    z = z_critical(alpha)
    if variant == "paper":
        pseudo, method = z, IntervalMethod.ADJUSTED_WALD
    elif variant == "standard":
        pseudo, method = z * z, IntervalMethod.ADJUSTED_WALD_STANDARD
    else:
        raise ValueError(f"variant must be 'paper' or 'standard', got {variant!r}")
    n_tilde = n + pseudo
    point = (successes + pseudo / 2.0) / n_tilde
    half = z * math.sqrt(point * (1.0 - point) / n_tilde)
    return IntervalEstimate(max(0.0, point - half), min(1.0, point + half), point, method, alpha)


def _bisect_decreasing(f, target, tol):
    """Root of f(p) = target for f decreasing on [0, 1]."""
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def clopper_pearson_interval(successes, n, alpha, tol=CP_TOLERANCE) -> IntervalEstimate:
    """Exact tail-inversion interval.

    The lower end solves ``Pr(Bin(n, p) >= k) = alpha/2`` and the upper end
    ``Pr(Bin(n, p) <= k) = alpha/2``, each by bisection on the exact binomial
    distribution to absolute tolerance ``tol``.
    """
    successes, n = check_counts(successes, n)
    alpha = check_probability(alpha, "alpha", open_interval=True)
    target = alpha / 2.0
    point = successes / n
    if successes == 0:
        lower = 0.0
    else:
        # Pr(X >= k) increases in p, so its negation decreases
        lower = _bisect_decreasing(lambda p: -binom_sf_inclusive(successes, n, p), -target, tol)
    if successes == n:
        upper = 1.0
    else:
        upper = _bisect_decreasing(lambda p: binom_cdf(successes, n, p), target, tol)
    lower, upper = min(lower, point), max(upper, point)
    return IntervalEstimate(lower, upper, point, IntervalMethod.CLOPPER_PEARSON, alpha)


def fixed_width_interval(successes, n, alpha, epsilon=None) -> IntervalEstimate:
    """``p_hat +/- eps`` clamped to [0, 1].

    If ``epsilon`` is omitted the tolerance that Hoeffding's inequality
    certifies for ``n`` draws at level ``alpha`` is used.
    """
    successes, n = check_counts(successes, n)
    alpha = check_probability(alpha, "alpha", open_interval=True)
    if epsilon is None:
        epsilon = achievable_epsilon(alpha, n)
    point = successes / n
    return IntervalEstimate(max(0.0, point - epsilon), min(1.0, point + epsilon), point,
                            IntervalMethod.HOEFFDING_FIXED_WIDTH, alpha)


_METHODS = {
    "wald": wald_interval,
    "adjusted_wald": adjusted_wald_interval,
    "adjusted_wald_standard": lambda k, n, a: adjusted_wald_interval(k, n, a, "standard"),
    "clopper_pearson": clopper_pearson_interval,
    "hoeffding_fixed_width": fixed_width_interval,
}


def interval(method, successes, n, alpha):
    """Dispatch to an interval rule by name (dashes or underscores)."""
    key = str(getattr(method, "value", method)).replace("-", "_")
    try:
        fn = _METHODS[key]
    except KeyError:
        raise ValueError(f"unknown interval method {method!r}") from None
    return fn(successes, n, alpha)


def interval_coverage(method, n, alpha, p_grid=DEFAULT_GRID) -> CoverageReport:
    """Exact coverage of a per-sample interval rule.

    For each p, sums ``Pr(Bin(n, p) = k)`` over the outcomes k whose interval
    contains p. ``epsilon`` in the report is the largest half-width seen.
    """
    n = check_positive_int(n, "n")
    alpha = check_probability(alpha, "alpha", open_interval=True)
    grid = tuple(float(p) for p in check_p_grid(p_grid))
    cis = [interval(method, k, n, alpha) for k in range(n + 1)]
    lows = np.array([ci.lower for ci in cis])
    highs = np.array([ci.upper for ci in cis])
    cov = []
    for p in grid:
        row = binom_pmf_row(n, p)
        inside = (lows <= p) & (p <= highs)
        cov.append(min(1.0, math.fsum(row[inside])))
    half = float(np.max(highs - lows)) / 2.0
    return CoverageReport(n, half, alpha, grid, tuple(cov), min(cov))
