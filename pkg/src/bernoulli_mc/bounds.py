"""Closed-form sample sizes for fixed-width Bernoulli confidence intervals.

All four rules bound var(Y) = p(1 - p) by 1/4:

==============  ====================================
hoeffding       ceil(ln(2/alpha) / (2 eps^2))
chebyshev       ceil(1 / (4 alpha eps^2))
clt_paper       ceil(z / (4 eps^2))
clt_standard    ceil(z^2 / (4 eps^2))
==============  ====================================

where z is the 1 - alpha/2 standard normal quantile. The real value is
evaluated in 50-digit decimal arithmetic from the exact binary values of the
float inputs before taking the ceiling.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass

from ._validation import check_finite_real, check_positive_int
from .core import (
    DEFAULT_BUDGET,
    MAX_SAMPLE_SIZE,
    ErrorSpec,
    Method,
    SampleSizePlan,
    UnrepresentableSampleSize,
    achievable_epsilon,
)

VARIANCE_BOUND = 0.25

_CTX = decimal.Context(prec=50, rounding=decimal.ROUND_HALF_EVEN)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Acklam's rational approximation, refined by one Halley step below.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def normal_cdf(x):
    """Standard normal CDF, computed as erfc(-x / sqrt 2) / 2."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_sf(x):
    """Upper tail 1 - Phi(x), accurate for large positive x."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def _acklam(q):
    if q < _P_LOW:
        r = math.sqrt(-2.0 * math.log(q))
        return (((((_C[0] * r + _C[1]) * r + _C[2]) * r + _C[3]) * r + _C[4]) * r + _C[5]) / \
               ((((_D[0] * r + _D[1]) * r + _D[2]) * r + _D[3]) * r + 1.0)
    if q > 1.0 - _P_LOW:
        r = math.sqrt(-2.0 * math.log1p(-q))
        return -(((((_C[0] * r + _C[1]) * r + _C[2]) * r + _C[3]) * r + _C[4]) * r + _C[5]) / \
                ((((_D[0] * r + _D[1]) * r + _D[2]) * r + _D[3]) * r + 1.0)
    s = q - 0.5
    r = s * s
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * s / \
           (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)


def normal_quantile(q):
    """Inverse of the standard normal CDF on (0, 1)."""
    q = check_finite_real(q, "q")
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0,1), got {q}")
    if q == 0.5:
        return 0.0
    x = _acklam(q)
    for _ in range(2):
        # residual taken on the smaller tail to avoid cancellation
        if q > 0.5:
            e = normal_sf(x) - (1.0 - q)
            e = -e
        else:
            e = normal_cdf(x) - q
        u = e * _SQRT_2PI * math.exp(0.5 * x * x)
        x = x - u / (1.0 + 0.5 * x * u)
    return x


def z_critical(alpha):
    """Two-sided critical value z_{alpha/2} = Phi^{-1}(1 - alpha/2)."""
    return normal_quantile(1.0 - alpha / 2.0)


def _dec(x):
    return decimal.Decimal(float(x))


def _ceil_count(value, method):
    """Ceil a positive Decimal to an int, rejecting unrepresentable counts."""
    if value > MAX_SAMPLE_SIZE:
        raise UnrepresentableSampleSize(method.value, float(value))
    n = int(value.to_integral_value(rounding=decimal.ROUND_CEILING))
    return max(n, 1)


def _plan(n, method, spec, budget):
    budget = check_positive_int(budget, "budget")
    exceeds = n > budget
    eps_budget = achievable_epsilon(spec.alpha, budget) if exceeds else None
    return SampleSizePlan(n, method, spec, exceeds, budget, eps_budget)


def hoeffding_size_real(spec):
    """ln(2/alpha) / (2 eps^2) as a 50-digit Decimal, before the ceiling."""
    with decimal.localcontext(_CTX):
        eps = _dec(spec.epsilon)
        return (2 / _dec(spec.alpha)).ln() / (2 * eps * eps)


def n_hoeffding(spec: ErrorSpec, budget: int = DEFAULT_BUDGET) -> SampleSizePlan:
    """Sample size for which Hoeffding's inequality guarantees the tolerance.

    With ``n = ceil(ln(2/alpha) / (2 eps^2))`` draws,
    ``Pr(|p_hat - p| <= eps) >= 1 - alpha`` for every p.
    """
    with decimal.localcontext(_CTX):
        n = _ceil_count(hoeffding_size_real(spec), Method.HOEFFDING)
    return _plan(n, Method.HOEFFDING, spec, budget)


def n_chebyshev(spec: ErrorSpec, budget: int = DEFAULT_BUDGET) -> SampleSizePlan:
    with decimal.localcontext(_CTX):
        eps = _dec(spec.epsilon)
        value = 1 / (4 * _dec(spec.alpha) * eps * eps)
        n = _ceil_count(value, Method.CHEBYSHEV)
    return _plan(n, Method.CHEBYSHEV, spec, budget)


def n_clt(spec: ErrorSpec, variant: str = "paper", budget: int = DEFAULT_BUDGET) -> SampleSizePlan:
    """CLT sample size with var(Y) bounded by 1/4.

    ``variant="paper"`` uses ``ceil(z / (4 eps^2))``, the form that reproduces
    the published Hoeffding/CLT cost ratios. ``variant="standard"`` is the
    textbook ``ceil(z^2 / (4 eps^2))``. Neither carries a finite-sample
    guarantee.
    """
    variant = variant.replace("-", "_")
    if variant in ("paper", "clt_paper"):
        method, power = Method.CLT_PAPER, 1
    elif variant in ("standard", "clt_standard"):
        method, power = Method.CLT_STANDARD, 2
    else:
        raise ValueError(f"variant must be 'paper' or 'standard', got {variant!r}")
    z = z_critical(spec.alpha)
    with decimal.localcontext(_CTX):
        eps = _dec(spec.epsilon)
        value = _dec(z) ** power / (4 * eps * eps)
        n = _ceil_count(value, method)
    return _plan(n, method, spec, budget)


def sample_size(spec, method, budget=DEFAULT_BUDGET):
    """Dispatch on a :class:`Method` or its string name (dashes allowed)."""
    method = Method(str(getattr(method, "value", method)).replace("-", "_"))
    if method is Method.HOEFFDING:
        return n_hoeffding(spec, budget)
    if method is Method.CHEBYSHEV:
        return n_chebyshev(spec, budget)
    if method is Method.CLT_PAPER:
        return n_clt(spec, "paper", budget)
    return n_clt(spec, "standard", budget)


def budget_threshold_epsilon(alpha, budget=DEFAULT_BUDGET):
    """Tolerance at or below which the Hoeffding size would exceed ``budget``.

    n_hoeffding exceeds the budget exactly when ``eps`` is below this value
    (up to rounding on the boundary).
    """
    return achievable_epsilon(alpha, budget)


@dataclass(frozen=True)
class TailBound:
    n: int
    epsilon: float
    two_sided_bound: float

    @property
    def one_sided_bound(self):
        return self.two_sided_bound / 2.0


def hoeffding_tail(n, epsilon) -> TailBound:
    """Hoeffding's bound ``2 exp(-2 n eps^2)`` on ``Pr(|p_hat - p| >= eps)``.

    Values above 1 are returned as is; this is a bound, not a probability.
    """
    n = check_positive_int(n, "n")
    epsilon = check_finite_real(epsilon, "epsilon")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    with decimal.localcontext(_CTX):
        eps = _dec(epsilon)
        bound = 2 * (-2 * n * eps * eps).exp()
    return TailBound(n, epsilon, float(bound))
