"""Fixed-sample Hoeffding estimator for a Bernoulli mean.

:func:`mean_mc_ber_g` is the functional entry point; :class:`MeanMCBer`
wraps it in the scikit-learn estimator protocol so its hyperparameters can
be inspected, cloned and grid-searched like any other estimator.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_positive_int
from .bounds import n_hoeffding
from .core import (
    DEFAULT_BUDGET,
    BernoulliSource,
    ErrorSpec,
    EstimateReport,
    StreamExhaustedError,
    StreamSource,
    make_error_spec,
)
from .intervals import fixed_width_interval

DEFAULT_BATCH_SIZE = 2**20


@dataclass(frozen=True)
class BatchSchedule:
    """Split of ``min(total, budget)`` draws into batches of ``batch_size``."""

    total: int
    batch_size: int
    budget: int | None = None

    def __post_init__(self):
        check_positive_int(self.total, "total")
        check_positive_int(self.batch_size, "batch_size")
        if self.budget is not None:
            check_positive_int(self.budget, "budget")

    @property
    def draws(self):
        return self.total if self.budget is None else min(self.total, self.budget)

    @property
    def batches(self):
        return -(-self.draws // self.batch_size)

    def __iter__(self):
        full, rest = divmod(self.draws, self.batch_size)
        for _ in range(full):
            yield self.batch_size
        if rest:
            yield rest


def mean_mc_ber_g(source: BernoulliSource, spec: ErrorSpec, budget: int = DEFAULT_BUDGET,
                  batch_size: int = DEFAULT_BATCH_SIZE) -> EstimateReport:
    """Estimate ``p`` to within ``spec.epsilon`` with confidence ``1 - spec.alpha``.

    Draws ``n = ceil(ln(2/alpha) / (2 eps^2))`` samples from ``source`` and
    returns their mean. When ``n`` exceeds ``budget`` exactly ``budget``
    samples are drawn instead, ``budget_capped`` is set, and the report's
    plan carries the tolerance those draws do certify
    (``plan.achievable_epsilon``); the requested guarantee is not claimed.

    Raises
    ------
    StreamExhaustedError
        An external source ran dry. The exception carries the partial counts.
    """
    if not isinstance(spec, ErrorSpec):
        spec = make_error_spec(*spec)
    budget = check_positive_int(budget, "budget")
    batch_size = check_positive_int(batch_size, "batch_size")
    plan = n_hoeffding(spec, budget)
    schedule = BatchSchedule(plan.n, batch_size, budget)

    start = time.monotonic()
    successes = 0
    drawn = 0
    for size in schedule:
        try:
            successes += source.draw(size)
        except StreamExhaustedError as exc:
            # report totals for the whole run, not just the failing batch
            raise StreamExhaustedError(schedule.draws, drawn + exc.available,
                                       successes + exc.successes) from exc
        drawn += size
    elapsed = time.monotonic() - start

    return EstimateReport(
        p_hat=successes / drawn,
        successes=successes,
        n_used=drawn,
        plan=plan,
        budget_capped=plan.exceeds_budget,
        seed=getattr(source, "seed", None),
        wall_time=elapsed,
    )


class MeanMCBer(BaseEstimator):
    """Scikit-learn style wrapper around :func:`mean_mc_ber_g`.

    Parameters
    ----------
    epsilon : float, default=0.01
        Absolute error tolerance.
    alpha : float, default=0.05
        Uncertainty level; the guarantee holds with probability ``1 - alpha``.
    budget : int, default=10**10
        Maximum number of draws.
    batch_size : int, default=2**20
        Draws requested from the source per call.

    Attributes
    ----------
    report_ : EstimateReport
    p_hat_ : float
    n_used_ : int
    n_planned_ : int
    successes_ : int
    budget_capped_ : bool
    """

    def __init__(self, epsilon=0.01, alpha=0.05, budget=DEFAULT_BUDGET,
                 batch_size=DEFAULT_BATCH_SIZE):
        self.epsilon = epsilon
        self.alpha = alpha
        self.budget = budget
        self.batch_size = batch_size

    def fit(self, X, y=None):
        """Run the estimator.

        ``X`` is a :class:`BernoulliSource` or an array of 0/1 draws. Arrays
        are consumed in order and must hold at least as many draws as the
        run needs; extra draws are ignored.
        """
        spec = make_error_spec(self.epsilon, self.alpha)
        source = X if isinstance(X, BernoulliSource) else StreamSource.from_array(X)
        report = mean_mc_ber_g(source, spec, self.budget, self.batch_size)
        self.report_ = report
        self.p_hat_ = report.p_hat
        self.n_used_ = report.n_used
        self.n_planned_ = report.plan.n
        self.successes_ = report.successes
        self.budget_capped_ = report.budget_capped
        return self

    def required_samples(self):
        """Hoeffding sample size for the current parameters (no fitting needed)."""
        return n_hoeffding(make_error_spec(self.epsilon, self.alpha), self.budget).n

    def confidence_interval(self):
        """Fixed-width interval ``p_hat +/- eps`` at the certified tolerance."""
        check_is_fitted(self, "report_")
        r = self.report_
        return fixed_width_interval(r.successes, r.n_used, r.plan.spec.alpha, r.epsilon)

    def predict(self, X=None):
        """Return the estimate, broadcast to ``len(X)`` when X is given."""
        check_is_fitted(self, "report_")
        if X is None:
            return self.p_hat_
        return np.full(len(X), self.p_hat_)
