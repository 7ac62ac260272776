"""Replication, cost-ratio and coverage studies, with CSV writers.

Replication ``i`` of a study seeded with ``s`` draws its (p, eps) pair from
substream ``(s, i, 0)`` and its Bernoulli draws from ``(s, i, 1)``, so rows do
not depend on execution order or on how many workers run them.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields

import numpy as np

from ._validation import (
    check_finite_real,
    check_positive_int,
    check_probability,
    check_range,
    check_seed,
)
from .bounds import n_clt, n_hoeffding, z_critical
from .core import ErrorSpec, SyntheticSource, make_error_spec
from .estimator import DEFAULT_BATCH_SIZE, mean_mc_ber_g
from .intervals import DEFAULT_GRID, exact_coverage

PAPER_LOG10_P = (-3.0, -1.0)
PAPER_LOG10_EPS = (-5.0, -2.0)
PAPER_BUDGET = 10**10
DESK_BUDGET = 10**8

PARAM_STREAM = 0
DRAW_STREAM = 1


@dataclass(frozen=True)
class ReplicationRow:
    replication_index: int
    p_true: float
    epsilon: float
    alpha: float
    n_planned: int
    n_used: int
    budget_capped: bool
    p_hat: float
    error_ratio: float

    @property
    def within_tolerance(self):
        return self.error_ratio <= 1.0


@dataclass(frozen=True)
class RatioRow:
    alpha: float
    ratio_continuous: float
    ratio_exact: float
    reference_epsilon: float


def replication_parameters(seed, index, log10_p_range, log10_eps_range):
    """The (p, eps) pair used by replication ``index``."""
    seq = np.random.SeedSequence(seed, spawn_key=(index, PARAM_STREAM))
    rng = np.random.Generator(np.random.PCG64(seq))
    log_p = rng.uniform(*log10_p_range)
    log_eps = rng.uniform(*log10_eps_range)
    return 10.0 ** log_p, 10.0 ** log_eps


def run_replication(index, seed, alpha, log10_p_range, log10_eps_range, budget,
                    batch_size=DEFAULT_BATCH_SIZE):
    p, eps = replication_parameters(seed, index, log10_p_range, log10_eps_range)
    source = SyntheticSource(p, seed, stream=(index, DRAW_STREAM))
    report = mean_mc_ber_g(source, ErrorSpec(eps, alpha), budget, batch_size)
    return ReplicationRow(
        replication_index=index,
        p_true=p,
        epsilon=eps,
        alpha=alpha,
        n_planned=report.plan.n,
        n_used=report.n_used,
        budget_capped=report.budget_capped,
        p_hat=report.p_hat,
        error_ratio=abs(p - report.p_hat) / eps,
    )


def _run_one(args):
    return run_replication(*args)


def run_replication_study(reps=500, seed=0, alpha=0.05, log10_p_range=PAPER_LOG10_P,
                          log10_eps_range=PAPER_LOG10_EPS, budget=DESK_BUDGET,
                          batch_size=DEFAULT_BATCH_SIZE, n_jobs=1):
    """Run the estimator on ``reps`` log-uniformly drawn (p, eps) pairs.

    Returns one :class:`ReplicationRow` per replication, sorted by index.
    ``n_jobs > 1`` spreads replications over worker processes; the output is
    identical to the sequential run.
    """
    if isinstance(reps, bool) or not isinstance(reps, int) or reps < 1:
        raise ValueError("reps must be >= 1")
    seed = check_seed(seed)
    alpha = check_probability(alpha, "alpha", open_interval=True)
    p_range = check_range(log10_p_range, "log10_p_range")
    eps_range = check_range(log10_eps_range, "log10_eps_range")
    if p_range[1] > 0:
        raise ValueError("log10_p_range must lie at or below 0")
    budget = check_positive_int(budget, "budget")
    n_jobs = check_positive_int(n_jobs, "n_jobs")

    jobs = [(i, seed, alpha, p_range, eps_range, budget, batch_size) for i in range(reps)]
    if n_jobs == 1:
        rows = [_run_one(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            rows = list(pool.map(_run_one, jobs))
    return sorted(rows, key=lambda r: r.replication_index)


def hoeffding_clt_ratio(alpha):
    """Large-sample cost ratio ``2 ln(2/alpha) / z_{alpha/2}``."""
    return 2.0 * math.log(2.0 / alpha) / z_critical(alpha)


def run_ratio_curve(alpha_lo=1e-4, alpha_hi=0.1, points=50, reference_epsilon=1e-3):
    """Hoeffding-to-CLT sample-size ratio on a log-spaced alpha grid.

    ``ratio_exact`` divides the ceilinged sample sizes at
    ``reference_epsilon``; ``ratio_continuous`` is the eps -> 0 limit.
    """
    alpha_lo = check_finite_real(alpha_lo, "alpha_lo")
    alpha_hi = check_finite_real(alpha_hi, "alpha_hi")
    if not 0.0 < alpha_lo < alpha_hi < 1.0:
        raise ValueError("need 0 < alpha_lo < alpha_hi < 1")
    if isinstance(points, bool) or not isinstance(points, int) or points < 2:
        raise ValueError("points must be >= 2")
    reference_epsilon = check_finite_real(reference_epsilon, "reference_epsilon")
    rows = []
    for a in np.geomspace(alpha_lo, alpha_hi, points):
        a = float(a)
        spec = make_error_spec(reference_epsilon, a)
        exact = n_hoeffding(spec).n / n_clt(spec, "paper").n
        rows.append(RatioRow(a, hoeffding_clt_ratio(a), exact, reference_epsilon))
    return rows


def run_coverage_sweep(spec, p_grid=DEFAULT_GRID):
    """Exact coverage of the Hoeffding-sized fixed-width interval for ``spec``."""
    if not isinstance(spec, ErrorSpec):
        spec = make_error_spec(*spec)
    n = n_hoeffding(spec).n
    return exact_coverage(n, spec.epsilon, p_grid, spec.alpha)


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(rows, fh, row_type):
    """Write dataclass rows as CSV with the dataclass field order as header."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow([f.name for f in fields(row_type)])
    for row in rows:
        writer.writerow([_fmt(v) for v in astuple(row)])


def write_replication_csv(rows, fh):
    write_rows(rows, fh, ReplicationRow)


def write_ratio_csv(rows, fh):
    write_rows(rows, fh, RatioRow)


def write_coverage_csv(report, fh):
    """``p,coverage`` rows followed by a trailing ``min_coverage,<value>`` line."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["p", "coverage"])
    for p, c in report.rows():
        writer.writerow([_fmt(p), _fmt(c)])
    writer.writerow(["min_coverage", _fmt(report.min_coverage)])
