"""Exit criteria for the package, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v``; a PASS/FAIL line per
criterion is printed in the terminal summary.
"""

import math
import warnings

import pytest

from bernoulli_mc import (
    SyntheticSource,
    clopper_pearson_interval,
    adjusted_wald_interval,
    exact_coverage,
    exact_two_sided_tail,
    hoeffding_tail,
    make_error_spec,
    mean_mc_ber_g,
    n_chebyshev,
    n_clt,
    n_hoeffding,
    normal_cdf,
    normal_quantile,
    run_replication_study,
    wald_interval,
)
from bernoulli_mc.cli import main
from bernoulli_mc.experiments import hoeffding_clt_ratio, run_ratio_curve
from bernoulli_mc.intervals import DEFAULT_GRID, binom_pmf_row

REPLICATION_SEED = 1


def test_ac1_sample_size_fidelity(criterion):
    criterion("AC1 sample-size fidelity (exact integers)")
    spec_coarse = make_error_spec(0.1, 0.05)
    spec_fine = make_error_spec(0.01, 0.05)
    assert n_hoeffding(spec_coarse).n == 185
    assert n_hoeffding(spec_fine).n == 18445
    assert n_chebyshev(spec_fine).n == 50000
    assert n_clt(spec_fine, "paper").n == 4900
    assert n_clt(spec_fine, "standard").n == 9604


def test_ac2_guarantee_by_exact_oracle(criterion):
    criterion("AC2 exact coverage >= 1 - alpha on the (eps, alpha) grid")
    for eps in (0.5, 0.2, 0.1, 0.05):
        for alpha in (0.2, 0.1, 0.05, 0.01):
            spec = make_error_spec(eps, alpha)
            n = n_hoeffding(spec).n
            # summation accuracy of the oracle rows backs the comparison
            for p in (0.01, 0.5, 0.99):
                assert abs(math.fsum(binom_pmf_row(n, p)) - 1.0) <= 1e-12
            report = exact_coverage(n, eps, DEFAULT_GRID, alpha)
            assert report.min_coverage >= 1 - alpha, (eps, alpha, n, report.argmin_p)


def test_ac3_hoeffding_dominates_exact_tails(criterion):
    criterion("AC3 exact two-sided tail <= 2 exp(-2 n eps^2)")
    ps = [round(0.05 * i, 2) for i in range(1, 20)]
    for eps in (0.05, 0.1, 0.2):
        for n in range(1, 201):
            bound = hoeffding_tail(n, eps).two_sided_bound
            for p in ps:
                assert exact_two_sided_tail(n, p, eps) <= bound, (n, p, eps)


def test_ac4_cost_ratio_range(criterion):
    criterion("AC4 cost ratio 3.64 at alpha=0.1, 5.09 at alpha=1e-4, curve in [3.60, 5.15]")
    assert hoeffding_clt_ratio(0.1) == pytest.approx(3.64, abs=0.01)
    assert hoeffding_clt_ratio(1e-4) == pytest.approx(5.09, abs=0.01)
    rows = run_ratio_curve(1e-4, 1e-1, 500)
    vals = [r.ratio_continuous for r in rows]
    assert 3.60 <= min(vals) and max(vals) <= 5.15


def test_ac5_replication_study(criterion):
    criterion("AC5 500-replication study: >= 95% of uncapped runs within eps; cap threshold exact")
    budget = 10**8
    rows = run_replication_study(reps=500, seed=REPLICATION_SEED, alpha=0.05,
                                 log10_p_range=(-3, -1), log10_eps_range=(-5, -2), budget=budget)
    assert len(rows) == 500
    uncapped = [r for r in rows if not r.budget_capped]
    within = sum(r.error_ratio <= 1 for r in uncapped)
    if within < len(uncapped):
        warnings.warn(f"{len(uncapped) - within} of {len(uncapped)} uncapped replications "
                      f"missed the tolerance")
    assert within / len(uncapped) >= 0.95
    threshold = math.sqrt(math.log(40) / (2 * budget))
    for r in rows:
        assert r.budget_capped == (r.epsilon <= threshold), r


def test_ac6_budget_threshold(criterion):
    criterion("AC6 with budget 1e10, alpha 0.05: exceeds budget iff eps <= 3.69e-5")
    threshold = 3.69e-5
    spec_at = make_error_spec(threshold, 0.05)
    spec_above = make_error_spec(math.nextafter(threshold, 1.0), 0.05)
    plan = n_hoeffding(spec_at, budget=10**10)
    assert plan.exceeds_budget, (
        f"n_hoeffding(3.69e-5, 0.05) = {plan.n} <= 1e10; the budget binds only below "
        f"sqrt(ln(40) / 2e10) = {math.sqrt(math.log(40) / 2e10):.6g}"
    )
    assert not n_hoeffding(spec_above, budget=10**10).exceeds_budget


def test_ac7_quantile_accuracy(criterion):
    criterion("AC7 normal quantile round-trip <= 1e-9; z(0.975) = 1.959964 +/- 1e-6")
    for q in (0.51, 0.9, 0.95, 0.975, 0.995, 0.9995, 1 - 5e-6):
        assert abs(normal_cdf(normal_quantile(q)) - q) <= 1e-9
    assert normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)


def test_ac8_determinism(criterion, tmp_path, capsys):
    criterion("AC8 replicate CSV byte-identical; estimate invariant to batch size")
    paths = [tmp_path / "first.csv", tmp_path / "second.csv"]
    for path in paths:
        code = main(["replicate", "--reps", "50", "--seed", "2016", "--budget", "1000000",
                     "--out", str(path)])
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()

    spec = make_error_spec(1e-3, 0.05)
    reports = [mean_mc_ber_g(SyntheticSource(0.3, 5), spec, budget=10**5, batch_size=b)
               for b in (1, 17, 2**20)]
    assert reports[0].n_used == 10**5
    assert reports[0] == reports[1] == reports[2]
    capsys.readouterr()


def test_ac9_interval_sanity(criterion):
    criterion("AC9 Clopper-Pearson / Wald / adjusted-Wald reference cases")
    cp = clopper_pearson_interval(0, 10, 0.05)
    assert abs(cp.upper - (1 - 0.025**0.1)) <= 1e-8
    w = wald_interval(0, 10, 0.05)
    assert (w.lower, w.upper) == (0.0, 0.0)
    assert adjusted_wald_interval(5, 10, 0.05).point == 0.5
