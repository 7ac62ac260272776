"""Command-line interface: ``bernoulli-mc <subcommand> ...``.

Exit codes: 0 success, 2 invalid arguments, 3 unrepresentable sample size,
4 stream parse or exhaustion error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import sys

from . import bounds, experiments, intervals
from .core import (
    DEFAULT_BUDGET,
    StreamExhaustedError,
    StreamParseError,
    StreamSource,
    SyntheticSource,
    UnrepresentableSampleSize,
    make_error_spec,
)
from .estimator import DEFAULT_BATCH_SIZE, mean_mc_ber_g

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNREPRESENTABLE = 3
EXIT_STREAM = 4

ESTIMATE_COLUMNS = ["p_hat", "successes", "n_used", "n_planned", "epsilon", "alpha", "budget",
                    "budget_capped", "achievable_epsilon", "seed", "wall_time"]


def _int(text):
    """Integer argument that also accepts exact float spellings like 1e10."""
    try:
        return int(text)
    except ValueError:
        value = float(text)
        if not value.is_integer():
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        return int(value)


def _pair(text):
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None


def _grid(text):
    try:
        lo, hi, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:step, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("grid needs step > 0 and lo <= hi")
    count = int(round((hi - lo) / step)) + 1
    return [round(lo + i * step, 12) for i in range(count)]


@contextlib.contextmanager
def _open_out(path):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bernoulli-mc",
        description="Guaranteed fixed-width Monte Carlo estimation of Bernoulli probabilities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("samplesize", help="sample size for a tolerance and confidence level")
    p.add_argument("--method", required=True,
                   choices=["hoeffding", "chebyshev", "clt-paper", "clt-standard"])
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--budget", type=_int, default=DEFAULT_BUDGET)

    p = sub.add_parser("estimate", help="estimate p from a seeded source or stdin")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--seed", type=_int)
    p.add_argument("--stdin", action="store_true",
                   help="read whitespace-separated 0/1 draws from standard input")
    p.add_argument("--budget", type=_int, default=DEFAULT_BUDGET)
    p.add_argument("--batch", type=_int, default=DEFAULT_BATCH_SIZE)

    p = sub.add_parser("tailbound", help="Hoeffding bound 2 exp(-2 n eps^2)")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--eps", type=float, required=True)

    p = sub.add_parser("interval", help="binomial proportion interval")
    p.add_argument("--method", required=True,
                   choices=["wald", "adjusted-wald", "adjusted-wald-standard", "clopper-pearson"])
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--successes", type=_int, required=True)
    p.add_argument("--alpha", type=float, required=True)

    p = sub.add_parser("coverage", help="exact coverage of the Hoeffding-sized interval")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--grid", type=_grid, default=list(intervals.DEFAULT_GRID),
                   help="p grid as lo:hi:step (default 0.01:0.99:0.01)")

    p = sub.add_parser("replicate", help="replication study over log-uniform (p, eps)")
    p.add_argument("--reps", type=_int, required=True)
    p.add_argument("--seed", type=_int, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--log10p", type=_pair, default=experiments.PAPER_LOG10_P)
    p.add_argument("--log10eps", type=_pair, default=experiments.PAPER_LOG10_EPS)
    p.add_argument("--budget", type=_int, default=experiments.DESK_BUDGET)
    p.add_argument("--jobs", type=_int, default=1)
    p.add_argument("--out", required=True, help="output CSV path, or - for stdout")

    p = sub.add_parser("ratio", help="Hoeffding/CLT cost ratio over alpha")
    p.add_argument("--alpha-lo", type=float, required=True)
    p.add_argument("--alpha-hi", type=float, required=True)
    p.add_argument("--points", type=_int, required=True)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--out", required=True, help="output CSV path, or - for stdout")
    return parser


def _cmd_samplesize(args, out):
    spec = make_error_spec(args.eps, args.alpha)
    plan = bounds.sample_size(spec, args.method, args.budget)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["method", "epsilon", "alpha", "n", "budget", "exceeds_budget"])
    w.writerow([args.method, repr(spec.epsilon), repr(spec.alpha), plan.n, plan.budget,
                str(plan.exceeds_budget).lower()])


def _cmd_estimate(args, out):
    spec = make_error_spec(args.eps, args.alpha)
    if args.stdin:
        if args.p is not None or args.seed is not None:
            raise ValueError("--stdin cannot be combined with --p/--seed")
        source = StreamSource(sys.stdin.buffer)
    else:
        if args.p is None or args.seed is None:
            raise ValueError("either --stdin or both --p and --seed are required")
        source = SyntheticSource(args.p, args.seed)
    report = mean_mc_ber_g(source, spec, args.budget, args.batch)
    eps_budget = report.plan.achievable_epsilon
    w = csv.writer(out, lineterminator="\n")
    w.writerow(ESTIMATE_COLUMNS)
    w.writerow([
        repr(report.p_hat), report.successes, report.n_used, report.plan.n,
        repr(spec.epsilon), repr(spec.alpha), report.plan.budget,
        str(report.budget_capped).lower(),
        "" if eps_budget is None else repr(eps_budget),
        "" if report.seed is None else report.seed,
        f"{report.wall_time:.6f}",
    ])


def _cmd_tailbound(args, out):
    print(repr(bounds.hoeffding_tail(args.n, args.eps).two_sided_bound), file=out)


def _cmd_interval(args, out):
    ci = intervals.interval(args.method, args.successes, args.n, args.alpha)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["lower", "point", "upper"])
    w.writerow([repr(ci.lower), repr(ci.point), repr(ci.upper)])


def _cmd_coverage(args, out):
    spec = make_error_spec(args.eps, args.alpha)
    report = experiments.run_coverage_sweep(spec, args.grid)
    experiments.write_coverage_csv(report, out)


def _cmd_replicate(args, out):
    rows = experiments.run_replication_study(
        reps=args.reps, seed=args.seed, alpha=args.alpha, log10_p_range=args.log10p,
        log10_eps_range=args.log10eps, budget=args.budget, n_jobs=args.jobs,
    )
    with _open_out(args.out) as fh:
        experiments.write_replication_csv(rows, fh)


def _cmd_ratio(args, out):
    rows = experiments.run_ratio_curve(args.alpha_lo, args.alpha_hi, args.points, args.eps)
    with _open_out(args.out) as fh:
        experiments.write_ratio_csv(rows, fh)


COMMANDS = {
    "samplesize": _cmd_samplesize,
    "estimate": _cmd_estimate,
    "tailbound": _cmd_tailbound,
    "interval": _cmd_interval,
    "coverage": _cmd_coverage,
    "replicate": _cmd_replicate,
    "ratio": _cmd_ratio,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        COMMANDS[args.command](args, sys.stdout)
    except UnrepresentableSampleSize as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREPRESENTABLE
    except (StreamParseError, StreamExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STREAM
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
