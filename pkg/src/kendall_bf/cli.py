"""Command-line front end.

Exit codes: 0 on success, 1 when a computation fails (degenerate prior,
quadrature or root-finding failure), 2 for bad input or usage.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .bayes_factor import TestSpec, bf_report
from .dataio import (
    InputError,
    dataclass_rows,
    dumps_json,
    parse_config,
    parse_number_list,
    read_paired_csv,
    render_csv,
    write_text,
)
from .elicitation import PowerSpec, elicit, hyperparameter_curves, required_sample_size
from .errors import DomainError, KendallBFError
from .experiments import (
    RateSpec,
    SimulationPlan,
    bf_grid_for_data,
    comparison_sweep,
    consistency_trajectory,
    rejection_sweep,
)
from .rank_stats import PairedSample, kendall_summary, p_value, t_star_from_tau

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2

SWEEP_COLUMNS = ("n", "tau", "lambda", "kappa", "rejection_rate",
                 "mean_log_bf", "median_log_bf", "replicates")
SWEEP_FIELDS = ("n", "tau", "lambda_n", "kappa_n", "rejection_rate",
                "mean_log_bf", "median_log_bf", "replicates")
COMPARE_COLUMNS = ("n", "tau", "lambda", "kappa", "rate_tnorm", "rate_pvalue",
                   "rate_yuan_johnson", "replicates")
COMPARE_FIELDS = ("n", "tau", "lambda_n", "kappa_n", "rate_tnorm", "rate_pvalue",
                  "rate_yuan_johnson", "replicates")


class UsageError(KendallBFError):
    pass


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _count(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _prior_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tau0", type=float, default=0.0, help="null value of tau (default 0)")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0,
                   help="prior mean of the shift tau - tau0 (default 0)")
    p.add_argument("--kappa", type=_positive, default=1.0, help="prior sd of the shift (default 1)")
    p.add_argument("--threshold", type=_positive, default=1.0,
                   help="reject H0 when BF01 is below this (default 1)")


def _format_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json")
    g.add_argument("--text", dest="fmt", action="store_const", const="text")
    p.set_defaults(fmt="text")


def _bf_fields(t: float, n: int, args) -> dict[str, Any]:
    spec = TestSpec.make(args.tau0, args.lam, args.kappa)
    rep = bf_report(t, n, spec, args.threshold)
    return {
        "tau0": args.tau0,
        "lambda": args.lam,
        "kappa": args.kappa,
        "threshold": args.threshold,
        "log_bf01": rep.log_bf01,
        "bf01": rep.bf01,
        "bf10": math.exp(-rep.log_bf01) if -rep.log_bf01 < 709 else math.inf,
        "decision": rep.decision.value,
        "mu_n": rep.mu_n,
        "sigma_n": rep.sigma_n,
        "leading_factor": rep.leading_factor,
        "exponent": rep.exponent,
        "prior_mass": rep.prior_mass,
        "posterior_mass": rep.posterior_mass,
        "log_prior_mass": rep.log_prior_mass,
        "log_posterior_mass": rep.log_posterior_mass,
    }


def _render_report(report: dict[str, Any], fmt: str, title: str) -> str:
    if fmt == "json":
        return dumps_json(report)
    width = max(len(k) for k in report)
    lines = [title, "-" * len(title)]
    for k, v in report.items():
        if v is None:
            continue
        if isinstance(v, float):
            v = format(v, ".6g")
        lines.append(f"{k.ljust(width)}  {v}")
    return "\n".join(lines) + "\n"


def cmd_test(args) -> int:
    data = read_paired_csv(args.file, args.col_x, args.col_y)
    summary = kendall_summary(PairedSample(data.xs, data.ys), args.tau0)
    report = {
        "file": str(args.file),
        "col_x": data.col_x,
        "col_y": data.col_y,
        "dropped_rows": data.dropped,
        "n": summary.n,
        "s": summary.s,
        "tau_hat": summary.tau_hat,
        "t_star": summary.t_star,
        "p_value": summary.p_value,
    }
    report.update(_bf_fields(summary.t_star, summary.n, args))
    write_text(None, _render_report(report, args.fmt, "Kendall tau Bayes factor test"))
    return EXIT_OK


def cmd_bf(args) -> int:
    if args.n < 2:
        raise UsageError(f"--n must be at least 2, got {args.n}")
    if args.tau_hat is not None:
        t = t_star_from_tau(args.tau_hat, args.n, args.tau0)
    else:
        t = args.t_star
    report = {
        "n": args.n,
        "s": None,
        "tau_hat": args.tau_hat,
        "t_star": t,
        "p_value": float(p_value(t)),
    }
    report.update(_bf_fields(t, args.n, args))
    write_text(None, _render_report(report, args.fmt, "Kendall tau Bayes factor (summary input)"))
    return EXIT_OK


def cmd_elicit(args) -> int:
    p = args.wrong_dir_prob
    if p is not None and not 0.0 < p < 0.5:
        raise UsageError(f"--wrong-dir-prob must lie in (0, 0.5), got {p}")
    spec = PowerSpec(args.alpha, args.power, args.tau0)
    prior = elicit(args.n, spec, p)
    report = {
        "n": args.n,
        "alpha": args.alpha,
        "power": args.power,
        "tau0": args.tau0,
        "lambda_n": prior.lambda_n,
    }
    if p is not None:
        report["wrong_dir_prob"] = p
        report["kappa_n"] = prior.kappa_n
    write_text(None, _render_report(report, args.fmt, "Elicited truncated normal prior"))
    return EXIT_OK


def cmd_sample_size(args) -> int:
    spec = PowerSpec(args.alpha, args.power, args.tau0)
    n = required_sample_size(spec, args.tau1)
    report = {
        "tau0": args.tau0,
        "tau1": args.tau1,
        "alpha": args.alpha,
        "power": args.power,
        "n": n,
        "n_ceil": math.ceil(n) if math.isfinite(n) else None,
    }
    write_text(None, _render_report(report, args.fmt, "Required sample size"))
    return EXIT_OK


def _load_plan(path: str, args) -> SimulationPlan:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    cfg = parse_config(text, source=str(path))
    for key in ("n_values", "tau_grid"):
        if key not in cfg:
            raise InputError(f"{path}: missing required config key {key!r}")
    if args.seed is not None:
        cfg["seed"] = args.seed
    return SimulationPlan(**cfg)


def cmd_sweep(args) -> int:
    plan = _load_plan(args.config, args)
    rows = rejection_sweep(plan, workers=args.workers)
    write_text(args.out, render_csv(SWEEP_COLUMNS, dataclass_rows(rows, SWEEP_FIELDS)))
    dest = sys.stderr if args.out in (None, "-") else sys.stdout
    print(f"sweep: {len(rows)} rows, {plan.replicates} replicates per cell, seed {plan.seed}"
          + ("" if args.out in (None, "-") else f", written to {args.out}"), file=dest)
    return EXIT_OK


def cmd_compare(args) -> int:
    plan = _load_plan(args.config, args)
    rows = comparison_sweep(plan, delta_yj=args.delta_yj, alpha=args.alpha, workers=args.workers)
    write_text(args.out, render_csv(COMPARE_COLUMNS, dataclass_rows(rows, COMPARE_FIELDS)))
    dest = sys.stderr if args.out in (None, "-") else sys.stdout
    print(f"compare: {len(rows)} rows, {plan.replicates} replicates per cell, seed {plan.seed}",
          file=dest)
    return EXIT_OK


def cmd_consistency(args) -> int:
    schedule = parse_number_list(args.n_schedule, "n_schedule", int)
    if not schedule:
        raise UsageError("--n-schedule must list at least one sample size")
    rates = RateSpec(args.a, args.b, args.lambda0, args.kappa0)
    if not rates.consistent:
        print(f"warning: rates a={args.a}, b={args.b} lie outside 0 <= a <= b < 1/2; "
              "consistency is not guaranteed", file=sys.stderr)
    rows = consistency_trajectory(rates, args.tau_true, args.tau0, schedule,
                                  args.replicates, args.seed, workers=args.workers)
    write_text(args.out, render_csv(("n", "median_log_bf"),
                                    dataclass_rows(rows, ("n", "median_log_bf"))))
    return EXIT_OK


def cmd_curves(args) -> int:
    if args.n_min <= 4:
        raise UsageError(f"--n-min must exceed 4, got {args.n_min}")
    if args.n_max < args.n_min:
        raise UsageError("--n-max must be at least --n-min")
    if not 0.0 < args.wrong_dir_prob < 0.5:
        raise UsageError(f"--wrong-dir-prob must lie in (0, 0.5), got {args.wrong_dir_prob}")
    spec = PowerSpec(args.alpha, args.power, args.tau0)
    rows = hyperparameter_curves(range(args.n_min, args.n_max + 1, args.step), spec,
                                 args.wrong_dir_prob)
    write_text(args.out, render_csv(("n", "lambda_n", "kappa_n"),
                                    dataclass_rows(rows, ("n", "lambda_n", "kappa_n"))))
    return EXIT_OK


def cmd_grid(args) -> int:
    if args.n < 2:
        raise UsageError(f"--n must be at least 2, got {args.n}")
    t = t_star_from_tau(args.tau_hat, args.n, args.tau0) if args.tau_hat is not None else args.t_star
    lams = parse_number_list(args.lambda_grid, "lambda_grid")
    kappas = parse_number_list(args.kappa_grid, "kappa_grid")
    if any(not k > 0 for k in kappas):
        raise UsageError("--kappa-grid entries must be positive")
    cells = bf_grid_for_data(t, args.n, args.tau0, lams, kappas)
    write_text(args.out, render_csv(("lambda", "kappa", "log_bf01", "bf01"),
                                    dataclass_rows(cells, ("lambda_n", "kappa_n", "log_bf01", "bf01"))))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kendall-bf",
        description="Bayes factor for Kendall's tau under a truncated normal prior.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test H0: tau = tau0 on two columns of a CSV file")
    p.add_argument("file")
    p.add_argument("--col-x", default=None, help="x column name (default: first column)")
    p.add_argument("--col-y", default=None, help="y column name (default: second column)")
    _prior_flags(p)
    _format_flags(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("bf", help="Bayes factor from summary statistics")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--tau-hat", type=float, help="sample Kendall tau")
    src.add_argument("--t-star", type=float, help="standardised statistic T*")
    p.add_argument("--n", type=int, required=True)
    _prior_flags(p)
    _format_flags(p)
    p.set_defaults(func=cmd_bf)

    p = sub.add_parser("elicit", help="prior mean (and sd) from a power analysis")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--power", type=float, default=0.8)
    p.add_argument("--tau0", type=float, default=0.0)
    p.add_argument("--wrong-dir-prob", type=float, default=None,
                   help="prior probability of an effect in the wrong direction")
    _format_flags(p)
    p.set_defaults(func=cmd_elicit)

    p = sub.add_parser("sample-size", help="sample size needed to detect tau1")
    p.add_argument("--tau1", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--power", type=float, default=0.8)
    p.add_argument("--tau0", type=float, default=0.0)
    _format_flags(p)
    p.set_defaults(func=cmd_sample_size)

    for name, func, helptext in (
        ("sweep", cmd_sweep, "rejection-rate sweep from a config file"),
        ("compare", cmd_compare, "BF vs p-value vs Yuan-Johnson rejection rates"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config", help="JSON or key = value config file")
        p.add_argument("--out", default=None, help="output CSV (default: stdout)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--workers", type=_count, default=1)
        if name == "compare":
            p.add_argument("--delta-yj", type=float, default=1.0)
            p.add_argument("--alpha", type=float, default=0.05)
        p.set_defaults(func=func)

    p = sub.add_parser("consistency", help="median log BF along a growing-n schedule")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--lambda0", type=float, default=0.0)
    p.add_argument("--kappa0", type=_positive, default=1.0)
    p.add_argument("--tau-true", type=float, required=True)
    p.add_argument("--tau0", type=float, default=0.0)
    p.add_argument("--n-schedule", required=True, help="e.g. 50,500,5000")
    p.add_argument("--replicates", type=_count, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_count, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_consistency)

    p = sub.add_parser("curves", help="elicited lambda_n and kappa_n as functions of n")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--step", type=_count, default=1)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--power", type=float, default=0.8)
    p.add_argument("--tau0", type=float, default=0.0)
    p.add_argument("--wrong-dir-prob", type=float, default=0.1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("grid", help="BF01 over a (lambda, kappa) grid for one data summary")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--tau-hat", type=float)
    src.add_argument("--t-star", type=float)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau0", type=float, default=0.0)
    p.add_argument("--lambda-grid", default="0:1:0.05")
    p.add_argument("--kappa-grid", default="0.01:0.3:0.01")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, UsageError, DomainError) as exc:
        print(f"kendall-bf {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KendallBFError as exc:
        print(f"kendall-bf {args.command}: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
