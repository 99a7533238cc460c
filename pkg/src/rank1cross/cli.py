"""Command-line front door.

Subcommands: ``approx`` (pivot search on a matrix file), ``bounds`` (full
closed-form bound report), ``experiment`` (the ratio sweep with CSV and
figure output), ``oracle`` (quadrature/Monte Carlo/exhaustive reference
values) and ``selftest`` (the oracle-vs-bound validation suite).

Exit codes: 0 on success, 1 on domain or validation errors (including
unknown flags and unparsable inputs), 2 on I/O errors.  Every subcommand
that consumes randomness requires an explicit seed; there are no implicit
time-based seeds.  This module only parses, dispatches and formats -- all
numeric logic lives in the library modules.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bounds as bounds_mod
from . import oracle as oracle_mod
from .experiments import (
    DEFAULT_RATIOS,
    START_POLICIES,
    VARIANTS,
    ExperimentConfig,
    load_config_file,
    run_experiment,
)
from .figures import render_figures
from .matrixio import read_matrix
from .maxvol import cross_residual, maxvol_fixed_steps, maxvol_max_among_viewed, maxvol_rank1
from .selftest import run_selftest

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors routed to exit code 1 instead of 2."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _fmt(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}i"
    return format(float(x), ".17g")


def _fmt_probability(p: bounds_mod.Probability) -> str:
    text = _fmt(p.value)
    if p.vacuous:
        text += f" (vacuous; raw {p.raw:.6g})"
    return text


def _cmd_approx(args) -> int:
    A = read_matrix(args.matrix)
    if args.variant == "converge":
        trace = maxvol_rank1(A, args.start_col, args.max_steps)
    elif args.variant == "fixed4":
        trace = maxvol_fixed_steps(A, args.start_col, 4)
    else:
        trace = maxvol_max_among_viewed(A, args.start_col, args.k)
    final = trace.final
    print(f"pivot: row={final.row} col={final.col} value={_fmt(final.value)}")
    if trace.degenerate:
        print("residual_cnorm: nan (degenerate zero pivot, no cross exists)")
    else:
        _, norm = cross_residual(A, final)
        print(f"residual_cnorm: {_fmt(norm)}")
    print(f"steps: {trace.steps}")
    print(f"converged: {'true' if trace.converged else 'false'}")
    print(f"elements_examined: {trace.elements_examined}")
    if args.trace:
        restart_indices = set(trace.restarts)
        for idx, p in enumerate(trace.visited):
            marker = " (restart)" if idx in restart_indices else ""
            print(f"visited[{idx}]: row={p.row} col={p.col} value={_fmt(p.value)}{marker}")
    return 0


def _cmd_bounds(args) -> int:
    inputs = bounds_mod.BoundInputs(
        n=args.n,
        c=args.c,
        eps=args.eps,
        delta=args.delta,
        m=args.m,
        c0=args.c0,
        u_inf=args.u_inf,
        v_inf=args.v_inf,
        k=args.k,
        tau=args.tau,
    )
    report = bounds_mod.evaluate_bounds(inputs)
    print(f"alpha: {_fmt(report.alpha)}")
    print(f"beta: {_fmt(report.beta)}")
    print(f"beta_v: {_fmt(report.beta_v)}")
    print(f"beta_u: {_fmt(report.beta_u)}")
    print(f"mu_lo: {_fmt(report.mu_lo)}")
    print(f"mu_hi: {_fmt(report.mu_hi)}")
    print(f"error_bound: {_fmt(report.error_bound)}")
    print(f"error_bound_simplified: {_fmt(report.error_bound_simplified)}")
    print(f"error_bound_real: {_fmt(report.error_bound_real)}")
    nu1, nu2, nu3 = report.nu
    nu_text = ", ".join("undefined" if v is None else _fmt(v) for v in (nu1, nu2, nu3))
    print(f"nu_sequence: {nu_text}")
    print(f"gamma: {_fmt(report.gamma)}")
    print(f"alpha0: {_fmt(report.alpha0)}")
    print(f"coord_success: {_fmt_probability(report.coord_success)}")
    print(f"good_start_success: {_fmt_probability(report.good_start_success)}")
    print(f"walk_success: {_fmt_probability(report.walk_success)}")
    return 0


_CONFIG_FLAGS = ("ratios", "m", "n", "trials", "variant", "start_policy", "k", "field", "out_dir", "workers")


def _cmd_experiment(args) -> int:
    values = load_config_file(args.config) if args.config else {}
    if args.seed is not None:
        values["master_seed"] = args.seed
    if "master_seed" not in values:
        raise ValueError("a seed is required: pass --seed or set master_seed in the config file")
    for name in _CONFIG_FLAGS:
        flag = getattr(args, name)
        if flag is not None:
            values[name] = tuple(flag) if name == "ratios" else flag
    config = ExperimentConfig(**values)
    result = run_experiment(config)
    print(f"wrote {result.trials_path}")
    print(f"wrote {result.summary_path}")
    if args.figures:
        for path in render_figures(result.summary, config.out_dir):
            print(f"wrote {path}")
    if result.degenerate_count:
        print(f"degenerate trials excluded from error statistics: {result.degenerate_count}")
    header = ("ratio", "mean_found", "min_found", "mean_err", "max_err", "lower_bound", "err_bound", "p_bad_random", "p_bad_algo")
    print(" ".join(f"{h:>12}" for h in header))
    for s in result.summary:
        row = (
            s.ratio,
            s.mean_found_over_max,
            s.min_found_over_max,
            s.mean_err_over_delta,
            s.max_err_over_delta,
            s.lower_bound_curve,
            s.error_bound_curve,
            s.p_bad_random_start,
            s.p_bad_after_algorithm,
        )
        print(" ".join(f"{v:>12.6g}" for v in row))
    return 0


def _cmd_oracle(args) -> int:
    if args.oracle_cmd == "chi2-tail":
        threshold = args.threshold if args.threshold is not None else bounds_mod.chi2_tail_threshold(args.n, args.c)
        estimate = oracle_mod.chi2_tail_exact(args.n, threshold)
        print(f"threshold: {_fmt(threshold)}")
        print(f"tail: {_fmt(estimate.value)} ({estimate.method}, {estimate.samples_or_nodes} nodes)")
        if args.threshold is None:
            bound = bounds_mod.chi2_tail_coefficient(args.n, args.c) * args.n ** (-args.c)
            sharp = bounds_mod.chi2_rate_degradation(args.n, args.c) < 1.0
            print(f"bound: {_fmt(bound)} (sharp: {'true' if sharp else 'false'})")
            print(f"sound: {'true' if estimate.value <= bound else 'false'}")
    elif args.oracle_cmd == "sphere-tail":
        rng = np.random.default_rng(args.seed)
        estimate = oracle_mod.sphere_tail_mc(args.n, args.tau, args.k, args.trials, rng)
        print(f"estimate: {_fmt(estimate.value)} +- {_fmt(estimate.std_error)} ({estimate.samples_or_nodes} trials)")
        bound = (
            bounds_mod.chi2_tail_coefficient(args.n, args.c) * args.n ** (-args.c)
            + bounds_mod.small_coord_coefficient(args.n, args.c, args.tau) ** args.k
        )
        print(f"bound: {_fmt(bound)}")
        print(f"sound: {'true' if estimate.value <= bound + 3 * estimate.std_error else 'false'}")
    elif args.oracle_cmd == "fisher-tail":
        rng = np.random.default_rng(args.seed)
        estimate = oracle_mod.fisher_tail_mc(args.n, args.t, args.trials, rng)
        print(f"estimate: {_fmt(estimate.value)} +- {_fmt(estimate.std_error)} ({estimate.samples_or_nodes} trials)")
    else:
        A = read_matrix(args.matrix)
        pivot, norm = oracle_mod.best_cross_residual(A)
        print(f"best_pivot: row={pivot.row} col={pivot.col} value={_fmt(pivot.value)}")
        print(f"residual_cnorm: {_fmt(norm)}")
    return 0


def _cmd_selftest(args) -> int:
    return 0 if run_selftest(fast=args.fast) else 1


def _build_parser() -> _Parser:
    parser = _Parser(prog="rank1cross", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approx", help="run the pivot search on a matrix file")
    p.add_argument("matrix", help="matrix file: header 'm n field', then m rows of n entries")
    p.add_argument("--start-col", type=int, required=True, help="column whose argmax starts the search")
    p.add_argument("--variant", choices=VARIANTS, default="converge")
    p.add_argument("--k", type=int, default=4, help="alternation floor for max-among-viewed")
    p.add_argument("--max-steps", type=int, default=None, help="alternation cap for the converge variant")
    p.add_argument("--trace", action="store_true", help="print every visited pivot")
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("bounds", help="evaluate the full closed-form bound report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--c0", type=float, default=1.0)
    p.add_argument("--u-inf", type=float, default=1.0)
    p.add_argument("--v-inf", type=float, default=1.0)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--tau", type=float, default=0.0)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("experiment", help="run the ratio sweep and write CSVs and figures")
    p.add_argument("--config", default=None, help="flat 'key = value' config file; flags override it")
    p.add_argument("--seed", type=int, default=None, help="master seed (required here or in the config file)")
    p.add_argument("--ratios", type=float, nargs="+", default=None, help=f"ratio grid (default {' '.join(str(r) for r in DEFAULT_RATIOS)})")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--variant", choices=VARIANTS, default=None)
    p.add_argument("--start-policy", dest="start_policy", choices=START_POLICIES, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--field", choices=("real", "complex"), default=None)
    p.add_argument("--out", dest="out_dir", default=None, help="output directory (default '.')")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True, help="render summary figures")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("oracle", help="independent reference values")
    orc = p.add_subparsers(dest="oracle_cmd", required=True)
    q = orc.add_parser("chi2-tail", help="chi-square upper tail by quadrature")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--c", type=float, default=1.0, help="tail exponent used when no explicit threshold is given")
    q.add_argument("--threshold", type=float, default=None)
    q.set_defaults(func=_cmd_oracle)
    q = orc.add_parser("sphere-tail", help="Monte Carlo small-coordinate probability")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--c", type=float, default=2.0)
    q.add_argument("--tau", type=float, required=True)
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--trials", type=int, default=100_000)
    q.add_argument("--seed", type=int, required=True)
    q.set_defaults(func=_cmd_oracle)
    q = orc.add_parser("fisher-tail", help="Monte Carlo variance-ratio tail")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--t", type=float, required=True)
    q.add_argument("--trials", type=int, default=100_000)
    q.add_argument("--seed", type=int, required=True)
    q.set_defaults(func=_cmd_oracle)
    q = orc.add_parser("best-cross", help="exhaustive best cross pivot for a matrix file")
    q.add_argument("--matrix", required=True)
    q.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("selftest", help="run the oracle-vs-bound validation suite")
    p.add_argument("--fast", action="store_true", help="shrink Monte Carlo sample counts")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
