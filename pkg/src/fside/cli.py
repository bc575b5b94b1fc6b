"""Command-line front end: ``fside {example,converge,ensemble,paths}``.

CSV goes to ``--output`` when given (the summary table then goes to
stdout); otherwise CSV is written to stdout and the summary to stderr.
Exit codes: 0 success, 2 invalid parameters, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import warnings

import numpy as np

from . import io
from .problems import EXAMPLES
from .solver import SolverConfig, error_function, solve, solve_ensemble, theoretical_bound
from .stochastic import gbm_path, sample_brownian, sample_fbm, uniform_partition

EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(ValueError):
    pass


def _common(p: argparse.ArgumentParser, m: bool = True) -> None:
    p.add_argument("--id", type=int, default=1, choices=sorted(EXAMPLES), help="built-in example")
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--sigma", type=float, default=0.0)
    if m:
        p.add_argument("--m", type=int, default=7, help="truncation degree")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", "-o", default=None, help="CSV file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fside", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("example", help="solve a built-in example")
    _common(p)

    p = sub.add_parser("converge", help="error or residual against the a-priori bound over m")
    _common(p, m=False)
    p.add_argument("--ms", default="3,5,7,9", help="comma-separated degrees")

    p = sub.add_parser("ensemble", help="Monte Carlo statistics over Brownian paths")
    _common(p)
    p.add_argument("--n-paths", type=int, default=100)

    p = sub.add_parser("paths", help="sample a BM, fBm or GBM path")
    p.add_argument("--kind", choices=["bm", "fbm", "gbm"], default="bm")
    p.add_argument("--hurst", type=float, default=0.5)
    p.add_argument("--n-cells", type=int, default=500)
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--x0", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=0.1)
    p.add_argument("--sigma", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", "-o", default=None)
    return parser


class _Out:
    def __init__(self, output):
        self.output = output
        self.summary = sys.stdout if output else sys.stderr

    def say(self, line: str = "") -> None:
        print(line, file=self.summary)

    def csv(self, header, columns) -> None:
        io.write_csv(self.output or sys.stdout, header, columns)


def _problem(args):
    return EXAMPLES[args.id](alpha=args.alpha, sigma=args.sigma)


def cmd_example(args, out: _Out) -> None:
    problem = _problem(args)
    sol = solve(problem, SolverConfig(m=args.m, seed=args.seed))
    out.say(f"example {args.id}: alpha={args.alpha} sigma={args.sigma} m={args.m} seed={args.seed}")
    out.say(f"  f_m(0)         {sol(0.0): .3e}")
    out.say(f"  residual max   {sol.residual_max: .3e}")
    out.say(f"  condition      {sol.system_condition_estimate: .3e}")
    grid = sol.residual_grid
    header, columns = ["t", "f_approx"], [grid, sol(grid)]
    if problem.exact is not None:
        report = error_function(sol, problem.exact, grid)
        out.say(f"  max |f - f_m|  {np.max(np.abs(report.values)): .3e}")
        out.say(f"  L2 error       {report.l2: .3e}")
        header += ["f_exact", "abs_error"]
        columns += [problem.exact(grid), np.abs(report.values)]
    out.csv(header, columns)


def cmd_converge(args, out: _Out) -> None:
    try:
        ms = [int(x) for x in args.ms.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --ms list: {args.ms}") from exc
    problem = _problem(args)
    label = "max_error" if problem.exact is not None else "residual_max"
    rows = []
    for m in ms:
        sol = solve(problem, SolverConfig(m=m, seed=args.seed))
        if problem.exact is not None:
            measured = float(np.max(np.abs(error_function(sol, problem.exact).values)))
        else:
            measured = sol.residual_max
        rows.append((m, measured, theoretical_bound(problem, m)))
    out.say(f"{'m':>4}  {label:>14}  {'bound':>14}")
    for m, measured, bound in rows:
        out.say(f"{m:>4}  {measured:>14.6e}  {bound:>14.6e}")
    out.csv(["m", label, "bound"], list(zip(*rows)))


def cmd_ensemble(args, out: _Out) -> None:
    if args.n_paths < 1:
        raise UsageError("--n-paths must be >= 1")
    stats = solve_ensemble(_problem(args), SolverConfig(m=args.m, seed=args.seed), args.n_paths)
    out.say(f"ensemble: {stats.n_paths} paths, {stats.n_failed} failed, master seed {stats.master_seed}")
    out.say(f"  mean f(1) {stats.mean[-1]: .6f}  std f(1) {stats.std[-1]: .6f}")
    out.csv(["t", "mean", "std", "q05", "q95"], [stats.grid, stats.mean, stats.std, stats.q05, stats.q95])


def cmd_paths(args, out: _Out) -> None:
    if args.n_cells < 1 or args.t_end <= 0:
        raise UsageError("--n-cells and --t-end must be positive")
    partition = uniform_partition(0.0, args.t_end, args.n_cells)
    if args.kind == "gbm":
        t, x = gbm_path(args.x0, args.mu, args.sigma, args.hurst, partition, args.seed)
        out.say(f"GBM path: X(0)={x[0]} X(T)={x[-1]:.6f}")
        out.csv(["t", "X"], [t, x])
        return
    if args.kind == "fbm" and args.hurst != 0.5:
        path = sample_fbm(partition, args.seed, args.hurst)
    else:
        path = sample_brownian(partition, args.seed)
    out.say(f"{args.kind} path: H={path.hurst} B(T)={path.values[-1]:.6f}")
    out.csv(["t", "B"], [path.partition, path.values])


COMMANDS = {"example": cmd_example, "converge": cmd_converge, "ensemble": cmd_ensemble, "paths": cmd_paths}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = _Out(args.output)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            COMMANDS[args.command](args, out)
    except (UsageError, ValueError) as exc:
        print(f"fside: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"fside: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
