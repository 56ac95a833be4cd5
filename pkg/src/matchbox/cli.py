"""Command-line front end: ``matchbox <subcommand> [options]``.

Tables go to stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from . import asymptotics as asy
from . import expectations as ex
from . import series as ser
from . import simulator as sim
from . import verify as ver
from .numeric import EXACT, FLOAT, Probability, parse_probability, render
from .tables import emit, format_table


class UsageError(ValueError):
    pass


def parse_grid(text: str) -> List[Fraction]:
    """"start:stop:steps" -> start + (stop-start) i/steps for i = 0..steps,
    dropping points equal to 0 or 1."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:stop:steps, got {text!r}")
    start, stop = Fraction(parts[0]), Fraction(parts[1])
    steps = int(parts[2])
    if steps < 1:
        raise UsageError("grid needs at least one step")
    pts = [start + (stop - start) * i / steps for i in range(steps + 1)]
    return [x for x in pts if x not in (0, 1)]


def _probabilities(args, default_mode: str = EXACT) -> List[Probability]:
    mode = args.mode or default_mode
    if args.p_grid:
        values = parse_grid(args.p_grid)
        probs = [Probability(v) for v in values]
    elif args.p:
        probs = [parse_probability(args.p)]
    else:
        raise UsageError("give --p or --p-grid")
    if mode == FLOAT:
        probs = [pr.as_float() for pr in probs]
    return probs


def _n(args, lo: int = 1) -> int:
    if args.n is None:
        raise UsageError("give --n")
    if args.n < lo:
        raise UsageError(f"--n must be >= {lo}")
    return args.n


def _k(args) -> int:
    if args.k < 2:
        raise UsageError("--k must be >= 2")
    return args.k


def _table_by_n(args, column: str, compute) -> str:
    k, N = _k(args), _n(args)
    probs = _probabilities(args)
    rows = []
    multi = len(probs) > 1
    for pr in probs:
        for n, v in enumerate(compute(k, pr, N), start=1):
            rows.append(([pr.value] if multi else []) + [n, v])
    header = (["p"] if multi else []) + ["n", column]
    return format_table(header, rows, args.format)


def cmd_residue(args) -> str:
    method = args.method or "diagonal_sum"
    return _table_by_n(args, "M_n", lambda k, pr, N: ex.residue_series(k, pr, N, method))


def cmd_first_return(args) -> str:
    return _table_by_n(args, "R_n", ex.expected_first_return_series)


def cmd_diagonal(args) -> str:
    k, N = _k(args), _n(args, lo=0)
    probs = _probabilities(args)
    multi = len(probs) > 1
    rows = []
    for pr in probs:
        for n, v in enumerate(ser.diagonal_probabilities(k, pr, N)):
            rows.append(([pr.value] if multi else []) + [n, v])
    return format_table((["p"] if multi else []) + ["n", "f_n"], rows, args.format)


def cmd_series(args) -> str:
    k, N = _k(args), _n(args, lo=0)
    if args.p or args.p_grid:
        (pr,) = _probabilities(args)[:1]
        s = ser.first_return_pgf(k, pr, N)
    else:
        s = ser.s_series(k, N)
    return format_table(["n", "coefficient"], s.csv_rows(), args.format)


def _asymptotic_rows(k: int, probs: Sequence[Probability], n: int, with_k: bool):
    rows = []
    for pr in probs:
        rep = asy.classify(k, pr)
        row = [render(float(pr.value)), rep.regime, "" if rep.lam is None else rep.lam,
               float(rep.r_star), asy.residue_asymptotic(k, n, pr)]
        rows.append(([k] if with_k else []) + row)
    return rows


def cmd_asymptotics(args) -> str:
    if args.mode == EXACT:
        raise UsageError("asymptotic estimates are floating point; use --mode float")
    k = _k(args)
    n = args.n or 100
    rows = _asymptotic_rows(k, _probabilities(args, FLOAT), n, False)
    return format_table(["p", "regime", "lambda", "r_star", "estimate"], rows, args.format)


def cmd_simulate(args) -> str:
    k, n = _k(args), _n(args)
    if args.trials is None or args.trials < 1:
        raise UsageError("--trials must be >= 1")
    target = sim.FIRST_RETURN if args.target == "first-return" else sim.RESIDUE
    rows = []
    for pr in _probabilities(args):
        res = sim.estimate(k, n, pr, args.trials, args.seed, target)
        rows.append([pr.value, n, k, args.trials, args.seed, res.mean, res.stderr, res.rng])
    return format_table(["p", "n", "k", "trials", "seed", "mean", "stderr", "rng"], rows, args.format)


def figure_residue(grid: Sequence[Fraction], n: int, trials: int, seed: int, k: int = 3) -> str:
    rows = []
    for p in grid:
        exact = ex.expected_residue(k, n, p)
        mc = sim.estimate(k, n, p, trials, seed, sim.RESIDUE)
        rows.append([float(p), float(exact), asy.residue_asymptotic(k, n, p), mc.mean, mc.stderr])
    return format_table(["p", "exact", "asymptotic", "mc_mean", "mc_stderr"], rows)


def figure_returns(grid: Sequence[Fraction], n: int, trials: int, seed: int, k: int = 3) -> str:
    rows = []
    for p in grid:
        exact = ex.expected_first_return(k, n, p)
        mc = sim.estimate(k, n, p, trials, seed, sim.FIRST_RETURN)
        rows.append([float(p), float(exact), asy.first_return_asymptotic(k, n, p), mc.mean, mc.stderr])
    return format_table(["p", "exact", "asymptotic", "mc_mean", "mc_stderr"], rows)


def figure_lambdas(grid: Sequence[Fraction], n: int) -> str:
    rows = []
    for k in (2, 3, 4, 5):
        rows.extend(_asymptotic_rows(k, [Probability(p) for p in grid], n, True))
    return format_table(["k", "p", "regime", "lambda", "r_star", "estimate"], rows)


FIGURES = ("residue", "lambdas", "returns")


def cmd_figure(args) -> Optional[str]:
    grid = parse_grid(args.p_grid or "0:1:20")
    n = args.n or 100
    trials = args.trials if args.trials is not None else 10_000
    which = FIGURES if args.which == "all" else (args.which,)
    if len(which) > 1 and not args.out:
        raise UsageError("--out DIR is required for --which all")
    texts = {}
    for name in which:
        if name == "residue":
            texts[name] = figure_residue(grid, n, trials, args.seed)
        elif name == "returns":
            texts[name] = figure_returns(grid, n, trials, args.seed)
        else:
            texts[name] = figure_lambdas(grid, n)
    if len(which) == 1:
        # a single figure honours --out as a file path in main()
        return texts[which[0]]
    for name, text in texts.items():
        path = Path(args.out) / f"figure_{name}.csv"
        emit(text, str(path), sys.stdout)
        print(f"wrote {path}", file=sys.stderr)
    return None


def cmd_verify(args) -> str:
    suites = [args.suite] if args.suite else None
    checks = ver.run(suites, k=args.k_opt, max_n=args.max_n, N=args.N)
    report = [c.as_dict() for c in checks]
    args._failed = sum(1 for c in checks if not c.passed)
    if args.format == "csv":
        rows = [[r["suite"], r["check"], json.dumps(r["params"], sort_keys=True), r["status"]] for r in report]
        return format_table(["suite", "check", "params", "status"], rows, "csv")
    summary = {"passed": len(checks) - args._failed, "failed": args._failed, "checks": report}
    return json.dumps(summary, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matchbox", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="csv"):
        sp.add_argument("--k", type=int, default=3)
        sp.add_argument("--n", "--n-max", dest="n", type=int)
        sp.add_argument("--p")
        sp.add_argument("--p-grid", help="start:stop:steps")
        sp.add_argument("--mode", choices=(EXACT, FLOAT))
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("csv", "json"), default=fmt_default)

    for name, func in (
        ("residue", cmd_residue),
        ("first-return", cmd_first_return),
        ("diagonal", cmd_diagonal),
        ("series", cmd_series),
        ("asymptotics", cmd_asymptotics),
    ):
        sp = sub.add_parser(name)
        common(sp)
        if name == "residue":
            sp.add_argument("--method", choices=ex.METHODS)
        sp.set_defaults(func=func)

    sp = sub.add_parser("simulate")
    common(sp)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--target", choices=("residue", "first-return"), default="residue")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("figure")
    common(sp)
    sp.add_argument("--which", choices=FIGURES + ("all",), default="all")
    sp.add_argument("--trials", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("verify")
    sp.add_argument("--suite", choices=sorted(ver.SUITES) + sorted(ver.ALIASES))
    sp.add_argument("--k", dest="k_opt", type=int)
    sp.add_argument("--max-n", type=int)
    sp.add_argument("--N", type=int)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"matchbox {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if text is not None:
        emit(text, args.out, sys.stdout)
    return 1 if getattr(args, "_failed", 0) else 0


if __name__ == "__main__":
    sys.exit(main())
