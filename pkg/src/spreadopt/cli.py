"""Command-line front end.

Subcommands:

``run``     solve one instance and emit a structured report
``sweep``   Cartesian product of algorithms x budgets as a CSV stream
``verify``  deterministic self-check battery (exit 2 on any failure)
``gen``     write random instances to disk
``bounds``  worst-case factor curves, optimum threshold, crossing points

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
All output for a fixed master seed is byte-identical across runs except
the wall time field of ``run`` reports.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .estimators import SOLVERS
from .generator import generate_instance
from .graph import (
    GraphFormatError,
    SocialGraph,
    load_graph,
    serialize_candidates,
    serialize_graph,
)
from .greedy import EnumerationLimitError
from .money import Money
from .oracle import OracleLimitError, brute_force_solve
from .ratios import (
    crossing_points,
    factor_table,
    general_constant,
    optimal_threshold,
    write_factor_csv,
)
from .report import RunReport, bound_block, solution_block, spread_block
from .sampling import derive_seed
from .spread import ExactEvaluator, ExactLimitError
from .verification import run_verification


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as exit code 1, not 2."""

    def error(self, message):
        raise _UsageError(message)


_HINTS = {
    OracleLimitError: "shrink the instance or pick a non-exhaustive --algorithm",
    ExactLimitError: "switch to --evaluator mc",
    EnumerationLimitError: "lower --M or raise --enumeration-cap",
    GraphFormatError: "fix the input file at the reported line",
}


def _hint_for(exc: Exception) -> str:
    for etype, hint in _HINTS.items():
        if isinstance(exc, etype):
            return f" (hint: {hint})"
    return ""


_ERROR_CODES = (
    (OracleLimitError, "oracle_limit"),
    (ExactLimitError, "exact_limit"),
    (EnumerationLimitError, "enumeration_limit"),
    (GraphFormatError, "parse_error"),
)


def _error_code(exc: Exception) -> str:
    for etype, code in _ERROR_CODES:
        if isinstance(exc, etype):
            return code
    return "invalid"


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load(args) -> SocialGraph:
    cand_text = _read(args.candidates) if args.candidates else None
    return load_graph(_read(args.graph), cand_text)


def _parse_budget(text: str) -> Money:
    try:
        return Money.from_decimal(text)
    except ValueError as exc:
        raise _UsageError(f"bad --budget {text!r}: {exc}") from None


def _make_solver(algorithm: str, budget: Money, args, seed: int):
    cls = SOLVERS[algorithm]
    kwargs = dict(
        budget=budget,
        evaluator=args.evaluator,
        replications=args.replications,
        abs_err=args.abs_err,
        master_seed=seed,
    )
    if algorithm == "enum":
        kwargs["M"] = args.M
    if algorithm == "general":
        kwargs["b"] = args.b
    return cls(**kwargs)


def _config_echo(algorithm: str, budget: Money, args, seed: int, solver) -> dict:
    echo = {
        "algorithm": algorithm,
        "budget": str(budget),
        "evaluator": args.evaluator,
        "master_seed": seed,
        "graph": args.graph,
        "candidates": args.candidates,
        "replications": args.replications,
        "abs_err": args.abs_err,
    }
    if algorithm == "enum":
        echo["M"] = args.M
    if algorithm == "general":
        echo["b"] = solver.resolved_threshold().to_float()
    return echo


def _add_run_flags(sub: argparse.ArgumentParser, multi: bool) -> None:
    sub.add_argument("--graph", required=True, help="edge list file")
    sub.add_argument("--candidates", help="candidate edge file or JSON config")
    many = " (comma-separated list)" if multi else ""
    sub.add_argument(
        "--algorithm",
        required=True,
        help=f"one of {', '.join(SOLVERS)}{many}",
    )
    sub.add_argument("--budget", required=True, help=f"total budget{many}")
    sub.add_argument("--M", type=int, default=4,
                     help="enumeration start size for the enum algorithm")
    sub.add_argument("--b", default="auto",
                     help="price threshold for the general algorithm")
    sub.add_argument("--evaluator", choices=("exact", "mc"), default="exact")
    sub.add_argument("--replications", type=int, default=None)
    sub.add_argument("--abs-err", type=float, default=None)
    sub.add_argument("--seed", type=int, default=0, help="master seed")
    sub.add_argument("--out", help="write output here instead of stdout")


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _split_algorithms(raw: str) -> list[str]:
    algorithms = [a.strip() for a in raw.split(",") if a.strip()]
    if not algorithms:
        raise _UsageError("--algorithm needs at least one name")
    for a in algorithms:
        if a not in SOLVERS:
            raise _UsageError(
                f"unknown algorithm {a!r}; choose from {', '.join(SOLVERS)}"
            )
    return algorithms


def _cmd_run(args) -> int:
    algorithm = args.algorithm
    if algorithm not in SOLVERS:
        raise _UsageError(
            f"unknown algorithm {algorithm!r}; choose from {', '.join(SOLVERS)}"
        )
    budget = _parse_budget(args.budget)
    graph = _load(args)
    solver = _make_solver(algorithm, budget, args, args.seed)
    start = time.perf_counter()
    solver.fit(graph)
    wall = time.perf_counter() - start
    oracle = None
    if algorithm == "brute":
        oracle = {
            "optimum": solver.spread_,
            "ratio": 1.0,
            "explored": solver.explored_,
        }
    elif args.oracle:
        opt = brute_force_solve(graph, budget, ExactEvaluator(graph))
        ratio = 1.0 if opt.value == 0.0 else solver.spread_ / opt.value
        oracle = {"optimum": opt.value, "ratio": ratio, "explored": opt.explored}
    report = RunReport(
        config=_config_echo(algorithm, budget, args, args.seed, solver),
        solution=solution_block(graph, solver.solution_, budget),
        spread=spread_block(solver.estimate_),
        bound=bound_block(graph, algorithm),
        oracle=oracle,
        wall_time_s=wall,
    )
    if args.format == "json":
        _emit(args, report.to_json() + "\n")
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([
            "algorithm", "budget", "cost", "sigma", "half_width",
            "replications", "bound_factor", "oracle_ratio", "wall_time_s",
            "seeds", "edges",
        ])
        writer.writerow([
            algorithm,
            str(budget),
            report.solution["cost"],
            repr(solver.spread_),
            repr(solver.estimate_.half_width),
            solver.estimate_.replications,
            repr(report.bound["factor"]) if report.bound["factor"] is not None else "",
            repr(oracle["ratio"]) if oracle else "",
            repr(wall),
            ";".join(report.solution["seeds"]),
            ";".join(f"{e['src']}->{e['dst']}" for e in report.solution["edges"]),
        ])
        _emit(args, buf.getvalue())
    return 0


def _sweep_cell(cell):
    index, algorithm, budget, args, graph = cell
    seed = derive_seed(args.seed, index)
    row = {
        "cell": index,
        "algorithm": algorithm,
        "budget": str(budget),
        "seed": seed,
        "sigma": "",
        "half_width": "",
        "cost": "",
        "seeds": "",
        "edges": "",
        "bound_factor": "",
        "error": "",
    }
    try:
        solver = _make_solver(algorithm, budget, args, seed)
        solver.fit(graph)
    except ValueError as exc:
        row["error"] = _error_code(exc)
        return row
    block = solution_block(graph, solver.solution_, budget)
    bound = bound_block(graph, algorithm)
    row["sigma"] = repr(solver.spread_)
    row["half_width"] = repr(solver.estimate_.half_width)
    row["cost"] = block["cost"]
    row["seeds"] = ";".join(block["seeds"])
    row["edges"] = ";".join(f"{e['src']}->{e['dst']}" for e in block["edges"])
    if bound["factor"] is not None:
        row["bound_factor"] = repr(bound["factor"])
    return row


def _cmd_sweep(args) -> int:
    algorithms = _split_algorithms(args.algorithm)
    budgets = [_parse_budget(b.strip()) for b in args.budget.split(",") if b.strip()]
    if not budgets:
        raise _UsageError("--budget needs at least one amount")
    graph = _load(args)
    cells = [
        (i, algorithm, budget, args, graph)
        for i, (algorithm, budget) in enumerate(
            (a, b) for a in algorithms for b in budgets
        )
    ]
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_cell, cells))
    else:
        rows = [_sweep_cell(c) for c in cells]
    buf = io.StringIO()
    fields = [
        "cell", "algorithm", "budget", "seed", "sigma", "half_width",
        "cost", "seeds", "edges", "bound_factor", "error",
    ]
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(args, buf.getvalue())
    return 0


def _cmd_verify(args) -> int:
    instance_files = None
    if args.instances:
        instance_files = []
        for path in args.instances:
            stem, _ = os.path.splitext(path)
            cand = stem + ".cands"
            instance_files.append((path, cand if os.path.exists(cand) else None))
    results = run_verification(
        seed=args.seed,
        count=args.count,
        hw_factor=args.mc_tolerance,
        instance_files=instance_files,
    )
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        detail = r.detail.replace("\n", "\n    ")
        lines.append(f"{status} {r.name}: {detail}")
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    text = "\n".join(lines) + "\n"
    _emit(args, text)
    if args.out:
        sys.stdout.write(text)
    return 0 if passed == len(results) else 2


def _cmd_gen(args) -> int:
    if args.count < 1:
        raise _UsageError("--count must be positive")
    os.makedirs(args.out_dir, exist_ok=True)
    written = []
    for i in range(args.count):
        graph = generate_instance(
            args.n,
            edge_prob=args.edge_prob,
            p_low=args.p_low,
            p_high=args.p_high,
            n_candidates=args.n_candidates,
            cost_low=args.cost_low,
            cost_high=args.cost_high,
            cand_p_low=args.cand_p_low,
            cand_p_high=args.cand_p_high,
            seed=args.seed + i,
        )
        base = os.path.join(args.out_dir, f"{args.prefix}{i:03d}")
        with open(base + ".edges", "w", encoding="utf-8") as fh:
            fh.write(serialize_graph(graph))
        with open(base + ".cands", "w", encoding="utf-8") as fh:
            fh.write(serialize_candidates(graph))
        written.append(base)
    for base in written:
        print(base + ".edges")
        print(base + ".cands")
    return 0


def _cmd_bounds(args) -> int:
    table = factor_table(step=args.step)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_factor_csv(fh, step=args.step)
    threshold, factor = optimal_threshold()
    payload = {
        "b_star": threshold,
        "factor": factor,
        "general_constant": general_constant(),
        "crossings": crossing_points(),
        "rows": len(table),
        "csv": args.out,
    }
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="spreadopt",
        description="Budgeted seeding plus edge augmentation for influence spread.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="solve one instance", parents=[])
    _add_run_flags(run, multi=False)
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--oracle", action="store_true",
                     help="also solve exhaustively and report the ratio")
    run.set_defaults(func=_cmd_run)

    sweep = subs.add_parser("sweep", help="algorithms x budgets CSV stream")
    _add_run_flags(sweep, multi=True)
    sweep.add_argument("--jobs", type=int, default=1,
                       help="concurrent cells; output order is unaffected")
    sweep.set_defaults(func=_cmd_sweep)

    verify = subs.add_parser("verify", help="deterministic self-checks")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--count", type=int, default=50,
                        help="instances per oracle-ratio corpus")
    verify.add_argument("--mc-tolerance", type=float, default=3.0,
                        help="allowed half-width multiples for MC checks"
                             " (0 makes MC checks fail by design)")
    verify.add_argument("--instances", nargs="*",
                        help="edge files to check instead of generated corpora")
    verify.add_argument("--out", help="also write the summary to this file")
    verify.set_defaults(func=_cmd_verify)

    gen = subs.add_parser("gen", help="write random instances")
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--n", type=int, default=5)
    gen.add_argument("--edge-prob", type=float, default=0.3)
    gen.add_argument("--p-low", type=float, default=0.1)
    gen.add_argument("--p-high", type=float, default=0.9)
    gen.add_argument("--n-candidates", type=int, default=6)
    gen.add_argument("--cost-low", type=float, default=0.2)
    gen.add_argument("--cost-high", type=float, default=1.0)
    gen.add_argument("--cand-p-low", type=float, default=None)
    gen.add_argument("--cand-p-high", type=float, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out-dir", default=".")
    gen.add_argument("--prefix", default="instance")
    gen.set_defaults(func=_cmd_gen)

    bounds = subs.add_parser("bounds", help="worst-case factor curves")
    bounds.add_argument("--step", type=float, default=0.001)
    bounds.add_argument("--out", default="figure1.csv",
                        help="path for the per-floor factor CSV")
    bounds.set_defaults(func=_cmd_bounds)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}{_hint_for(exc)}", file=sys.stderr)
        return 1


def main_entry() -> None:
    sys.exit(main())
