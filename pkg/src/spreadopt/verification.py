"""Self-checks run by the ``verify`` subcommand.

Every check is deterministic for a given master seed and reports one
pass/fail line; failures carry a serialized instance dump so they can
be reproduced from the command line. Output contains no timing, so two
runs with the same seed are byte-identical.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .generator import corpus, generate_instance
from .graph import (
    NoCandidatesError,
    SocialGraph,
    load_graph,
    make_solution,
    serialize_candidates,
    serialize_graph,
    validate_solution,
)
from .money import Money, ONE
from .oracle import brute_force_solve
from .ratios import Q, factor_lb_greedy, factor_seed_only, general_constant
from .sampling import SampleBank
from .spread import (
    Evaluator,
    ExactEvaluator,
    MonteCarloEvaluator,
    delta_live_edge_sum,
)
from .greedy import enum_greedy, greedy_lb, seed_only_greedy
from .threshold import greedy_general
from .estimators import ThresholdGreedySolver


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass
class _Prepared:
    graph: SocialGraph
    budget: Money
    ev: Evaluator | None
    opt_value: float
    error: str | None = None


def _dump(graph: SocialGraph, budget: Money) -> str:
    return (
        f"budget={budget}\n--- edges ---\n{serialize_graph(graph)}"
        f"--- candidates ---\n{serialize_candidates(graph)}"
    )


def _floor(graph: SocialGraph) -> float | None:
    try:
        return graph.c_min().to_float()
    except NoCandidatesError:
        return None


def _nested_pairs(graph: SocialGraph, rng: np.random.Generator, count: int):
    """Random nested solution pairs for identity checks."""
    pairs = []
    for _ in range(count):
        n_seeds = int(rng.integers(1, graph.n + 1))
        seeds = sorted(rng.choice(graph.n, size=n_seeds, replace=False).tolist())
        pool = [i for a in seeds for i in graph.candidates_from(a)]
        take = int(rng.integers(0, len(pool) + 1)) if pool else 0
        edges = sorted(rng.choice(pool, size=take, replace=False).tolist()) if take else []
        sup = make_solution(graph, seeds, edges)
        sub_seeds = [a for a in seeds if rng.random() < 0.6] or seeds[:1]
        sub_edges = [
            i for i in edges
            if graph.candidates[i].src in sub_seeds and rng.random() < 0.6
        ]
        sub = make_solution(graph, sub_seeds, sub_edges)
        pairs.append((sup, sub))
    return pairs


def check_identity(seed: int, graphs: int = 20, pairs_each: int = 5) -> CheckResult:
    """Definitional coin-sum difference equals the spread difference."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    checked = 0
    for g in range(graphs):
        graph = generate_instance(
            4, edge_prob=0.4, n_candidates=4, cost_low=0.1, seed=seed + 7000 + g
        )
        ev = ExactEvaluator(graph)
        for sup, sub in _nested_pairs(graph, rng, pairs_each):
            lhs = delta_live_edge_sum(graph, sup, sub)
            rhs = ev.spread(sup) - ev.spread(sub)
            worst = max(worst, abs(lhs - rhs))
            checked += 1
    return CheckResult(
        "gain-identity",
        worst <= 1e-12,
        f"{checked} nested pairs, max deviation {worst:.3e} (tol 1e-12)",
    )


def check_mc(seed: int, instances: int = 8, hw_factor: float = 3.0) -> CheckResult:
    """Monte Carlo estimates agree with exact values and couple nested
    solutions so estimated gains are never negative."""
    bad = []
    checked = 0
    rng = np.random.default_rng(seed + 1)
    for g in range(instances):
        graph = generate_instance(
            4, edge_prob=0.4, n_candidates=3, cost_low=0.1, seed=seed + 8000 + g
        )
        exact = ExactEvaluator(graph)
        mc = MonteCarloEvaluator(graph, SampleBank(seed + g), 20_000)
        for sup, sub in _nested_pairs(graph, rng, 3):
            est = mc.evaluate(sup)
            truth = exact.spread(sup)
            if abs(est.value - truth) > hw_factor * est.half_width + 1e-9:
                bad.append(
                    f"instance {g}: |{est.value:.4f}-{truth:.4f}| beyond "
                    f"{hw_factor}x{est.half_width:.4f}"
                )
            if mc.delta(sup, sub) < 0.0:
                bad.append(f"instance {g}: negative coupled gain")
            checked += 2
    detail = f"{checked} checks at {hw_factor}x half-width"
    if bad:
        detail += "; " + "; ".join(bad[:3])
    return CheckResult("mc-convergence", not bad, detail)


def _prepare(items: list[tuple[SocialGraph, Money]]) -> list[_Prepared]:
    prepared = []
    for graph, budget in items:
        try:
            ev = ExactEvaluator(graph)
            opt = brute_force_solve(graph, budget, ev)
        except ValueError as exc:
            prepared.append(_Prepared(graph, budget, None, 0.0, str(exc)))
            continue
        prepared.append(_Prepared(graph, budget, ev, opt.value))
    return prepared


def _ratio_check(
    name: str, items: list[_Prepared], solve, required_factor
) -> CheckResult:
    worst = float("inf")
    failures = []
    for idx, item in enumerate(items):
        if item.error is not None:
            failures.append(
                f"instance {idx}: {item.error}\n" + _dump(item.graph, item.budget)
            )
            continue
        try:
            sol = solve(item.graph, item.budget, item.ev)
            validate_solution(item.graph, sol)
            value = item.ev.spread(sol)
        except ValueError as exc:
            failures.append(f"instance {idx}: {exc}\n" + _dump(item.graph, item.budget))
            continue
        need = required_factor(item.graph) * item.opt_value
        ratio = 1.0 if item.opt_value == 0.0 else value / item.opt_value
        worst = min(worst, ratio)
        if value < need - 1e-9:
            failures.append(
                f"instance {idx}: {value:.6f} < {need:.6f}\n"
                + _dump(item.graph, item.budget)
            )
    detail = f"{len(items)} instances, min ratio {worst:.6f}"
    if failures:
        detail += "\n" + "\n".join(failures[:2])
    return CheckResult(name, not failures, detail)


def check_feasibility(seed: int, runs: int = 60) -> CheckResult:
    """Solvers never overspend or buy an edge off a non-seed."""
    bad = 0
    b_auto = ThresholdGreedySolver().resolved_threshold()
    for i in range(runs):
        graph = generate_instance(
            4, n_candidates=4, cost_low=0.05, seed=seed + 9000 + i
        )
        budget = Money((1 + (i % 3)) * ONE.micros + (i % 7) * 137_000)
        ev = ExactEvaluator(graph)
        for sol in (
            greedy_lb(graph, budget, ev),
            greedy_general(graph, budget, b_auto, ev),
        ):
            try:
                validate_solution(graph, sol)
            except ValueError:
                bad += 1
            if sol.cost > budget:
                bad += 1
    return CheckResult("feasibility", bad == 0, f"{runs} fuzzed budgets, {bad} violations")


def check_determinism(seed: int) -> CheckResult:
    """Re-solving and re-estimating with the same seed is bit-identical."""
    graph = generate_instance(5, n_candidates=5, cost_low=0.1, seed=seed + 11_000)
    budget = Money(2 * ONE.micros + 500_000)
    runs = []
    for _ in range(2):
        ev = ExactEvaluator(graph)
        sol = greedy_lb(graph, budget, ev)
        mc = MonteCarloEvaluator(graph, SampleBank(seed), 5_000)
        runs.append((sol.as_tuples(), mc.evaluate(sol).value))
    same = runs[0] == runs[1]
    return CheckResult("determinism", same, f"two runs identical: {same}")


def _load_instance_files(paths: list[tuple[str, str | None]]):
    loaded = []
    for edge_path, cand_path in paths:
        with open(edge_path, "r", encoding="utf-8") as fh:
            edge_text = fh.read()
        cand_text = None
        if cand_path is not None:
            with open(cand_path, "r", encoding="utf-8") as fh:
                cand_text = fh.read()
        loaded.append((load_graph(edge_text, cand_text), 2 * ONE))
    return loaded


def run_verification(
    seed: int = 0,
    count: int = 50,
    hw_factor: float = 3.0,
    instance_files: list[tuple[str, str | None]] | None = None,
) -> list[CheckResult]:
    """The full deterministic check battery; one result per check."""
    results = [
        check_identity(seed),
        check_mc(seed, hw_factor=hw_factor),
    ]
    if instance_files is None:
        floor_items = _prepare(corpus(count, seed=seed + 20_000))
        cheap_items = _prepare(
            corpus(count, cost_floors=(0.01, 0.2, 0.6), seed=seed + 30_000)
        )
    else:
        try:
            loaded = _load_instance_files(instance_files)
        except (OSError, ValueError) as exc:
            results.append(CheckResult("instances-parse", False, str(exc)))
            return results
        floor_items = cheap_items = _prepare(loaded)
    b_auto = ThresholdGreedySolver().resolved_threshold()

    def floor_or_classic(curve):
        def factor(graph: SocialGraph) -> float:
            c = _floor(graph)
            return Q if c is None else curve(c)
        return factor

    results.append(_ratio_check(
        "ratio-greedy-lb", floor_items,
        lambda g, k, ev: greedy_lb(g, k, ev),
        floor_or_classic(lambda c: 0.5 * factor_lb_greedy(c)),
    ))
    results.append(_ratio_check(
        "ratio-enum", floor_items,
        lambda g, k, ev: enum_greedy(g, k, ev, M=4),
        floor_or_classic(factor_lb_greedy),
    ))
    results.append(_ratio_check(
        "ratio-general", cheap_items,
        lambda g, k, ev: greedy_general(g, k, b_auto, ev),
        lambda g: general_constant(),
    ))
    results.append(_ratio_check(
        "ratio-seed-only", floor_items,
        lambda g, k, ev: seed_only_greedy(g, k, ev),
        floor_or_classic(factor_seed_only),
    ))
    results.append(check_feasibility(seed))
    results.append(check_determinism(seed))
    return results
