"""Exhaustive reference solvers for small instances.

These enumerate every feasible solution and report the true optimum,
for testing approximation ratios. Guards refuse instances whose subset
space would be too large to sweep.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .graph import SocialGraph, Solution, check_budget, empty_solution, make_solution
from .money import Money, ONE, ZERO
from .spread import Evaluator, ExactEvaluator


class OracleLimitError(ValueError):
    """Instance too large for exhaustive enumeration."""


@dataclass(frozen=True)
class OracleResult:
    solution: Solution
    value: float
    explored: int


class _Best:
    """Tracks the maximum, breaking value ties toward the smaller
    (sorted seeds, sorted edges) tuple so results never depend on
    enumeration order."""

    def __init__(self, sol: Solution, value: float):
        self.sol = sol
        self.value = value
        self.key = sol.as_tuples()
        self.explored = 0

    def offer(self, sol: Solution, value: float) -> None:
        self.explored += 1
        key = sol.as_tuples()
        if value > self.value or (value == self.value and key < self.key):
            self.sol, self.value, self.key = sol, value, key


def brute_force_solve(
    graph: SocialGraph,
    budget: Money,
    ev: Evaluator | None = None,
    node_limit: int = 6,
    cand_limit: int = 10,
) -> OracleResult:
    """True optimum over every feasible seed set plus edge purchase."""
    check_budget(budget)
    if graph.n > node_limit:
        raise OracleLimitError(f"{graph.n} nodes exceed the oracle limit {node_limit}")
    if graph.num_candidates > cand_limit:
        raise OracleLimitError(
            f"{graph.num_candidates} candidates exceed the oracle limit {cand_limit}"
        )
    if ev is None:
        ev = ExactEvaluator(graph)
    best = _Best(empty_solution(graph), 0.0)
    max_seeds = min(graph.n, int(budget.micros // ONE.micros))
    for size in range(max_seeds + 1):
        for seeds in combinations(range(graph.n), size):
            base = make_solution(graph, seeds)
            pool = sorted(i for a in seeds for i in graph.candidates_from(a))
            _sweep_edges(graph, base, pool, budget, ev, best)
    return OracleResult(best.sol, best.value, best.explored)


def brute_force_edge_solve(
    graph: SocialGraph,
    seeds: Iterable[int],
    budget: Money,
    ev: Evaluator | None = None,
    cand_limit: int = 10,
) -> OracleResult:
    """True optimum edge purchase for a fixed seed set and edge budget."""
    check_budget(budget)
    if graph.num_candidates > cand_limit:
        raise OracleLimitError(
            f"{graph.num_candidates} candidates exceed the oracle limit {cand_limit}"
        )
    if ev is None:
        ev = ExactEvaluator(graph)
    base = make_solution(graph, seeds)
    pool = sorted(i for a in sorted(base.seeds) for i in graph.candidates_from(a))
    best = _Best(base, ev.spread(base))
    _sweep_edges(graph, base, pool, base.cost + budget, ev, best)
    return OracleResult(best.sol, best.value, best.explored)


def _sweep_edges(
    graph: SocialGraph,
    base: Solution,
    pool: list[int],
    budget: Money,
    ev: Evaluator,
    best: _Best,
) -> None:
    if base.cost - budget > ZERO:
        return

    def extend(start: int, sol: Solution) -> None:
        best.offer(sol, ev.spread(sol))
        for idx in range(start, len(pool)):
            i = pool[idx]
            cost = sol.cost + graph.candidates[i].cost
            if cost - budget > ZERO:
                continue
            grown = Solution(sol.seeds, sol.edges | {i}, cost)
            extend(idx + 1, grown)

    extend(0, base)
