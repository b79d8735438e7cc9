"""Ratio-greedy seed and edge selection under one shared budget.

The main loop repeatedly scores three move families against the current
partial solution: seeding a fresh node (price 1), buying a candidate
edge out of an already chosen seed (its own price), or taking a fresh
node together with one candidate edge leaving it (price 1 + edge). The
best gain-per-price move is committed when it still fits the remaining
budget; either way the considered elements retire so every move is
examined at most once. For a pair that does not fit, only the edge
retires and the node stays available for cheaper moves.

The solver returns the better of the loop's solution and a fallback:
the single best affordable seed-plus-edge purchase, which protects the
approximation quality when one expensive move dominates.

``enum_greedy`` strengthens the plain loop by trying every feasible
start of a fixed size and completing each with the same loop.
"""
from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable

from .graph import (
    SocialGraph,
    Solution,
    check_budget,
    empty_solution,
    make_solution,
)
from .money import Money, ONE, ZERO
from .moves import LazyQueue, Move, pick_best
from .spread import Evaluator


class EnumerationLimitError(ValueError):
    """The start-enumeration workload exceeds the configured cap."""


def _grow(
    graph: SocialGraph, sol: Solution, seed: int | None = None, edges: Iterable[int] = ()
) -> Solution:
    seeds, bought, cost = set(sol.seeds), set(sol.edges), sol.cost
    if seed is not None and seed not in seeds:
        seeds.add(seed)
        cost = cost + ONE
    for i in edges:
        if i not in bought:
            bought.add(i)
            cost = cost + graph.candidates[i].cost
    return Solution(frozenset(seeds), frozenset(bought), cost)


def _apply(sol: Solution, graph: SocialGraph, move: Move) -> Solution:
    return _grow(graph, sol, move.seed, move.edges)


def _seed_move(graph: SocialGraph, ev: Evaluator, sol: Solution, a: int) -> Move:
    gain = ev.delta(_grow(graph, sol, seed=a), sol)
    return Move("seed", a, (), gain, ONE)


def _edge_move(graph: SocialGraph, ev: Evaluator, sol: Solution, i: int) -> Move:
    gain = ev.delta(_grow(graph, sol, edges=(i,)), sol)
    return Move("edge", None, (i,), gain, graph.candidates[i].cost)


def _pair_move(graph: SocialGraph, ev: Evaluator, sol: Solution, i: int) -> Move:
    c = graph.candidates[i]
    gain = ev.delta(_grow(graph, sol, seed=c.src, edges=(i,)), sol)
    return Move("pair", c.src, (i,), gain, ONE + c.cost)


def _refresh(graph: SocialGraph, ev: Evaluator, sol_box: list[Solution]):
    def refresh(move: Move) -> Move:
        if move.kind == "seed":
            return _seed_move(graph, ev, sol_box[0], move.seed)
        if move.kind == "edge":
            return _edge_move(graph, ev, sol_box[0], move.edges[0])
        return _pair_move(graph, ev, sol_box[0], move.edges[0])

    return refresh


def _ratio_loop_eager(
    graph: SocialGraph,
    budget: Money,
    ev: Evaluator,
    unseen_nodes: set[int],
    unseen_edges: set[int],
    warm: Solution,
) -> Solution:
    sol = warm
    remaining = budget - warm.cost
    U, T = set(unseen_nodes), set(unseen_edges)
    while U or T:
        moves: list[Move] = []
        for a in sorted(U):
            moves.append(_seed_move(graph, ev, sol, a))
        for i in sorted(T):
            src = graph.candidates[i].src
            if src in sol.seeds:
                moves.append(_edge_move(graph, ev, sol, i))
            elif src in U:
                moves.append(_pair_move(graph, ev, sol, i))
        best = pick_best(moves)
        if best is None:
            break  # only edges whose source can no longer be seeded remain
        fits = remaining - best.cost >= ZERO
        if fits:
            sol = _apply(sol, graph, best)
            remaining = remaining - best.cost
        if best.kind == "seed":
            U.discard(best.seed)
        elif best.kind == "edge":
            T.discard(best.edges[0])
        else:
            T.discard(best.edges[0])
            if fits:
                U.discard(best.seed)
    return sol


def _ratio_loop_lazy(
    graph: SocialGraph,
    budget: Money,
    ev: Evaluator,
    unseen_nodes: set[int],
    unseen_edges: set[int],
    warm: Solution,
) -> Solution:
    sol_box = [warm]
    remaining = budget - warm.cost
    U, T = set(unseen_nodes), set(unseen_edges)
    queue = LazyQueue()
    version = 0
    for a in sorted(U):
        queue.push(_seed_move(graph, ev, sol_box[0], a), version)
    for i in sorted(T):
        src = graph.candidates[i].src
        if src in sol_box[0].seeds:
            queue.push(_edge_move(graph, ev, sol_box[0], i), version)
        elif src in U:
            queue.push(_pair_move(graph, ev, sol_box[0], i), version)

    def promote_edges_of(a: int) -> None:
        # a just became a seed: its pending pairs turn into plain edge buys,
        # seeded with the stale pair gain, which still upper-bounds them
        for i in sorted(T):
            c = graph.candidates[i]
            if c.src != a:
                continue
            identity = ("pair", a, (i,))
            stale = queue.last_gain(identity)
            if stale is None:
                continue
            queue.remove(identity)
            queue.push(Move("edge", None, (i,), stale, c.cost), version - 1)

    while U or T:
        best = queue.pop_current(version, _refresh(graph, ev, sol_box))
        if best is None:
            break
        fits = remaining - best.cost >= ZERO
        if fits:
            sol_box[0] = _apply(sol_box[0], graph, best)
            remaining = remaining - best.cost
            version += 1
        queue.remove(best.identity())
        if best.kind == "seed":
            U.discard(best.seed)
            if fits:
                promote_edges_of(best.seed)
            else:
                for i in sorted(T):
                    if graph.candidates[i].src == best.seed:
                        queue.remove(("pair", best.seed, (i,)))
        elif best.kind == "edge":
            T.discard(best.edges[0])
        else:
            T.discard(best.edges[0])
            if fits:
                U.discard(best.seed)
                queue.remove(("seed", best.seed, ()))
                promote_edges_of(best.seed)
    return sol_box[0]


def ratio_loop(
    graph: SocialGraph,
    budget: Money,
    ev: Evaluator,
    unseen_nodes: set[int],
    unseen_edges: set[int],
    warm: Solution,
    lazy: bool = False,
) -> Solution:
    """One pass of the three-move ratio loop from a warm start."""
    runner = _ratio_loop_lazy if lazy else _ratio_loop_eager
    return runner(graph, budget, ev, unseen_nodes, unseen_edges, warm)


def _best_pair_fallback(
    graph: SocialGraph, budget: Money, ev: Evaluator
) -> Solution | None:
    """Best affordable single seed-plus-edge purchase, by spread.

    With no affordable pair this degrades to the best single seed; with
    no affordable seed there is nothing to return.
    """
    if budget < ONE:
        return None
    best: Solution | None = None
    best_val = -1.0
    for i, c in enumerate(graph.candidates):
        if ONE + c.cost - budget > ZERO:
            continue
        sol = make_solution(graph, (c.src,), (i,))
        val = ev.spread(sol)
        if val > best_val:
            best, best_val = sol, val
    if best is None:
        for a in range(graph.n):
            sol = make_solution(graph, (a,))
            val = ev.spread(sol)
            if val > best_val:
                best, best_val = sol, val
    return best


def greedy_lb(
    graph: SocialGraph,
    budget: Money,
    ev: Evaluator,
    lazy: bool = False,
) -> Solution:
    """Ratio-greedy solver for costs bounded away from zero.

    Runs the three-move loop over the whole universe, then keeps the
    better of that and the best single affordable seed-plus-edge pair.
    """
    check_budget(budget)
    if budget < ONE:
        return empty_solution(graph)
    loop_sol = ratio_loop(
        graph, budget, ev, set(range(graph.n)),
        set(range(graph.num_candidates)), empty_solution(graph), lazy,
    )
    fallback = _best_pair_fallback(graph, budget, ev)
    if fallback is not None and ev.spread(fallback) > ev.spread(loop_sol):
        return fallback
    return loop_sol


def greedy_lb_restricted(
    graph: SocialGraph,
    budget: Money,
    ev: Evaluator,
    unseen_nodes: Iterable[int],
    unseen_edges: Iterable[int],
    warm: Solution,
    lazy: bool = False,
) -> Solution:
    """Complete a warm-start solution with the ratio loop only.

    The supplied universes must not overlap the warm solution, which
    must itself fit the budget. No pair fallback is applied.
    """
    U, T = set(unseen_nodes), set(unseen_edges)
    if U & warm.seeds:
        raise ValueError("unseen nodes overlap the warm solution's seeds")
    if T & warm.edges:
        raise ValueError("unseen edges overlap the warm solution's purchases")
    if warm.cost - budget > ZERO:
        raise ValueError("warm solution already exceeds the budget")
    return ratio_loop(graph, budget, ev, U, T, warm, lazy)


def enum_greedy(
    graph: SocialGraph,
    budget: Money,
    ev: Evaluator,
    M: int = 4,
    enumeration_cap: int = 200_000,
    lazy: bool = False,
) -> Solution:
    """Exhaustive small starts, each completed by the ratio loop.

    Takes the best over (i) every feasible solution with fewer than M
    elements and (ii) the loop completion of every feasible start with
    exactly M elements. Stronger than the plain loop, at a cost that
    grows like the number of size-M subsets.
    """
    check_budget(budget)
    if M < 1:
        raise ValueError("M must be at least 1")
    if math.comb(graph.n + graph.num_candidates, M) > enumeration_cap:
        raise EnumerationLimitError(
            f"C({graph.n + graph.num_candidates}, {M}) start sets exceed the cap "
            f"{enumeration_cap}"
        )
    best = empty_solution(graph)
    best_val = ev.spread(best)
    all_nodes = set(range(graph.n))
    all_edges = set(range(graph.num_candidates))
    max_seeds = min(graph.n, M, budget.micros // ONE.micros)

    def consider(sol: Solution) -> None:
        nonlocal best, best_val
        val = ev.spread(sol)
        if val > best_val:
            best, best_val = sol, val

    for size_a in range(int(max_seeds) + 1):
        for seeds in combinations(range(graph.n), size_a):
            base = make_solution(graph, seeds)
            if base.cost - budget > ZERO:
                continue
            pool = sorted(
                i for a in seeds for i in graph.candidates_from(a)
            )

            def extend(start: int, sol: Solution) -> None:
                total = len(sol.seeds) + len(sol.edges)
                if total == M:
                    completed = ratio_loop(
                        graph, budget, ev,
                        all_nodes - sol.seeds, all_edges - sol.edges, sol, lazy,
                    )
                    consider(completed)
                    return
                consider(sol)
                for idx in range(start, len(pool)):
                    i = pool[idx]
                    grown = _grow(graph, sol, edges=(i,))
                    if grown.cost - budget > ZERO:
                        continue
                    extend(idx + 1, grown)

            extend(0, base)
    return best


def seed_only_greedy(graph: SocialGraph, budget: Money, ev: Evaluator) -> Solution:
    """Plain greedy seeding that ignores the candidate universe."""
    check_budget(budget)
    sol = empty_solution(graph)
    remaining = budget
    U = set(range(graph.n))
    while U:
        best = pick_best([_seed_move(graph, ev, sol, a) for a in sorted(U)])
        if best is None:
            break
        if remaining - best.cost >= ZERO:
            sol = _apply(sol, graph, best)
            remaining = remaining - best.cost
        U.discard(best.seed)
    return sol
