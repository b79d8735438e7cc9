"""Greedy solver for arbitrary candidate prices, including free-ish ones.

Very cheap edges break plain per-price ratios, so moves are split by a
price threshold b. Each round scores: a fresh seed alone, a candidate
edge out of an existing seed, a fresh seed with one expensive edge
(price >= b), and a fresh seed packaged with a greedily bought bundle of
its cheap edges (prices < b, bundle total < b). The best ratio move is
committed when it fits the remaining budget and actually gains spread;
the elements it examined retire either way.

The bundle sub-problem (fix the seeds, buy edges under an edge budget)
is solved by ``budgeted_edge_greedy``: ratio greedy plus a best single
affordable edge, whichever spreads further.
"""
from __future__ import annotations

from typing import Iterable

from .graph import SocialGraph, Solution, check_budget, empty_solution, make_solution
from .money import Money, ONE, TICK, ZERO
from .moves import Move, better, pick_best
from .spread import Evaluator
from .greedy import _apply, _edge_move, _grow, _pair_move, _seed_move


def _edge_greedy_core(
    graph: SocialGraph,
    base: Solution,
    pool: Iterable[int],
    budget: Money,
    ev: Evaluator,
) -> tuple[int, ...]:
    """Ratio-greedy edge buying from a fixed base; zero gains retire unbought."""
    current = base
    remaining = budget
    T = set(pool)
    chosen: list[int] = []
    while T:
        best = pick_best([_edge_move(graph, ev, current, i) for i in sorted(T)])
        if best is None:
            break
        i = best.edges[0]
        if best.gain > 0.0 and remaining - best.cost >= ZERO:
            current = _apply(current, graph, best)
            remaining = remaining - best.cost
            chosen.append(i)
        T.discard(i)
    return tuple(sorted(chosen))


def _best_single_edge(
    graph: SocialGraph,
    base: Solution,
    pool: Iterable[int],
    budget: Money,
    ev: Evaluator,
) -> int | None:
    best_id: int | None = None
    best_val = -1.0
    for i in sorted(set(pool)):
        if graph.candidates[i].cost - budget > ZERO:
            continue
        val = ev.spread(_grow(graph, base, edges=(i,)))
        if val > best_val:
            best_id, best_val = i, val
    return best_id


def _buy_edges(
    graph: SocialGraph,
    base: Solution,
    pool: Iterable[int],
    budget: Money,
    ev: Evaluator,
) -> tuple[int, ...]:
    """Greedy bundle versus the best single edge, by resulting spread."""
    pool = sorted(set(pool))
    chosen = _edge_greedy_core(graph, base, pool, budget, ev)
    single = _best_single_edge(graph, base, pool, budget, ev)
    if single is not None:
        greedy_val = ev.spread(_grow(graph, base, edges=chosen))
        single_val = ev.spread(_grow(graph, base, edges=(single,)))
        if single_val > greedy_val:
            return (single,)
    return chosen


def budgeted_edge_greedy(
    graph: SocialGraph,
    seeds: Iterable[int],
    budget: Money,
    ev: Evaluator,
) -> Solution:
    """Buy candidate edges for a fixed seed set under an edge budget."""
    check_budget(budget)
    base = make_solution(graph, seeds)
    pool = [i for a in sorted(base.seeds) for i in graph.candidates_from(a)]
    chosen = _buy_edges(graph, base, pool, budget, ev)
    return _grow(graph, base, edges=chosen)


def best_bundle_move(
    graph: SocialGraph,
    current: Solution,
    unseen_nodes: Iterable[int],
    threshold: Money,
    ev: Evaluator,
    pool: Iterable[int] | None = None,
) -> Move | None:
    """Best fresh seed packaged with a bundle of its cheap edges.

    For each unseen node, buys edges priced strictly under the threshold
    with bundle total strictly under it too, then ranks the package by
    gain over price. With no cheap edges this degrades to plain seed
    moves. Returns None when no unseen node remains.
    """
    if threshold <= ZERO:
        raise ValueError("threshold must be positive")
    if pool is None:
        pool = [i for i in range(graph.num_candidates) if i not in current.edges]
    pool = sorted(set(pool))
    bundle_budget = threshold - TICK
    best: Move | None = None
    for a in sorted(set(unseen_nodes)):
        cheap = [
            i for i in pool
            if graph.candidates[i].src == a and graph.candidates[i].cost < threshold
        ]
        seeded = _grow(graph, current, seed=a)
        chosen = _buy_edges(graph, seeded, cheap, bundle_budget, ev)
        grown = _grow(graph, seeded, edges=chosen)
        move = Move(
            "bundle", a, chosen, ev.delta(grown, current), grown.cost - current.cost
        )
        if best is None or better(move, best):
            best = move
    return best


def _general_fallback(
    graph: SocialGraph, budget: Money, threshold: Money, ev: Evaluator
) -> Solution | None:
    """Best single affordable package: one seed with one expensive edge,
    or one seed with a cheap bundle (possibly empty)."""
    if budget < ONE:
        return None
    best: Solution | None = None
    best_val = -1.0

    def consider(sol: Solution) -> None:
        nonlocal best, best_val
        val = ev.spread(sol)
        if val > best_val:
            best, best_val = sol, val

    for i, c in enumerate(graph.candidates):
        if c.cost >= threshold and ONE + c.cost - budget <= ZERO:
            consider(make_solution(graph, (c.src,), (i,)))
    bundle_budget = min(threshold - TICK, budget - ONE)
    for a in range(graph.n):
        base = make_solution(graph, (a,))
        cheap = [
            i for i in graph.candidates_from(a)
            if graph.candidates[i].cost < threshold
        ]
        chosen = _buy_edges(graph, base, cheap, bundle_budget, ev)
        consider(_grow(graph, base, edges=chosen))
    return best


def greedy_general(
    graph: SocialGraph,
    budget: Money,
    threshold: Money,
    ev: Evaluator,
) -> Solution:
    """Threshold-split greedy handling arbitrarily cheap candidate edges."""
    check_budget(budget)
    if threshold <= ZERO:
        raise ValueError("threshold must be positive")
    if budget < ONE:
        return empty_solution(graph)
    sol = empty_solution(graph)
    remaining = budget
    U = set(range(graph.n))
    T = set(range(graph.num_candidates))
    while U or T:
        moves: list[Move] = []
        for a in sorted(U):
            moves.append(_seed_move(graph, ev, sol, a))
        for i in sorted(T):
            c = graph.candidates[i]
            if c.src in sol.seeds:
                moves.append(_edge_move(graph, ev, sol, i))
            elif c.src in U and c.cost >= threshold:
                moves.append(_pair_move(graph, ev, sol, i))
        if U:
            bundle = best_bundle_move(graph, sol, U, threshold, ev, pool=T)
            if bundle is not None:
                moves.append(bundle)
        best = pick_best(moves)
        if best is None:
            break
        if best.gain > 0.0 and remaining - best.cost >= ZERO:
            sol = _apply(sol, graph, best)
            remaining = remaining - best.cost
        if best.kind == "seed":
            U.discard(best.seed)
        elif best.kind == "edge":
            T.discard(best.edges[0])
        elif best.kind == "pair":
            U.discard(best.seed)
            T.discard(best.edges[0])
        else:
            U.discard(best.seed)
            T.difference_update(best.edges)
    fallback = _general_fallback(graph, budget, threshold, ev)
    if fallback is not None and ev.spread(fallback) > ev.spread(sol):
        return fallback
    return sol
