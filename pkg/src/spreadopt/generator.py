"""Seeded random instance generation for tests and benchmarks."""
from __future__ import annotations

import numpy as np

from .graph import CandidateEdge, Edge, SocialGraph
from .money import Money


def generate_instance(
    n: int,
    *,
    edge_prob: float = 0.3,
    p_low: float = 0.1,
    p_high: float = 0.9,
    n_candidates: int = 6,
    cost_low: float = 0.2,
    cost_high: float = 1.0,
    cand_p_low: float | None = None,
    cand_p_high: float | None = None,
    seed: int = 0,
) -> SocialGraph:
    """A random directed graph with priced candidate non-edges.

    Pairs are visited in a fixed order and all draws come from one
    seeded generator, so the same arguments always produce the same
    instance. Probabilities and prices are rounded to six decimals.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    for name, lo, hi in (
        ("p", p_low, p_high),
        ("cost", cost_low, cost_high),
    ):
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValueError(f"{name} range [{lo}, {hi}] invalid")
    if cand_p_low is None:
        cand_p_low, cand_p_high = p_low, p_high
    rng = np.random.default_rng(seed)
    labels = [f"v{i}" for i in range(n)]
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    existing: list[Edge] = []
    for u, v in pairs:
        if rng.random() < edge_prob:
            existing.append(Edge(u, v, round(float(rng.uniform(p_low, p_high)), 6)))
    taken = {(e.src, e.dst) for e in existing}
    free = [pair for pair in pairs if pair not in taken]
    k = min(n_candidates, len(free))
    chosen_idx = sorted(rng.choice(len(free), size=k, replace=False)) if k else []
    candidates = []
    for idx in chosen_idx:
        u, v = free[idx]
        p = round(float(rng.uniform(cand_p_low, cand_p_high)), 6)
        cost = Money.from_float(round(float(rng.uniform(cost_low, cost_high)), 6))
        candidates.append(CandidateEdge(u, v, p, cost))
    return SocialGraph(labels, existing, candidates)


def corpus(
    count: int,
    *,
    cost_floors: tuple[float, ...] = (0.2, 0.5, 1.0),
    budgets: tuple[int, ...] = (1, 2, 3),
    n: int = 5,
    n_candidates: int = 6,
    seed: int = 20_000,
) -> list[tuple[SocialGraph, Money]]:
    """A deterministic mixed corpus cycling price floors and budgets."""
    out: list[tuple[SocialGraph, Money]] = []
    for i in range(count):
        floor = cost_floors[i % len(cost_floors)]
        budget = budgets[(i // len(cost_floors)) % len(budgets)]
        graph = generate_instance(
            n,
            n_candidates=n_candidates,
            cost_low=floor,
            cost_high=1.0,
            seed=seed + i,
        )
        out.append((graph, Money(budget * 10**6)))
    return out
