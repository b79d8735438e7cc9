"""Expected spread under the independent cascade live-edge view.

A solution's spread is the expected number of nodes reachable from its
seeds when every edge of the fixed graph plus the bought candidates is
kept alive independently with its own probability. The exact engine
enumerates coin outcomes of the uncertain edges after pruning everything
unreachable; the Monte Carlo engine replays coins from a shared
:class:`~spreadopt.sampling.SampleBank` so that estimates for nested
solutions are coupled and their differences are nonnegative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph import SocialGraph, Solution
from .sampling import LiveEdgeSample, SampleBank

Z_95 = 1.96


class ExactLimitError(ValueError):
    """Too many uncertain edges for exhaustive outcome enumeration."""


@dataclass(frozen=True)
class SpreadEstimate:
    """A spread value with sampling metadata; exact values carry zeros."""

    value: float
    replications: int
    half_width: float


def required_replications(n: int, abs_err: float, confidence: float = 0.95) -> int:
    """Replications guaranteeing |estimate - truth| <= abs_err with the
    requested confidence, by Hoeffding's inequality on [0, n] samples."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if abs_err <= 0:
        raise ValueError("abs_err must be positive")
    if not (0.0 < confidence < 1.0):
        raise ValueError("confidence must lie in (0, 1)")
    return math.ceil(n * n * math.log(2.0 / (1.0 - confidence)) / (2.0 * abs_err**2))


def reachable(graph: SocialGraph, sample: LiveEdgeSample, sol: Solution) -> frozenset[int]:
    """Nodes activated in one replication: closure of the seeds over the
    sample's alive edges, restricted to the fixed plus bought edges."""
    allowed = {(e.src, e.dst) for e in graph.existing}
    allowed.update(
        (graph.candidates[i].src, graph.candidates[i].dst) for i in sol.edges
    )
    adj: dict[int, list[int]] = {}
    for u, v in sample.alive:
        if (u, v) in allowed:
            adj.setdefault(u, []).append(v)
    seen = set(sol.seeds)
    frontier = list(sol.seeds)
    while frontier:
        nxt: list[int] = []
        for u in frontier:
            for v in adj.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return frozenset(seen)


# -- shared machinery --------------------------------------------------


def _union_edges(graph: SocialGraph, sol: Solution) -> list[tuple[int, int, float]]:
    out = [(e.src, e.dst, e.p) for e in graph.existing]
    for i in sorted(sol.edges):
        c = graph.candidates[i]
        out.append((c.src, c.dst, c.p))
    return out


def _closure(seeds: Iterable[int], edges: list[tuple[int, int, float]]) -> set[int]:
    """Nodes reachable from the seeds when every positive edge works."""
    adj: dict[int, list[int]] = {}
    for u, v, p in edges:
        if p > 0.0:
            adj.setdefault(u, []).append(v)
    seen = set(seeds)
    frontier = list(seen)
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen


def _coverage_counts(
    seeds: frozenset[int],
    edges: list[tuple[int, int, float]],
    branch_bit: dict[tuple[int, int], int],
    masks: np.ndarray,
    alive_vecs: dict[int, np.ndarray],
) -> np.ndarray:
    """Activated-node count per coin outcome, as |seeds| + covered heads.

    Edges into a seed are skipped (their target is already active) and an
    edge with an unreachable source never fires.
    """
    usable = [(u, v, p) for u, v, p in edges if v not in seeds]
    heads = sorted({v for _, v, _ in usable})
    hbit = {v: i for i, v in enumerate(heads)}
    size = masks.size
    n_words = max(1, (len(heads) + 63) // 64)
    reach = np.zeros((n_words, size), dtype=np.uint64)
    plan = []
    for u, v, p in usable:
        if u not in seeds and u not in hbit:
            continue
        bit = branch_bit.get((u, v))
        vw, vb = divmod(hbit[v], 64)
        if u in seeds:
            plan.append((None, None, vw, np.uint64(vb), bit))
        else:
            uw, ub = divmod(hbit[u], 64)
            plan.append((uw, np.uint64(ub), vw, np.uint64(vb), bit))
    one = np.uint64(1)
    while True:
        before = reach.copy()
        for uw, ub, vw, vb, bit in plan:
            if uw is None:
                src = one if bit is None else alive_vecs[bit]
            else:
                src = (reach[uw] >> ub) & one
                if bit is not None:
                    src = src & alive_vecs[bit]
            reach[vw] |= src << vb
        if np.array_equal(reach, before):
            break
    counts = np.zeros(size, dtype=np.int64)
    for w in range(n_words):
        counts += np.bitwise_count(reach[w]).astype(np.int64)
    return counts + len(seeds)


def _branch_setup(
    kept: list[tuple[int, int, float]], exact_limit: int
) -> tuple[dict[tuple[int, int], int], np.ndarray, np.ndarray, dict[int, np.ndarray]]:
    """Assign a coin bit to each uncertain edge and tabulate outcome mass."""
    branch_bit: dict[tuple[int, int], int] = {}
    ps: list[float] = []
    for u, v, p in kept:
        if p < 1.0:
            branch_bit[(u, v)] = len(ps)
            ps.append(p)
    if len(ps) > exact_limit:
        raise ExactLimitError(
            f"{len(ps)} uncertain edges exceed the exact enumeration limit "
            f"{exact_limit}; use the Monte Carlo estimator instead"
        )
    masks = np.arange(1 << len(ps), dtype=np.uint64)
    probs = np.ones(masks.size, dtype=np.float64)
    alive_vecs: dict[int, np.ndarray] = {}
    one = np.uint64(1)
    for bit, p in enumerate(ps):
        vec = (masks >> np.uint64(bit)) & one
        alive_vecs[bit] = vec
        probs *= np.where(vec.astype(bool), p, 1.0 - p)
    return branch_bit, masks, probs, alive_vecs


def sigma_exact(graph: SocialGraph, sol: Solution, exact_limit: int = 20) -> SpreadEstimate:
    """Exact expected spread by enumerating the uncertain edges' coins."""
    seeds = sol.seeds
    if not seeds:
        return SpreadEstimate(0.0, 0, 0.0)
    union = _union_edges(graph, sol)
    reach_set = _closure(seeds, union)
    kept = [
        (u, v, p)
        for u, v, p in union
        if p > 0.0 and u in reach_set and v not in seeds
    ]
    branch_bit, masks, probs, alive_vecs = _branch_setup(kept, exact_limit)
    counts = _coverage_counts(seeds, kept, branch_bit, masks, alive_vecs)
    value = float(probs @ counts)
    value = min(max(value, float(len(seeds))), float(graph.n))
    return SpreadEstimate(value, 0, 0.0)


def sigma_mc(
    graph: SocialGraph,
    sol: Solution,
    bank: SampleBank,
    replications: int,
    window_start: int = 0,
) -> SpreadEstimate:
    """Monte Carlo spread over a window of bank replications, with a 95%
    confidence half-width."""
    if replications < 1:
        raise ValueError("replications must be at least 1")
    seeds = sol.seeds
    if not seeds:
        return SpreadEstimate(0.0, replications, 0.0)
    union = _union_edges(graph, sol)
    reach_set = _closure(seeds, union)
    kept = [
        (u, v, p)
        for u, v, p in union
        if p > 0.0 and u in reach_set and v not in seeds
    ]
    heads = sorted({v for _, v, _ in kept})
    hbit = {v: i for i, v in enumerate(heads)}
    reps = np.arange(window_start, window_start + replications, dtype=np.uint64)
    alive: dict[tuple[int, int], np.ndarray | None] = {}
    for u, v, p in kept:
        alive[(u, v)] = None if p >= 1.0 else bank.uniforms(graph.edge_key(u, v), reps) < p
    active = np.zeros((len(heads), replications), dtype=bool)
    plan = []
    for u, v, p in kept:
        if u not in seeds and u not in hbit:
            continue
        plan.append((hbit.get(u) if u not in seeds else None, hbit[v], alive[(u, v)]))
    while True:
        before = active.copy()
        for ub, vb, live in plan:
            if ub is None:
                src = live if live is not None else True
            else:
                src = active[ub] if live is None else active[ub] & live
            active[vb] |= src
        if np.array_equal(active, before):
            break
    counts = len(seeds) + active.sum(axis=0, dtype=np.int64)
    value = float(counts.mean())
    sd = float(counts.std(ddof=1)) if replications > 1 else 0.0
    half = Z_95 * sd / math.sqrt(replications)
    return SpreadEstimate(value, replications, half)


def _require_nested(sup: Solution, sub: Solution) -> None:
    if not (sub.seeds <= sup.seeds and sub.edges <= sup.edges):
        raise ValueError("difference requires the smaller solution to be contained")


def delta_live_edge_sum(
    graph: SocialGraph, sup: Solution, sub: Solution, exact_limit: int = 20
) -> float:
    """Spread difference computed as one sum over joint coin outcomes.

    Each outcome is scored for the larger solution, then rescored for the
    smaller one with the extra bought edges forced dead. Equals the
    difference of the two exact spreads.
    """
    _require_nested(sup, sub)
    union = _union_edges(graph, sup)
    allowed_sub = {(e.src, e.dst) for e in graph.existing}
    allowed_sub.update(
        (graph.candidates[i].src, graph.candidates[i].dst) for i in sub.edges
    )
    reach_set = _closure(sup.seeds, union)
    kept = [
        (u, v, p)
        for u, v, p in union
        if p > 0.0 and u in reach_set and v not in sub.seeds
    ]
    branch_bit, masks, probs, alive_vecs = _branch_setup(kept, exact_limit)
    counts_sup = _coverage_counts(sup.seeds, kept, branch_bit, masks, alive_vecs)
    kept_sub = [(u, v, p) for u, v, p in kept if (u, v) in allowed_sub]
    counts_sub = _coverage_counts(sub.seeds, kept_sub, branch_bit, masks, alive_vecs)
    return float(probs @ (counts_sup - counts_sub))


def delta(graph: SocialGraph, sup: Solution, sub: Solution, evaluator: "Evaluator") -> float:
    """Marginal spread of a solution over a nested smaller one."""
    _require_nested(sup, sub)
    return evaluator.delta(sup, sub)


# -- evaluators --------------------------------------------------------


class Evaluator:
    """Caching spread evaluator; subclasses fill in :meth:`_compute`."""

    def __init__(self, graph: SocialGraph):
        self.graph = graph
        self._cache: dict[tuple[frozenset[int], frozenset[int]], SpreadEstimate] = {}

    def _compute(self, sol: Solution) -> SpreadEstimate:
        raise NotImplementedError

    def evaluate(self, sol: Solution) -> SpreadEstimate:
        key = (sol.seeds, sol.edges)
        est = self._cache.get(key)
        if est is None:
            est = self._compute(sol)
            self._cache[key] = est
        return est

    def spread(self, sol: Solution) -> float:
        return self.evaluate(sol).value

    def delta(self, sup: Solution, sub: Solution) -> float:
        _require_nested(sup, sub)
        return self.evaluate(sup).value - self.evaluate(sub).value


class ExactEvaluator(Evaluator):
    """Exact spreads, with a dense outcome table on small universes.

    When the whole candidate universe plus the uncertain fixed edges fits
    in ``table_bits`` coins and the graph has at most 16 nodes, per-node
    reachability is tabulated once over every outcome; evaluations then
    mask out unbought candidate coins and take one weighted popcount.
    """

    def __init__(self, graph: SocialGraph, exact_limit: int = 20, table_bits: int = 16):
        super().__init__(graph)
        self.exact_limit = exact_limit
        self._universe: list[tuple[int, int, float, int | None]] = []
        for e in graph.existing:
            if 0.0 < e.p < 1.0:
                self._universe.append((e.src, e.dst, e.p, None))
        for i, c in enumerate(graph.candidates):
            if c.p > 0.0:
                self._universe.append((c.src, c.dst, c.p, i))
        self._table_ok = len(self._universe) <= table_bits and graph.n <= 16
        self._table_built = False
        self._seed_rows: dict[frozenset[int], np.ndarray] = {}

    def _build_table(self) -> None:
        g = self.graph
        n_bits = len(self._universe)
        masks = np.arange(1 << n_bits, dtype=np.uint64)
        one = np.uint64(1)
        alive = [(masks >> np.uint64(b)) & one for b in range(n_bits)]
        probs = np.ones(masks.size, dtype=np.float64)
        for b, (_, _, p, _) in enumerate(self._universe):
            probs *= np.where(alive[b].astype(bool), p, 1.0 - p)
        const_edges = [
            (e.src, e.dst) for e in g.existing if e.p >= 1.0
        ]
        node_reach = np.zeros((g.n, masks.size), dtype=np.uint32)
        for s in range(g.n):
            reach = np.full(masks.size, np.uint32(1 << s), dtype=np.uint32)
            while True:
                before = reach.copy()
                for b, (u, v, _, _) in enumerate(self._universe):
                    src = ((reach >> np.uint32(u)) & np.uint32(1)).astype(np.uint64)
                    reach |= ((src & alive[b]) << np.uint64(v)).astype(np.uint32)
                for u, v in const_edges:
                    src = (reach >> np.uint32(u)) & np.uint32(1)
                    reach |= src << np.uint32(v)
                if np.array_equal(reach, before):
                    break
            node_reach[s] = reach
        self._masks = masks
        self._probs = probs
        self._node_reach = node_reach
        fixed_bits = 0
        cand_bit: dict[int, int] = {}
        for b, (_, _, _, cand) in enumerate(self._universe):
            if cand is None:
                fixed_bits |= 1 << b
            else:
                cand_bit[cand] = b
        self._fixed_bits = np.uint64(fixed_bits)
        self._cand_bit = cand_bit
        self._table_built = True

    def _seed_counts(self, seeds: frozenset[int]) -> np.ndarray:
        rows = self._seed_rows.get(seeds)
        if rows is None:
            acc = np.zeros(self._masks.size, dtype=np.uint32)
            for s in seeds:
                acc |= self._node_reach[s]
            rows = np.bitwise_count(acc).astype(np.float64)
            self._seed_rows[seeds] = rows
        return rows

    def _compute(self, sol: Solution) -> SpreadEstimate:
        if not sol.seeds:
            return SpreadEstimate(0.0, 0, 0.0)
        if not self._table_ok:
            return sigma_exact(self.graph, sol, self.exact_limit)
        if not self._table_built:
            self._build_table()
        rel = int(self._fixed_bits)
        for i in sol.edges:
            b = self._cand_bit.get(i)
            if b is not None:
                rel |= 1 << b
        counts = self._seed_counts(sol.seeds)
        idx = self._masks & np.uint64(rel)
        value = float(self._probs @ counts[idx])
        value = min(max(value, float(len(sol.seeds))), float(self.graph.n))
        return SpreadEstimate(value, 0, 0.0)


class MonteCarloEvaluator(Evaluator):
    """Monte Carlo spreads over a fixed replication window of one bank."""

    def __init__(
        self,
        graph: SocialGraph,
        bank: SampleBank,
        replications: int,
        window_start: int = 0,
    ):
        super().__init__(graph)
        self.bank = bank
        self.replications = int(replications)
        self.window_start = int(window_start)
        if self.replications < 1:
            raise ValueError("replications must be at least 1")

    def _compute(self, sol: Solution) -> SpreadEstimate:
        return sigma_mc(
            self.graph, sol, self.bank, self.replications, self.window_start
        )

    def fresh_window(self) -> "MonteCarloEvaluator":
        """An evaluator over the next disjoint window of replications."""
        return MonteCarloEvaluator(
            self.graph,
            self.bank,
            self.replications,
            self.window_start + self.replications,
        )
