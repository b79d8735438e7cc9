"""Directed influence graph with a universe of purchasable candidate edges.

File formats
------------
Edge file: one record per line, ``src dst p`` with whitespace separators.
A line holding a single token declares an isolated node. ``#`` starts a
comment, blank lines are skipped. Node labels are arbitrary tokens and are
assigned ids in order of first appearance.

Candidate file: either ``src dst p cost`` lines under the same comment
rules, or a JSON generator config. ``{"mode": "uniform", "cost": c,
"p": q}`` covers every ordered non-edge with a constant price;
``{"mode": "range", "cost_min": a, "cost_max": b, "p": q, "seed": s}``
draws prices uniformly from [a, b], rounded to six decimal places.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, MutableMapping, Sequence

import numpy as np

from .money import Money, ONE, ZERO, money_sum

NodeId = int


class GraphFormatError(ValueError):
    """Malformed graph or candidate input; carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class InvalidSolutionError(ValueError):
    """A solution that violates the problem constraints."""


class NoCandidatesError(ValueError):
    """Raised where an empty candidate universe leaves a quantity undefined."""


@dataclass(frozen=True)
class Edge:
    src: NodeId
    dst: NodeId
    p: float


@dataclass(frozen=True)
class CandidateEdge:
    src: NodeId
    dst: NodeId
    p: float
    cost: Money


def _check_prob(p: float, what: str, line: int | None = None) -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise GraphFormatError(f"{what} probability {p} outside [0, 1]", line)
    return p


class SocialGraph:
    """Immutable graph: fixed edges plus priced candidate augmentations.

    Nodes are ids ``0..n-1`` with string labels. Candidate edges are
    addressed by their index into :attr:`candidates`.
    """

    def __init__(
        self,
        labels: Sequence[str],
        existing: Iterable[Edge],
        candidates: Iterable[CandidateEdge] = (),
    ):
        self.labels: tuple[str, ...] = tuple(labels)
        self.n: int = len(self.labels)
        self.existing: tuple[Edge, ...] = tuple(existing)
        self.candidates: tuple[CandidateEdge, ...] = tuple(candidates)
        self._validate()
        self.label_to_id: dict[str, int] = {s: i for i, s in enumerate(self.labels)}
        self._existing_pairs = {(e.src, e.dst) for e in self.existing}
        self._cand_id = {(c.src, c.dst): i for i, c in enumerate(self.candidates)}
        by_src: dict[int, list[int]] = {}
        for i, c in enumerate(self.candidates):
            by_src.setdefault(c.src, []).append(i)
        self._cands_by_src = {u: tuple(ids) for u, ids in by_src.items()}

    def _validate(self) -> None:
        if len(set(self.labels)) != self.n:
            raise GraphFormatError("duplicate node labels")
        for s in self.labels:
            if not s or any(ch.isspace() for ch in s) or s.startswith("#"):
                raise GraphFormatError(f"bad node label {s!r}")
        seen: set[tuple[int, int]] = set()
        for e in self.existing:
            self._check_endpoints(e.src, e.dst, "edge")
            _check_prob(e.p, f"edge {e.src}->{e.dst}")
            if (e.src, e.dst) in seen:
                raise GraphFormatError(f"duplicate edge {e.src}->{e.dst}")
            seen.add((e.src, e.dst))
        cseen: set[tuple[int, int]] = set()
        for c in self.candidates:
            self._check_endpoints(c.src, c.dst, "candidate")
            _check_prob(c.p, f"candidate {c.src}->{c.dst}")
            if not (ZERO <= c.cost <= ONE):
                raise GraphFormatError(
                    f"candidate {c.src}->{c.dst} cost {c.cost} outside [0, 1]"
                )
            if (c.src, c.dst) in seen:
                raise GraphFormatError(
                    f"candidate {c.src}->{c.dst} duplicates an existing edge"
                )
            if (c.src, c.dst) in cseen:
                raise GraphFormatError(f"duplicate candidate {c.src}->{c.dst}")
            cseen.add((c.src, c.dst))

    def _check_endpoints(self, u: int, v: int, what: str) -> None:
        for x in (u, v):
            if not isinstance(x, int) or not (0 <= x < self.n):
                raise GraphFormatError(f"{what} endpoint {x} out of range")
        if u == v:
            raise GraphFormatError(f"{what} {u}->{v} is a self-loop")

    # -- lookups -------------------------------------------------------

    @property
    def num_candidates(self) -> int:
        return len(self.candidates)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._existing_pairs

    def candidate_id(self, u: int, v: int) -> int | None:
        return self._cand_id.get((u, v))

    def candidates_from(self, u: int) -> tuple[int, ...]:
        """Ids of candidate edges whose source is ``u``."""
        return self._cands_by_src.get(u, ())

    def c_min(self) -> Money:
        """Cheapest candidate price; undefined when the universe is empty."""
        if not self.candidates:
            raise NoCandidatesError("candidate universe is empty")
        return min(c.cost for c in self.candidates)

    def edge_key(self, u: int, v: int) -> int:
        """Stable integer identity for the coin of edge (u, v)."""
        return u * self.n + v

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SocialGraph)
            and self.labels == other.labels
            and self.existing == other.existing
            and self.candidates == other.candidates
        )

    def __repr__(self) -> str:
        return (
            f"SocialGraph(n={self.n}, edges={len(self.existing)}, "
            f"candidates={self.num_candidates})"
        )


# -- parsing -----------------------------------------------------------


def _content_lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        yield lineno, line.split()


def _parse_float(token: str, what: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise GraphFormatError(f"bad {what} {token!r}", lineno) from None
    if not np.isfinite(value):
        raise GraphFormatError(f"bad {what} {token!r}", lineno)
    return value


def parse_edge_lines(text: str) -> tuple[list[str], list[tuple[int, int, float]]]:
    """Parse an edge file into labels and id-based edge triples."""
    labels: list[str] = []
    ids: dict[str, int] = {}

    def intern(token: str) -> int:
        if token not in ids:
            ids[token] = len(labels)
            labels.append(token)
        return ids[token]

    edges: list[tuple[int, int, float]] = []
    for lineno, toks in _content_lines(text):
        if len(toks) == 1:
            intern(toks[0])
        elif len(toks) == 3:
            u, v = intern(toks[0]), intern(toks[1])
            p = _parse_float(toks[2], "probability", lineno)
            if not (0.0 <= p <= 1.0):
                raise GraphFormatError(f"probability {p} outside [0, 1]", lineno)
            if u == v:
                raise GraphFormatError(f"self-loop on {toks[0]!r}", lineno)
            edges.append((u, v, p))
        else:
            raise GraphFormatError(
                f"expected 'src dst p' or a single node label, got {len(toks)} tokens",
                lineno,
            )
    return labels, edges


def parse_candidate_lines(
    text: str,
    label_to_id: MutableMapping[str, int],
    labels: list[str],
    existing_pairs: set[tuple[int, int]] | frozenset = frozenset(),
) -> list[tuple[int, int, float, Money]]:
    """Parse ``src dst p cost`` lines; unseen labels become new nodes."""
    out: list[tuple[int, int, float, Money]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, toks in _content_lines(text):
        if len(toks) != 4:
            raise GraphFormatError(
                f"expected 'src dst p cost', got {len(toks)} tokens", lineno
            )
        endpoints = []
        for tok in toks[:2]:
            if tok not in label_to_id:
                label_to_id[tok] = len(labels)
                labels.append(tok)
            endpoints.append(label_to_id[tok])
        pair = (endpoints[0], endpoints[1])
        if pair in existing_pairs:
            raise GraphFormatError(
                f"candidate {toks[0]}->{toks[1]} duplicates an existing edge", lineno
            )
        if pair in seen:
            raise GraphFormatError(
                f"duplicate candidate {toks[0]}->{toks[1]}", lineno
            )
        seen.add(pair)
        p = _parse_float(toks[2], "probability", lineno)
        try:
            cost = Money.from_decimal(toks[3])
        except ValueError as exc:
            raise GraphFormatError(str(exc), lineno) from None
        out.append((pair[0], pair[1], p, cost))
    return out


def _non_edges(n: int, existing_pairs: set[tuple[int, int]]) -> list[tuple[int, int]]:
    return [
        (u, v)
        for u in range(n)
        for v in range(n)
        if u != v and (u, v) not in existing_pairs
    ]


def expand_candidate_config(
    config: Mapping[str, object],
    n: int,
    existing_pairs: set[tuple[int, int]],
) -> list[tuple[int, int, float, Money]]:
    """Expand a generator config over every ordered non-edge, deterministically."""
    mode = config.get("mode")
    pairs = _non_edges(n, existing_pairs)
    p = _check_prob(config.get("p", 0.0), "candidate")
    if mode == "uniform":
        cost = Money.from_float(float(config["cost"]))
        return [(u, v, p, cost) for u, v in pairs]
    if mode == "range":
        lo, hi = float(config["cost_min"]), float(config["cost_max"])
        if lo > hi:
            raise GraphFormatError(f"cost_min {lo} exceeds cost_max {hi}")
        rng = np.random.default_rng(int(config.get("seed", 0)))
        draws = rng.uniform(lo, hi, size=len(pairs))
        return [
            (u, v, p, Money.from_float(round(float(c), 6)))
            for (u, v), c in zip(pairs, draws)
        ]
    raise GraphFormatError(f"unknown candidate generator mode {mode!r}")


def load_graph(
    edge_text: str,
    candidate_source: str | Mapping[str, object] | None = None,
) -> SocialGraph:
    """Build a graph from an edge file plus an optional candidate source.

    ``candidate_source`` may be candidate-file text, JSON generator config
    text, or an already-parsed config mapping.
    """
    labels, edge_triples = parse_edge_lines(edge_text)
    existing = [Edge(u, v, p) for u, v, p in edge_triples]
    pairs = {(u, v) for u, v, _ in edge_triples}
    quads: list[tuple[int, int, float, Money]] = []
    if candidate_source is not None:
        if isinstance(candidate_source, Mapping):
            quads = expand_candidate_config(candidate_source, len(labels), pairs)
        else:
            stripped = candidate_source.strip()
            if stripped.startswith("{"):
                try:
                    config = json.loads(stripped)
                except json.JSONDecodeError as exc:
                    raise GraphFormatError(f"bad candidate config: {exc}") from None
                quads = expand_candidate_config(config, len(labels), pairs)
            else:
                table = {s: i for i, s in enumerate(labels)}
                quads = parse_candidate_lines(candidate_source, table, labels, pairs)
    candidates = [CandidateEdge(u, v, p, c) for u, v, p, c in quads]
    return SocialGraph(labels, existing, candidates)


def serialize_graph(graph: SocialGraph) -> str:
    """Edge-file text that parses back to an identical graph."""
    lines = [label for label in graph.labels]
    for e in graph.existing:
        lines.append(f"{graph.labels[e.src]} {graph.labels[e.dst]} {e.p!r}")
    return "\n".join(lines) + "\n"


def serialize_candidates(graph: SocialGraph) -> str:
    """Candidate-file text for the graph's candidate universe."""
    lines = [
        f"{graph.labels[c.src]} {graph.labels[c.dst]} {c.p!r} {c.cost}"
        for c in graph.candidates
    ]
    return "\n".join(lines) + ("\n" if lines else "")


# -- solutions ---------------------------------------------------------


@dataclass(frozen=True)
class Solution:
    """A seed set plus bought candidate edge ids, with its exact price."""

    seeds: frozenset[int]
    edges: frozenset[int]
    cost: Money

    def as_tuples(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(sorted(self.seeds)), tuple(sorted(self.edges))


def solution_cost(graph: SocialGraph, seeds: Iterable[int], edge_ids: Iterable[int]) -> Money:
    """Exact price: one unit per seed plus each bought edge's price."""
    seeds = set(seeds)
    return len(seeds) * ONE + money_sum(graph.candidates[i].cost for i in set(edge_ids))


def make_solution(
    graph: SocialGraph, seeds: Iterable[int], edge_ids: Iterable[int] = ()
) -> Solution:
    """Validate and price a solution."""
    sol = Solution(frozenset(seeds), frozenset(edge_ids),
                   solution_cost(graph, seeds, edge_ids))
    validate_solution(graph, sol)
    return sol


def empty_solution(graph: SocialGraph) -> Solution:
    return Solution(frozenset(), frozenset(), ZERO)


def validate_solution(graph: SocialGraph, sol: Solution) -> None:
    """Raise InvalidSolutionError unless the solution is well formed.

    Checks id ranges, that every bought edge leaves a seed, and that the
    recorded cost matches the exact recomputed price.
    """
    for a in sol.seeds:
        if not (isinstance(a, int) and 0 <= a < graph.n):
            raise InvalidSolutionError(f"seed {a!r} out of range")
    for i in sol.edges:
        if not (isinstance(i, int) and 0 <= i < graph.num_candidates):
            raise InvalidSolutionError(f"candidate id {i!r} out of range")
        if graph.candidates[i].src not in sol.seeds:
            c = graph.candidates[i]
            raise InvalidSolutionError(
                f"bought edge {c.src}->{c.dst} does not leave a seed"
            )
    expected = solution_cost(graph, sol.seeds, sol.edges)
    if sol.cost != expected:
        raise InvalidSolutionError(
            f"recorded cost {sol.cost} != recomputed {expected}"
        )


def check_budget(budget: Money) -> Money:
    """Budgets must be nonnegative."""
    if budget < ZERO:
        raise ValueError(f"budget {budget} is negative")
    return budget
