"""Candidate moves considered by the greedy solvers.

A move bundles what would be added (a seed, an edge, or a seed with
edges), its marginal spread and its marginal price. Selection prefers
the highest gain-per-cost ratio; zero-cost moves rank above every finite
ratio and order among themselves by raw gain. Ties break toward the
cheaper move, then the lexicographically smallest (seed id, edge ids),
so selection is a strict total order and runs are reproducible.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

from .money import Money, ZERO

_KIND_RANK = {"seed": 0, "edge": 1, "pair": 2, "bundle": 3}
_NO_SEED = 1 << 60


@dataclass(frozen=True)
class Move:
    kind: str
    seed: int | None
    edges: tuple[int, ...]
    gain: float
    cost: Money

    def identity(self) -> tuple:
        return (self.kind, self.seed, self.edges)

    def ratio_class(self) -> tuple[int, float]:
        """(finiteness rank, magnitude); free positive-gain moves outrank all."""
        if self.cost == ZERO:
            return (1, self.gain) if self.gain > 0.0 else (0, 0.0)
        return (0, self.gain / self.cost.to_float())

    def lex(self) -> tuple[int, ...]:
        head = self.seed if self.seed is not None else _NO_SEED
        return (head, *self.edges, _KIND_RANK[self.kind])


def better(a: Move, b: Move) -> bool:
    """Strict selection order between two moves."""
    ra, rb = a.ratio_class(), b.ratio_class()
    if ra != rb:
        return ra > rb
    if a.cost != b.cost:
        return a.cost < b.cost
    return a.lex() < b.lex()


def pick_best(moves: list[Move]) -> Move | None:
    best: Move | None = None
    for m in moves:
        if best is None or better(m, best):
            best = m
    return best


class _HeapEntry:
    """Heap adapter: the preferred move is the smallest entry."""

    __slots__ = ("move", "version", "token")

    def __init__(self, move: Move, version: int, token: int):
        self.move = move
        self.version = version
        self.token = token

    def __lt__(self, other: "_HeapEntry") -> bool:
        return better(self.move, other.move)


class LazyQueue:
    """A lazy best-move queue over stale gains.

    Marginal gains only shrink as the solution grows, so a stale gain is
    an upper bound; an entry re-evaluated under the current solution that
    still tops the queue is the true argmax. Superseded entries are
    dropped on pop via per-move tokens.
    """

    def __init__(self) -> None:
        self._heap: list[_HeapEntry] = []
        self._token: dict[tuple, int] = {}
        self._gain: dict[tuple, float] = {}
        self._serial = 0

    def push(self, move: Move, version: int) -> None:
        self._serial += 1
        self._token[move.identity()] = self._serial
        self._gain[move.identity()] = move.gain
        heapq.heappush(self._heap, _HeapEntry(move, version, self._serial))

    def remove(self, identity: tuple) -> None:
        self._token.pop(identity, None)
        self._gain.pop(identity, None)

    def last_gain(self, identity: tuple) -> float | None:
        return self._gain.get(identity)

    def pop_current(self, version: int, refresh) -> Move | None:
        """Next move that is fresh at ``version``; stale tops are
        re-evaluated through ``refresh`` and pushed back."""
        while self._heap:
            entry = heapq.heappop(self._heap)
            identity = entry.move.identity()
            if self._token.get(identity) != entry.token:
                continue
            if entry.version == version:
                return entry.move
            self.push(refresh(entry.move), version)
        return None
