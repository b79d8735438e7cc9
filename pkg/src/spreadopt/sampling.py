"""Common random numbers for live-edge simulation.

Every (edge, replication) pair maps to one uniform draw through a
counter-based hash, so the coin an edge flips in replication r is the
same no matter which solution is being evaluated. Marginal gains
estimated by differencing two runs are then nonnegative by construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .graph import SocialGraph, Solution

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_INV53 = 2.0**-53


def _mix64(z: int) -> int:
    # splitmix64 finalizer
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """A well-spread child seed for the index-th cell of a batch run."""
    return _mix64(master_seed + _GAMMA * (index + 1))


def _mix64_np(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class SampleBank:
    """Deterministic per-(edge, replication) uniforms keyed by a master seed."""

    master_seed: int

    def _edge_state(self, edge_key: int) -> int:
        return _mix64(self.master_seed + _GAMMA * (edge_key + 1))

    def uniform(self, edge_key: int, replication: int) -> float:
        """The stored U[0, 1) draw for one edge coin in one replication."""
        h = _mix64(self._edge_state(edge_key) + _GAMMA * (replication + 1))
        return (h >> 11) * _INV53

    def uniforms(self, edge_key: int, replications: np.ndarray) -> np.ndarray:
        """Vectorized draws for one edge over many replications."""
        reps = np.asarray(replications, dtype=np.uint64)
        state = np.uint64(self._edge_state(edge_key))
        with np.errstate(over="ignore"):
            z = state + np.uint64(_GAMMA) * (reps + np.uint64(1))
        h = _mix64_np(z)
        return (h >> np.uint64(11)).astype(np.float64) * _INV53


@dataclass(frozen=True)
class LiveEdgeSample:
    """One replication's coin outcomes: the set of alive edge pairs."""

    replication: int
    alive: frozenset[tuple[int, int]]

    @classmethod
    def draw(
        cls,
        graph: "SocialGraph",
        sol: "Solution",
        bank: SampleBank,
        replication: int,
    ) -> "LiveEdgeSample":
        """Flip the stored coin of every fixed and bought edge."""
        alive: set[tuple[int, int]] = set()
        for e in graph.existing:
            if bank.uniform(graph.edge_key(e.src, e.dst), replication) < e.p:
                alive.add((e.src, e.dst))
        for i in sol.edges:
            c = graph.candidates[i]
            if bank.uniform(graph.edge_key(c.src, c.dst), replication) < c.p:
                alive.add((c.src, c.dst))
        return cls(replication, frozenset(alive))
