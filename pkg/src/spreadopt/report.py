"""Structured run results with lossless serialization."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Any

from .graph import NoCandidatesError, SocialGraph, Solution
from .ratios import factor_lb_greedy, factor_seed_only, general_constant, Q
from .spread import SpreadEstimate


@dataclass
class RunReport:
    """Everything one solver run produced, JSON- and CSV-friendly."""

    config: dict[str, Any]
    solution: dict[str, Any]
    spread: dict[str, Any]
    bound: dict[str, Any]
    oracle: dict[str, Any] | None = None
    wall_time_s: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunReport":
        return cls(
            config=data["config"],
            solution=data["solution"],
            spread=data["spread"],
            bound=data["bound"],
            oracle=data.get("oracle"),
            wall_time_s=data.get("wall_time_s"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))


def solution_block(graph: SocialGraph, sol: Solution, budget) -> dict[str, Any]:
    return {
        "seeds": [graph.labels[a] for a in sorted(sol.seeds)],
        "edges": [
            {
                "src": graph.labels[graph.candidates[i].src],
                "dst": graph.labels[graph.candidates[i].dst],
                "p": graph.candidates[i].p,
                "cost": str(graph.candidates[i].cost),
            }
            for i in sorted(sol.edges)
        ],
        "cost": str(sol.cost),
        "budget": str(budget),
    }


def spread_block(est: SpreadEstimate) -> dict[str, Any]:
    return {
        "value": est.value,
        "replications": est.replications,
        "half_width": est.half_width,
    }


def bound_block(graph: SocialGraph, algorithm: str) -> dict[str, Any]:
    """The worst-case factor applicable to this run's algorithm."""
    try:
        c_min = graph.c_min().to_float()
    except NoCandidatesError:
        if algorithm in ("seed-only", "greedy-lb", "enum"):
            return {
                "algorithm": algorithm,
                "regime": "seed-only",
                "c_min": None,
                "factor": Q,
                "note": "no candidate edges; classic greedy seeding guarantee",
            }
        c_min = None
    factors = {
        "greedy-lb": lambda: 0.5 * factor_lb_greedy(c_min),
        "enum": lambda: factor_lb_greedy(c_min),
        "seed-only": lambda: factor_seed_only(c_min),
        "general": general_constant,
        "brute": lambda: 1.0,
    }
    factor = factors[algorithm]() if algorithm in factors else None
    return {"c_min": c_min, "factor": factor, "algorithm": algorithm}
