"""Estimator-style front ends for the solvers.

Each solver is a scikit-learn style estimator: constructor only stores
parameters, ``fit(graph)`` runs the solve and exposes the result through
trailing-underscore attributes (``seeds_``, ``bought_edges_``, ``cost_``,
``spread_``), and ``get_params``/``set_params`` work as usual. Under a
Monte Carlo evaluator the reported spread is re-estimated on a fresh
replication window so the selection noise does not bias it.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .graph import SocialGraph, Solution, validate_solution
from .money import Money
from .oracle import brute_force_solve
from .ratios import optimal_threshold
from .sampling import SampleBank
from .spread import (
    Evaluator,
    ExactEvaluator,
    MonteCarloEvaluator,
    required_replications,
)
from .greedy import enum_greedy, greedy_lb, seed_only_greedy
from .threshold import greedy_general

DEFAULT_REPLICATIONS = 10_000


def as_money(value) -> Money:
    """Coerce a budget or price argument to exact money."""
    if isinstance(value, Money):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Money(value * 10**6)
    if isinstance(value, str):
        return Money.from_decimal(value)
    if isinstance(value, float):
        return Money.from_float(value)
    raise TypeError(f"cannot interpret {value!r} as an amount")


class BaseSpreadSolver(BaseEstimator):
    """Shared fitting logic; subclasses implement :meth:`_solve`."""

    def __init__(
        self,
        budget=1,
        evaluator: str = "exact",
        replications: int | None = None,
        abs_err: float | None = None,
        confidence: float = 0.95,
        master_seed: int = 0,
        exact_limit: int = 20,
    ):
        self.budget = budget
        self.evaluator = evaluator
        self.replications = replications
        self.abs_err = abs_err
        self.confidence = confidence
        self.master_seed = master_seed
        self.exact_limit = exact_limit

    def _resolve_replications(self, graph: SocialGraph) -> int:
        if self.replications is not None:
            if self.replications < 1:
                raise ValueError("replications must be at least 1")
            return int(self.replications)
        if self.abs_err is not None:
            return required_replications(graph.n, self.abs_err, self.confidence)
        return DEFAULT_REPLICATIONS

    def _make_evaluator(self, graph: SocialGraph) -> Evaluator:
        if self.evaluator == "exact":
            return ExactEvaluator(graph, exact_limit=self.exact_limit)
        if self.evaluator == "mc":
            bank = SampleBank(self.master_seed)
            return MonteCarloEvaluator(graph, bank, self._resolve_replications(graph))
        raise ValueError(f"unknown evaluator {self.evaluator!r}")

    def _solve(self, graph: SocialGraph, budget: Money, ev: Evaluator) -> Solution:
        raise NotImplementedError

    def fit(self, X: SocialGraph, y=None) -> "BaseSpreadSolver":
        """Solve the instance; the target argument is ignored."""
        if not isinstance(X, SocialGraph):
            raise TypeError("fit expects a SocialGraph")
        budget = as_money(self.budget)
        ev = self._make_evaluator(X)
        sol = self._solve(X, budget, ev)
        validate_solution(X, sol)
        if sol.cost > budget:
            raise RuntimeError(f"solver overspent: {sol.cost} > {budget}")
        reporter = ev.fresh_window() if isinstance(ev, MonteCarloEvaluator) else ev
        est = reporter.evaluate(sol)
        self.graph_ = X
        self.evaluator_ = ev
        self.solution_ = sol
        self.seeds_ = tuple(sorted(sol.seeds))
        self.bought_edges_ = tuple(
            (X.candidates[i].src, X.candidates[i].dst) for i in sorted(sol.edges)
        )
        self.edge_ids_ = tuple(sorted(sol.edges))
        self.cost_ = sol.cost
        self.estimate_ = est
        self.spread_ = est.value
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "solution_"):
            raise NotFittedError("call fit first")

    def score(self, X=None, y=None) -> float:
        """Expected spread of the fitted solution."""
        self._check_fitted()
        return self.spread_


class RatioGreedySolver(BaseSpreadSolver):
    """Three-move ratio greedy with the pair fallback.

    Guaranteed half of the price-floor curve when every candidate price
    is bounded away from zero. ``lazy=True`` uses the stale-gain queue;
    the selected solution is identical either way.
    """

    def __init__(
        self,
        budget=1,
        evaluator="exact",
        replications=None,
        abs_err=None,
        confidence=0.95,
        master_seed=0,
        exact_limit=20,
        lazy: bool = False,
    ):
        super().__init__(
            budget, evaluator, replications, abs_err, confidence, master_seed,
            exact_limit,
        )
        self.lazy = lazy

    def _solve(self, graph, budget, ev):
        return greedy_lb(graph, budget, ev, lazy=self.lazy)


class EnumerationGreedySolver(BaseSpreadSolver):
    """Ratio greedy strengthened by exhausting every start of size M."""

    def __init__(
        self,
        budget=1,
        evaluator="exact",
        replications=None,
        abs_err=None,
        confidence=0.95,
        master_seed=0,
        exact_limit=20,
        M: int = 4,
        enumeration_cap: int = 200_000,
    ):
        super().__init__(
            budget, evaluator, replications, abs_err, confidence, master_seed,
            exact_limit,
        )
        self.M = M
        self.enumeration_cap = enumeration_cap

    def _solve(self, graph, budget, ev):
        return enum_greedy(
            graph, budget, ev, M=self.M, enumeration_cap=self.enumeration_cap
        )


class ThresholdGreedySolver(BaseSpreadSolver):
    """Threshold-split greedy for universes with arbitrarily cheap edges.

    ``b="auto"`` picks the threshold maximizing the worst-case factor.
    """

    def __init__(
        self,
        budget=1,
        evaluator="exact",
        replications=None,
        abs_err=None,
        confidence=0.95,
        master_seed=0,
        exact_limit=20,
        b="auto",
    ):
        super().__init__(
            budget, evaluator, replications, abs_err, confidence, master_seed,
            exact_limit,
        )
        self.b = b

    def resolved_threshold(self) -> Money:
        if isinstance(self.b, str) and self.b == "auto":
            return Money.from_float(optimal_threshold()[0])
        return as_money(self.b)

    def _solve(self, graph, budget, ev):
        return greedy_general(graph, budget, self.resolved_threshold(), ev)


class SeedOnlySolver(BaseSpreadSolver):
    """Greedy seeding that never buys an edge."""

    def _solve(self, graph, budget, ev):
        return seed_only_greedy(graph, budget, ev)


class BruteForceSolver(BaseSpreadSolver):
    """Exhaustive optimum for small instances; also exposes explored_."""

    def __init__(
        self,
        budget=1,
        evaluator="exact",
        replications=None,
        abs_err=None,
        confidence=0.95,
        master_seed=0,
        exact_limit=20,
        node_limit: int = 6,
        cand_limit: int = 10,
    ):
        super().__init__(
            budget, evaluator, replications, abs_err, confidence, master_seed,
            exact_limit,
        )
        self.node_limit = node_limit
        self.cand_limit = cand_limit

    def _solve(self, graph, budget, ev):
        result = brute_force_solve(
            graph, budget, ev, node_limit=self.node_limit, cand_limit=self.cand_limit
        )
        self.explored_ = result.explored
        return result.solution


SOLVERS: dict[str, type[BaseSpreadSolver]] = {
    "greedy-lb": RatioGreedySolver,
    "enum": EnumerationGreedySolver,
    "general": ThresholdGreedySolver,
    "seed-only": SeedOnlySolver,
    "brute": BruteForceSolver,
}
