"""Exhaustive ground-truth solver."""
import numpy as np
import pytest

from spreadopt import (
    ExactEvaluator,
    Money,
    OracleLimitError,
    brute_force_edge_solve,
    brute_force_solve,
    generate_instance,
    load_graph,
    make_solution,
    sigma_exact,
)


def _k(text):
    return Money.from_decimal(text)


def test_worthless_candidates_two_seeds():
    g = load_graph("a\nb\nc\n", "a b 0.0 0.5\n")
    r = brute_force_solve(g, _k("2"), ExactEvaluator(g))
    assert r.value == 2.0
    assert len(r.solution.seeds) == 2 and not r.solution.edges


def test_chain_instance_optimum(chain_with_candidate):
    r = brute_force_solve(chain_with_candidate, _k("2"), ExactEvaluator(chain_with_candidate))
    assert r.value == 3.0
    assert sorted(r.solution.seeds) == [0]
    assert sorted(r.solution.edges) == [0]


def test_zero_budget():
    g = load_graph("a b 0.5\n", None)
    r = brute_force_solve(g, Money(0), ExactEvaluator(g))
    assert r.value == 0.0
    assert not r.solution.seeds and not r.solution.edges


def test_result_invariants(chain_with_candidate):
    r = brute_force_solve(chain_with_candidate, _k("1.5"), ExactEvaluator(chain_with_candidate))
    assert r.solution.cost <= _k("1.5")
    assert r.value == sigma_exact(chain_with_candidate, r.solution).value
    assert r.explored >= 1


def test_refuses_oversized_instances():
    big = generate_instance(7, n_candidates=3, seed=1)
    with pytest.raises(OracleLimitError):
        brute_force_solve(big, _k("2"), ExactEvaluator(big))
    wide = generate_instance(5, n_candidates=11, seed=2)
    with pytest.raises(OracleLimitError):
        brute_force_solve(wide, _k("2"), ExactEvaluator(wide))
    # limits are configurable
    r = brute_force_solve(big, _k("1"), ExactEvaluator(big), node_limit=7)
    assert r.value >= 1.0


def test_oracle_dominates_random_feasible_solutions():
    rng = np.random.default_rng(0)
    for seed in range(3):
        g = generate_instance(5, n_candidates=6, cost_low=0.1, seed=1700 + seed)
        ev = ExactEvaluator(g)
        budget = _k("2.5")
        opt = brute_force_solve(g, budget, ev)
        checked = 0
        while checked < 1000:
            n_seeds = int(rng.integers(0, 3))
            seeds = sorted(rng.choice(g.n, size=n_seeds, replace=False).tolist())
            pool = [i for a in seeds for i in g.candidates_from(a)]
            take = int(rng.integers(0, len(pool) + 1)) if pool else 0
            edges = (
                sorted(rng.choice(pool, size=take, replace=False).tolist())
                if take else []
            )
            sol = make_solution(g, seeds, edges)
            if sol.cost > budget:
                continue
            checked += 1
            assert ev.spread(sol) <= opt.value + 1e-12


def test_oracle_is_permutation_invariant():
    base = "a b 0.6\nb c 0.4\n"
    cands = "a c 0.8 0.5\nc a 0.3 0.4\n"
    relabeled = "x y 0.6\ny z 0.4\n"
    rcands = "x z 0.8 0.5\nz x 0.3 0.4\n"
    g1 = load_graph(base, cands)
    g2 = load_graph(relabeled, rcands)
    v1 = brute_force_solve(g1, _k("2"), ExactEvaluator(g1)).value
    v2 = brute_force_solve(g2, _k("2"), ExactEvaluator(g2)).value
    assert v1 == pytest.approx(v2, abs=1e-12)
    # A genuine permutation (reversed declaration order), not just renaming.
    g3 = load_graph("c\nb\na\n" + base, cands)
    v3 = brute_force_solve(g3, _k("2"), ExactEvaluator(g3)).value
    assert v3 == pytest.approx(v1, abs=1e-12)


def test_edge_oracle_examples():
    g = load_graph("a\nx\ny\n", "a x 1.0 0.5\na y 0.5 0.5\n")
    ev = ExactEvaluator(g)
    zero = brute_force_edge_solve(g, [0], Money(0), ev)
    assert not zero.solution.edges
    single = brute_force_edge_solve(g, [0], _k("0.5"), ev)
    assert sorted(single.solution.edges) == [0]
    assert single.value == 2.0
    both = brute_force_edge_solve(g, [0], _k("1"), ev)
    assert sorted(both.solution.edges) == [0, 1]
    assert both.value == 2.5


def test_edge_oracle_respects_seed_set_sources():
    g = load_graph("a\nb\nx\n", "a x 1.0 0.2\nb x 1.0 0.1\n")
    ev = ExactEvaluator(g)
    r = brute_force_edge_solve(g, [0], _k("1"), ev)
    assert all(g.candidates[i].src == 0 for i in r.solution.edges)


def test_ties_resolve_to_lexicographically_smallest():
    # Two symmetric candidates with equal value: the smaller ids win.
    g = load_graph("a\nb\nc\n", None)
    r = brute_force_solve(g, _k("2"), ExactEvaluator(g))
    assert sorted(r.solution.seeds) == [0, 1]
