"""Graph ingestion, validation, serialization, and solution checking."""
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spreadopt import (
    GraphFormatError,
    InvalidSolutionError,
    Money,
    NoCandidatesError,
    Solution,
    empty_solution,
    load_graph,
    make_solution,
    serialize_candidates,
    serialize_graph,
    solution_cost,
    validate_solution,
)


def test_basic_parse():
    g = load_graph("0 1 0.5\n", "1 2 0.5 0.3\n")
    assert g.n == 3
    assert len(g.existing) == 1
    assert len(g.candidates) == 1
    assert g.existing[0].p == 0.5
    assert str(g.candidates[0].cost) == "0.300000"


def test_empty_candidate_source_means_pure_seed_selection():
    g = load_graph("0 1 0.5\n", None)
    assert g.candidates == ()
    with pytest.raises(NoCandidatesError):
        g.c_min()


def test_comments_blank_lines_and_node_declarations():
    text = "# header\n\na\n b c 0.25 \n# trailing\n"
    g = load_graph(text, None)
    assert g.labels == ("a", "b", "c")
    assert len(g.existing) == 1


def test_parse_errors_carry_line_numbers():
    with pytest.raises(GraphFormatError) as err:
        load_graph("a b 0.5\na b\n", None)
    assert err.value.line == 2
    with pytest.raises(GraphFormatError) as err:
        load_graph("a b 1.5\n", None)
    assert err.value.line == 1
    with pytest.raises(GraphFormatError) as err:
        load_graph("a b 0.5\n", "a b 0.5 0.3\n")  # collides with existing
    assert err.value.line == 1


def test_candidate_file_may_introduce_new_nodes():
    g = load_graph("a b 0.5\n", "q b 0.5 0.3\n")
    assert g.labels == ("a", "b", "q")
    assert g.candidates[0].src == 2


def test_rejects_duplicates_self_loops_and_bad_ranges():
    with pytest.raises(GraphFormatError):
        load_graph("a a 0.5\n", None)
    with pytest.raises(GraphFormatError):
        load_graph("a b 0.5\na b 0.6\n", None)
    with pytest.raises(GraphFormatError):
        load_graph("a b 0.5\n", "a c 0.5 1.5\n")
    with pytest.raises(GraphFormatError):
        load_graph("a b 0.5\n", "a c 0.5 -0.1\n")
    with pytest.raises(GraphFormatError):
        load_graph("a b 0.5\n", "a c 0.5 0.1\na c 0.6 0.2\n")


def test_uniform_config_covers_all_non_edges():
    cfg = json.dumps({"mode": "uniform", "cost": 1, "p": 0.5})
    g = load_graph("a\nb\nc\n", cfg)
    assert len(g.candidates) == 6
    assert all(str(c.cost) == "1.000000" for c in g.candidates)
    assert all(c.p == 0.5 for c in g.candidates)


def test_range_config_is_seeded_and_in_range():
    cfg = json.dumps(
        {"mode": "range", "cost_min": 0.2, "cost_max": 0.9, "p": 0.7, "seed": 11}
    )
    g1 = load_graph("a\nb\nc\n", cfg)
    g2 = load_graph("a\nb\nc\n", cfg)
    assert g1 == g2
    assert len(g1.candidates) == 6
    lo, hi = Money.from_decimal("0.2"), Money.from_decimal("0.9")
    assert all(lo <= c.cost <= hi for c in g1.candidates)


def test_c_min_examples():
    g = load_graph("a b 0.5\n", "a c 0.9 0.5\nb c 0.9 0.3\n")
    assert str(g.c_min()) == "0.300000"
    g2 = load_graph("a b 0.5\n", "a c 0.9 1\nb c 0.9 1\n")
    assert str(g2.c_min()) == "1.000000"


def test_solution_cost_examples():
    g = load_graph("a\nb\nc\n", "a b 0.5 0.3\na c 0.5 0.1\nb c 0.5 0.2\nb a 0.5 0.7\n")
    assert str(solution_cost(g, [0, 1], [0])) == "2.300000"
    assert solution_cost(g, [], []).micros == 0
    g2 = load_graph("a\nb\nc\nd\n", "a b 0.5 0.1\na c 0.5 0.2\na d 0.5 0.7\n")
    assert str(solution_cost(g2, [0], [0, 1, 2])) == "2.000000"


def test_round_trip_through_serialization(chain_with_candidate):
    g = chain_with_candidate
    g2 = load_graph(serialize_graph(g), serialize_candidates(g))
    assert g2 == g


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 10**6))
def test_round_trip_random_graphs(seed):
    from spreadopt import generate_instance

    g = generate_instance(5, n_candidates=5, seed=seed)
    g2 = load_graph(serialize_graph(g), serialize_candidates(g))
    assert g2 == g


def test_validate_solution_accepts_and_rejects(chain_with_candidate):
    g = chain_with_candidate
    validate_solution(g, make_solution(g, [0], [0]))
    validate_solution(g, empty_solution(g))
    # edge bought while its source is not a seed
    with pytest.raises(InvalidSolutionError):
        validate_solution(
            g, Solution(frozenset([1]), frozenset([0]), solution_cost(g, [1], [0]))
        )
    # wrong recorded cost
    with pytest.raises(InvalidSolutionError):
        validate_solution(g, Solution(frozenset([0]), frozenset(), Money(123)))
    # out-of-range ids
    with pytest.raises(InvalidSolutionError):
        validate_solution(
            g, Solution(frozenset([9]), frozenset(), solution_cost(g, [0], []))
        )
    with pytest.raises(InvalidSolutionError):
        validate_solution(
            g, Solution(frozenset([0]), frozenset([5]), solution_cost(g, [0], [0]))
        )


@settings(deadline=None, max_examples=100)
@given(st.integers(0, 10**6), st.data())
def test_validator_rejects_fuzzed_corruptions(seed, data):
    from spreadopt import generate_instance

    g = generate_instance(4, n_candidates=4, seed=seed)
    seeds = data.draw(
        st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n)
    )
    pool = [i for a in seeds for i in g.candidates_from(a)]
    edges = data.draw(st.sets(st.sampled_from(pool), max_size=len(pool))) if pool else set()
    good = make_solution(g, seeds, edges)
    validate_solution(g, good)
    # Any single corruption must be rejected.
    with pytest.raises(InvalidSolutionError):
        validate_solution(
            g, Solution(good.seeds, good.edges, good.cost + Money(1))
        )
    non_seed = next((v for v in range(g.n) if v not in seeds), None)
    if non_seed is not None:
        off = [i for i in g.candidates_from(non_seed) if i not in edges]
        if off:
            bad_edges = good.edges | {off[0]}
            with pytest.raises(InvalidSolutionError):
                validate_solution(g, Solution(good.seeds, bad_edges, good.cost))


def test_labels_are_order_stable():
    g = load_graph("z a 0.5\nb z 0.5\n", None)
    assert g.labels == ("z", "a", "b")
    assert serialize_graph(g).splitlines()[0] == "z"
