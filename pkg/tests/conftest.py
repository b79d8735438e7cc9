"""Shared instance builders and the acceptance-line reporter."""
from __future__ import annotations

import pytest

from spreadopt import SocialGraph, load_graph

ACCEPTANCE_LINES: list[tuple[int, str]] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Show one pass/fail line per acceptance criterion after the run."""
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def chain3() -> SocialGraph:
    """a -> b -> c, both probability one half, no candidates."""
    return load_graph("a b 0.5\nb c 0.5\n", None)


@pytest.fixture
def chain_with_candidate() -> SocialGraph:
    """s isolated, x -> y certain, one candidate s -> x certain at 0.4."""
    return load_graph("s\nx y 1.0\n", "s x 1.0 0.4\n")


def graph_of(edge_text: str, cand_text: str | None = None) -> SocialGraph:
    return load_graph(edge_text, cand_text)
