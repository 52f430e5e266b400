from __future__ import annotations

import itertools

import pytest
from hypothesis import settings, strategies as st

from semistream.graph_core import Graph
from semistream.stream_engine import Instance

settings.register_profile("default", deadline=None, max_examples=150)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 12, max_edges: int | None = None) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    if not pairs:
        return Graph(n, ())
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True,
                           max_size=max_edges if max_edges is not None else len(pairs)))
    return Graph(n, tuple(chosen))


@st.composite
def instances(draw, max_n: int = 12, max_edges: int | None = None) -> Instance:
    return Instance(draw(graphs(max_n=max_n, max_edges=max_edges)), "drawn")


@st.composite
def bipartite_graphs(draw, max_side: int = 6) -> Graph:
    n1 = draw(st.integers(0, max_side))
    n2 = draw(st.integers(0, max_side))
    pairs = [(a, n1 + b) for a in range(n1) for b in range(n2)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n1 + n2, tuple(chosen))


def inst(n: int, edges) -> Instance:
    return Instance(Graph.from_pairs(n, edges), "t")


@pytest.fixture
def triangle_pendant() -> Instance:
    return inst(5, [(1, 2), (2, 3), (1, 3), (3, 4)])


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import ACCEPTANCE_LINES
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
