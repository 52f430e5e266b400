"""One-pass greedy maximal matching.

Also serves as the first pass of the wing-based three-pass algorithms.
"""

from __future__ import annotations

from collections.abc import Iterable
from typing import Any

from .graph_core import Edge
from .stream_engine import MemoryMeter, StreamingAlgorithm


class GreedyMatcher:
    """Incremental greedy matching with O(1) per-edge membership checks."""

    def __init__(self, meter: MemoryMeter | None = None):
        self.mate: dict[int, int] = {}
        self.edges: list[Edge] = []
        self.meter = meter

    def offer(self, e: Edge) -> bool:
        a, b = e
        mate = self.mate
        if a in mate or b in mate:
            return False
        mate[a] = b
        mate[b] = a
        self.edges.append(e)
        if self.meter is not None:
            self.meter.retain()
        return True

    def matching(self) -> frozenset[Edge]:
        return frozenset(self.edges)


def greedy_maximal(stream: Iterable[Edge]) -> frozenset[Edge]:
    g = GreedyMatcher()
    for e in stream:
        g.offer(e)
    return g.matching()


class GreedyAlgorithm(StreamingAlgorithm):
    name = "greedy"
    passes = 1

    def __init__(self, n: int, meter: MemoryMeter | None = None):
        super().__init__(n, meter)
        self.greedy = GreedyMatcher(self.meter)

    def process(self, edge: Edge) -> None:
        self.greedy.offer(edge)

    def finish(self) -> tuple[frozenset[Edge], dict[str, Any]]:
        m0 = self.greedy.matching()
        return m0, {"M0": m0}
