"""Greedy triangle-component algorithms (two-pass and three-pass variants).

The first pass grows an edge set P whose connected components have at most
three vertices and are each an isolated edge, a 2-edge path or a triangle.
Later passes attach at most one extra edge per component from two families:
edges joining a connection vertex to an isolated vertex (``A1``) and edges
joining connection vertices of two components (``A2``). The output is a
maximum matching of everything retained.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .exact_matching import max_matching_edges
from .graph_core import ContractError, Edge
from .stream_engine import MemoryMeter, StreamingAlgorithm


class ComponentKind(Enum):
    ISOLATED_VERTEX = "isolated_vertex"
    ISOLATED_EDGE = "isolated_edge"
    PATH2 = "path2"
    TRIANGLE = "triangle"


_EXPECTED_SHAPE = {
    ComponentKind.ISOLATED_VERTEX: (1, 0),
    ComponentKind.ISOLATED_EDGE: (2, 1),
    ComponentKind.PATH2: (3, 2),
    ComponentKind.TRIANGLE: (3, 3),
}


@dataclass(frozen=True)
class Component:
    cid: int
    members: tuple[int, ...]
    kind: ComponentKind
    middle: int | None = None

    def connection_vertices(self) -> tuple[int, ...]:
        if self.kind is ComponentKind.TRIANGLE:
            return self.members
        if self.kind is ComponentKind.PATH2:
            return tuple(x for x in self.members if x != self.middle)
        return ()


class TriComponentIndex:
    """Components of (V, P) with at most three vertices each.

    Merges relabel the smaller side directly; every component has at most
    three members so this is O(1) per accepted edge.
    """

    def __init__(self, n: int):
        self.n = n
        self.cid = list(range(n))
        self.members: list[list[int]] = [[v] for v in range(n)]
        self.kind = [ComponentKind.ISOLATED_VERTEX] * n
        self.middle: list[int] = [-1] * n

    def size(self, v: int) -> int:
        return len(self.members[self.cid[v]])

    def kind_of(self, v: int) -> ComponentKind:
        return self.kind[self.cid[v]]

    def is_connection(self, v: int) -> bool:
        c = self.cid[v]
        k = self.kind[c]
        if k is ComponentKind.TRIANGLE:
            return True
        return k is ComponentKind.PATH2 and self.middle[c] != v

    def try_add(self, u: int, v: int) -> bool:
        """Insert edge (u, v) if every component stays a short path or a triangle."""
        cu, cv = self.cid[u], self.cid[v]
        if cu == cv:
            if self.kind[cu] is ComponentKind.PATH2 and self.middle[cu] not in (u, v):
                self.kind[cu] = ComponentKind.TRIANGLE
                self.middle[cu] = -1
                return True
            return False
        su, sv = len(self.members[cu]), len(self.members[cv])
        if su + sv > 3:
            return False
        if su == 1 and sv == 1:
            self._absorb(cu, cv)
            self.kind[cu] = ComponentKind.ISOLATED_EDGE
            return True
        # one side is an isolated edge, the other an isolated vertex
        if su == 2:
            keep, gone, hinge = cu, cv, u
        else:
            keep, gone, hinge = cv, cu, v
        self._absorb(keep, gone)
        self.kind[keep] = ComponentKind.PATH2
        self.middle[keep] = hinge
        return True

    def _absorb(self, keep: int, gone: int) -> None:
        for x in self.members[gone]:
            self.cid[x] = keep
            self.members[keep].append(x)
        self.members[gone] = []
        self.kind[gone] = ComponentKind.ISOLATED_VERTEX

    def component(self, v: int) -> Component:
        c = self.cid[v]
        mid = self.middle[c]
        return Component(c, tuple(sorted(self.members[c])), self.kind[c],
                         mid if mid >= 0 else None)

    def components(self, include_isolated: bool = False) -> Iterator[Component]:
        for c in range(self.n):
            mem = self.members[c]
            if not mem:
                continue
            if len(mem) == 1 and not include_isolated:
                continue
            mid = self.middle[c]
            yield Component(c, tuple(sorted(mem)), self.kind[c], mid if mid >= 0 else None)

    def check_shapes(self, p_edges: Iterable[Edge]) -> None:
        """Raise ContractError unless every component matches its kind."""
        edge_count = [0] * self.n
        for a, b in p_edges:
            if self.cid[a] != self.cid[b]:
                raise ContractError(f"P edge ({a}, {b}) spans two components")
            edge_count[self.cid[a]] += 1
        seen = 0
        for c in range(self.n):
            mem = self.members[c]
            if not mem:
                continue
            seen += len(mem)
            shape = (len(mem), edge_count[c])
            if shape != _EXPECTED_SHAPE[self.kind[c]]:
                raise ContractError(f"component {sorted(mem)} has shape {shape} "
                                    f"but kind {self.kind[c].value}")
            if self.kind[c] is ComponentKind.PATH2 and self.middle[c] not in mem:
                raise ContractError(f"path component {sorted(mem)} lost its middle")
        if seen != self.n:
            raise ContractError("components do not partition the vertex set")


@dataclass
class AugmentSets:
    A1: dict[Edge, None] = field(default_factory=dict)
    A2: dict[Edge, None] = field(default_factory=dict)
    touched_a1: set[int] = field(default_factory=set)
    touched_a2: set[int] = field(default_factory=set)


def orient(index: TriComponentIndex, e: Edge) -> tuple[int, int] | None:
    """Roles (u, v) with |C_u| > 1; None for the impossible/degenerate cases."""
    x, y = e
    if index.cid[x] == index.cid[y]:
        return None
    sx, sy = index.size(x), index.size(y)
    if sx == 1 and sy == 1:
        return None
    if sx == 1:
        return y, x
    return x, y


class TrianglePass1:
    def __init__(self, n: int, meter: MemoryMeter | None = None):
        self.index = TriComponentIndex(n)
        self.P: dict[Edge, None] = {}
        self.meter = meter

    def offer(self, e: Edge) -> bool:
        if e in self.P:
            return False
        if self.index.try_add(e[0], e[1]):
            self.P[e] = None
            if self.meter is not None:
                self.meter.retain()
            return True
        return False


class AugmentCollector:
    """Second/third-pass edge selection against a frozen component index."""

    def __init__(self, index: TriComponentIndex, P: dict[Edge, None],
                 meter: MemoryMeter | None = None):
        self.index = index
        self.P = P
        self.sets = AugmentSets()
        self.meter = meter

    def _keep(self, target: dict[Edge, None], touched: set[int], e: Edge,
              cu: int, cv: int) -> None:
        target[e] = None
        touched.add(cu)
        touched.add(cv)
        if self.meter is not None:
            self.meter.retain()

    def offer_two_pass(self, e: Edge) -> None:
        if e in self.P:
            return
        roles = orient(self.index, e)
        if roles is None:
            return
        u, v = roles
        idx, s = self.index, self.sets
        cu, cv = idx.cid[u], idx.cid[v]
        v_isolated = len(idx.members[cv]) == 1
        u_conn = idx.is_connection(u)
        if (cu not in s.touched_a1 and cv not in s.touched_a1
                and v_isolated and u_conn):
            self._keep(s.A1, s.touched_a1, e, cu, cv)
        if cu not in s.touched_a2 and cv not in s.touched_a2 and u_conn:
            if v_isolated or idx.is_connection(v):
                self._keep(s.A2, s.touched_a2, e, cu, cv)

    def offer_a1(self, e: Edge) -> None:
        if e in self.P:
            return
        roles = orient(self.index, e)
        if roles is None:
            return
        u, v = roles
        idx, s = self.index, self.sets
        cu, cv = idx.cid[u], idx.cid[v]
        if (cu not in s.touched_a1 and cv not in s.touched_a1
                and len(idx.members[cv]) == 1 and idx.is_connection(u)):
            self._keep(s.A1, s.touched_a1, e, cu, cv)

    def offer_a2_after_a1(self, e: Edge) -> None:
        if e in self.P or e in self.sets.A1:
            return
        roles = orient(self.index, e)
        if roles is None:
            return
        u, v = roles
        idx, s = self.index, self.sets
        cu, cv = idx.cid[u], idx.cid[v]
        if (cu in s.touched_a1 or cv in s.touched_a1
                or cu in s.touched_a2 or cv in s.touched_a2):
            return
        if idx.is_connection(u) and idx.is_connection(v):
            self._keep(s.A2, s.touched_a2, e, cu, cv)


def pass1_triangles(stream: Iterable[Edge], n: int) -> tuple[set[Edge], TriComponentIndex]:
    p1 = TrianglePass1(n)
    for e in stream:
        p1.offer(e)
    return set(p1.P), p1.index


def _collector(index: TriComponentIndex, P: Iterable[Edge] | None) -> AugmentCollector:
    if P is None:
        P = [(a, b) for c in index.components() for a in c.members for b in c.members
             if a < b and _in_component_edge(index, c, a, b)]
    return AugmentCollector(index, dict.fromkeys(P))


def _in_component_edge(index: TriComponentIndex, c: Component, a: int, b: int) -> bool:
    if c.kind is ComponentKind.TRIANGLE or c.kind is ComponentKind.ISOLATED_EDGE:
        return True
    return c.middle in (a, b)


def pass2_two_pass(stream: Iterable[Edge], index: TriComponentIndex,
                   P: Iterable[Edge] | None = None) -> AugmentSets:
    col = _collector(index, P)
    for e in stream:
        col.offer_two_pass(e)
    return col.sets


def pass2_a1_only(stream: Iterable[Edge], index: TriComponentIndex,
                  P: Iterable[Edge] | None = None) -> AugmentSets:
    col = _collector(index, P)
    for e in stream:
        col.offer_a1(e)
    return col.sets


def pass3_a2_only(stream: Iterable[Edge], index: TriComponentIndex, sets: AugmentSets,
                  P: Iterable[Edge] | None = None) -> AugmentSets:
    col = _collector(index, P)
    col.sets = sets
    for e in stream:
        col.offer_a2_after_a1(e)
    return sets


def finalize_triangle_algo(n: int, P: Iterable[Edge], A1: Iterable[Edge],
                           A2: Iterable[Edge]) -> frozenset[Edge]:
    union = dict.fromkeys(P)
    union.update(dict.fromkeys(A1))
    union.update(dict.fromkeys(A2))
    return max_matching_edges(n, union)


class _TriangleAlgorithm(StreamingAlgorithm):
    def __init__(self, n: int, meter: MemoryMeter | None = None):
        super().__init__(n, meter)
        self.first = TrianglePass1(n, self.meter)
        self.collector: AugmentCollector | None = None

    def end_pass(self, index: int) -> None:
        if index == 0:
            self.collector = AugmentCollector(self.first.index, self.first.P, self.meter)

    def finish(self) -> tuple[frozenset[Edge], dict[str, Any]]:
        assert self.collector is not None
        s = self.collector.sets
        out = finalize_triangle_algo(self.n, self.first.P, s.A1, s.A2)
        return out, {
            "P": frozenset(self.first.P),
            "A1": frozenset(s.A1),
            "A2": frozenset(s.A2),
            "index": self.first.index,
            "touched_a1": frozenset(s.touched_a1),
            "touched_a2": frozenset(s.touched_a2),
        }


class TwoPassTriangles(_TriangleAlgorithm):
    name = "tri2"
    passes = 2

    def process(self, edge: Edge) -> None:
        if self.current_pass == 0:
            self.first.offer(edge)
        else:
            self.collector.offer_two_pass(edge)


class ThreePassTriangles(_TriangleAlgorithm):
    name = "tri3"
    passes = 3

    def process(self, edge: Edge) -> None:
        if self.current_pass == 0:
            self.first.offer(edge)
        elif self.current_pass == 1:
            self.collector.offer_a1(edge)
        else:
            self.collector.offer_a2_after_a1(edge)
