"""Graph, matching and augmenting-path primitives shared by every algorithm.

Edges are plain ``(a, b)`` tuples canonicalized so that ``a < b``; this keeps
hashing and set membership cheap on the hot streaming paths.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from typing import NamedTuple

Edge = tuple[int, int]


class MalformedInputError(ValueError):
    """Raised for edges or graphs that violate basic input rules."""


class ContractError(AssertionError):
    """Raised when an internal precondition is violated (an upstream bug)."""


def make_edge(u: int, v: int) -> Edge:
    """Return the canonical form of the undirected edge ``{u, v}``."""
    if u == v:
        raise MalformedInputError(f"self-loop at vertex {u}")
    if u < 0 or v < 0:
        raise MalformedInputError(f"negative vertex id in edge ({u}, {v})")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise MalformedInputError(f"negative vertex count {self.n}")
        for a, b in self.edges:
            if a == b:
                raise MalformedInputError(f"self-loop at vertex {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise MalformedInputError(
                    f"edge ({a}, {b}) has an endpoint outside 0..{self.n - 1}")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Graph:
        return cls(n, tuple(make_edge(u, v) for u, v in pairs))

    @property
    def m(self) -> int:
        return len(self.edges)

    def simple_edges(self) -> list[Edge]:
        """Distinct edges in first-occurrence order."""
        return list(dict.fromkeys(self.edges))


class Path4(NamedTuple):
    """A length-3 path ``u - a - b - v`` whose middle edge is a matching edge."""

    u: int
    a: int
    b: int
    v: int

    @property
    def first(self) -> Edge:
        return make_edge(self.u, self.a)

    @property
    def mid(self) -> Edge:
        return make_edge(self.a, self.b)

    @property
    def last(self) -> Edge:
        return make_edge(self.b, self.v)

    def edges(self) -> tuple[Edge, Edge, Edge]:
        return (self.first, self.mid, self.last)

    def vertices(self) -> tuple[int, int, int, int]:
        return (self.u, self.a, self.b, self.v)

    def __str__(self) -> str:
        return f"{self.u}-{self.a}-{self.b}-{self.v}"


def is_matching(edges: Iterable[Edge], n: int | None = None) -> bool:
    """True iff no vertex is covered twice.

    When ``n`` is given, endpoints are range-checked against it.
    """
    seen: set[int] = set()
    for a, b in edges:
        if n is not None and not (0 <= a < n and 0 <= b < n):
            raise MalformedInputError(
                f"edge ({a}, {b}) has an endpoint outside 0..{n - 1}")
        if a in seen or b in seen or a == b:
            return False
        seen.add(a)
        seen.add(b)
    return True


def degree_in(edges: Iterable[Edge], v: int) -> int:
    return sum(1 for a, b in edges if a == v or b == v)


def vertices_of(edges: Iterable[Edge]) -> set[int]:
    out: set[int] = set()
    for a, b in edges:
        out.add(a)
        out.add(b)
    return out


def augment(m0: Iterable[Edge], paths: Iterable[Path4]) -> frozenset[Edge]:
    """Flip every path against ``m0`` and return the enlarged matching.

    Each path must have its middle edge in ``m0``, both end edges outside it,
    and the paths must be pairwise vertex-disjoint.
    """
    base = set(m0)
    if not is_matching(base):
        raise ContractError("base edge set is not a matching")
    covered = vertices_of(base)
    used: set[int] = set()
    out = set(base)
    count = 0
    for p in paths:
        verts = p.vertices()
        if len(set(verts)) != 4:
            raise ContractError(f"path {p} repeats a vertex")
        if used.intersection(verts):
            raise ContractError(f"path {p} is not vertex-disjoint from earlier paths")
        if p.mid not in base:
            raise ContractError(f"middle edge of {p} is not in the base matching")
        if p.u in covered or p.v in covered:
            raise ContractError(f"end vertex of {p} is already matched")
        used.update(verts)
        out.discard(p.mid)
        out.add(p.first)
        out.add(p.last)
        count += 1
    result = frozenset(out)
    if len(result) != len(base) + count or not is_matching(result):
        raise ContractError("augmentation did not produce a larger matching")
    return result
