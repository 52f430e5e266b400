"""Exact maximum-cardinality matching (Edmonds' blossom algorithm).

Used both inside the algorithms (final matching over the retained edges,
matching of the auxiliary path graph) and as the ground-truth optimum.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from functools import lru_cache

from .graph_core import Edge, Graph

BRUTE_FORCE_EDGE_LIMIT = 24


class OracleScaleError(ValueError):
    pass


def _adjacency(n: int, edges: Iterable[Edge]) -> list[list[int]]:
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for a, b in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    return [sorted(s) for s in nbrs]


def _search(root: int, adj: list[list[int]], match: list[int]) -> int:
    """BFS for an augmenting path from the free vertex ``root``.

    Flips the path in place and returns its far endpoint, or -1 when no
    augmenting path starts at ``root``.
    """
    base: dict[int, int] = {}
    parent: dict[int, int] = {}
    even = {root}
    tree = [root]
    queue = deque([root])

    def b(x: int) -> int:
        return base.get(x, x)

    def lca(x: int, y: int) -> int:
        seen = set()
        while True:
            x = b(x)
            seen.add(x)
            if match[x] == -1:
                break
            x = parent[match[x]]
        while True:
            y = b(y)
            if y in seen:
                return y
            y = parent[match[y]]

    def mark(x: int, top: int, child: int, blossom: set[int]) -> None:
        while b(x) != top:
            blossom.add(b(x))
            blossom.add(b(match[x]))
            parent[x] = child
            child = match[x]
            x = parent[match[x]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if b(v) == b(to) or match[v] == to:
                continue
            if to == root or (match[to] != -1 and match[to] in parent):
                top = lca(v, to)
                blossom: set[int] = set()
                mark(v, top, to, blossom)
                mark(to, top, v, blossom)
                for x in tree:
                    if b(x) in blossom:
                        base[x] = top
                        if x not in even:
                            even.add(x)
                            queue.append(x)
            elif to not in parent:
                parent[to] = v
                tree.append(to)
                if match[to] == -1:
                    end = to
                    while to != -1:
                        pv = parent[to]
                        nxt = match[pv]
                        match[to] = pv
                        match[pv] = to
                        to = nxt
                    return end
                mate = match[to]
                even.add(mate)
                tree.append(mate)
                queue.append(mate)
    return -1


def matching_pairs(n: int, edges: Iterable[Edge]) -> list[int]:
    """Mate array of a maximum matching over ``edges`` (-1 = unmatched)."""
    adj = _adjacency(n, edges)
    match = [-1] * n
    for v in range(n):
        if match[v] == -1:
            for w in adj[v]:
                if match[w] == -1:
                    match[v] = w
                    match[w] = v
                    break
    for root in range(n):
        if match[root] == -1 and adj[root]:
            _search(root, adj, match)
    return match


def max_matching_edges(n: int, edges: Iterable[Edge]) -> frozenset[Edge]:
    match = matching_pairs(n, edges)
    return frozenset((v, w) for v, w in enumerate(match) if v < w)


def max_matching(graph: Graph) -> frozenset[Edge]:
    """A maximum-cardinality matching of ``graph``.

    Deterministic: vertices and adjacency lists are scanned in increasing
    index order. Parallel edges are collapsed.
    """
    return max_matching_edges(graph.n, graph.edges)


def brute_force_max_size(graph: Graph) -> int:
    """Maximum matching size by include/exclude branching on each edge.

    Memoized on (edge index, covered-vertex mask), so it stays exhaustive
    while remaining fast at the guarded scale.
    """
    edges = graph.simple_edges()
    if len(edges) > BRUTE_FORCE_EDGE_LIMIT:
        raise OracleScaleError(
            f"brute force limited to {BRUTE_FORCE_EDGE_LIMIT} edges, got {len(edges)}")
    masks = [(1 << a) | (1 << b) for a, b in edges]

    @lru_cache(maxsize=None)
    def best(i: int, covered: int) -> int:
        if i == len(masks):
            return 0
        skip = best(i + 1, covered)
        if masks[i] & covered:
            return skip
        return max(skip, 1 + best(i + 1, covered | masks[i]))

    return best(0, 0)


def has_augmenting_path(n: int, edges: Iterable[Edge], matching: Iterable[Edge]) -> bool:
    """Exhaustive alternating-path search; exponential, for small certificates only."""
    adj = _adjacency(n, edges)
    mate = [-1] * n
    for a, b in matching:
        mate[a], mate[b] = b, a

    def extend(v: int, visited: frozenset[int]) -> bool:
        # v is reached through a non-matching edge
        if mate[v] == -1:
            return True
        w = mate[v]
        if w in visited:
            return False
        seen = visited | {w}
        for x in adj[w]:
            if x not in seen and x != mate[w] and extend(x, seen | {x}):
                return True
        return False

    for s in range(n):
        if mate[s] != -1:
            continue
        for x in adj[s]:
            if x != s and extend(x, frozenset((s, x))):
                return True
    return False
