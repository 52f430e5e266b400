"""Seeded instance families for ratio sweeps and stress runs."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Any

from .graph_core import Edge, Graph
from .stream_engine import Instance

FAMILIES = ("gnp", "bipartite", "triangle_free", "adversarial_paths", "components_mix")
TRIANGLE_CERTIFY_LIMIT = 200


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def label(self) -> str:
        parts = [self.family] + [f"{k}{v}" for k, v in sorted(self.params.items())]
        return "_".join(parts) + f"_s{self.seed}"


def _int_param(params: dict[str, Any], key: str, default: int | None = None) -> int:
    if key not in params:
        if default is None:
            raise ParameterError(f"missing parameter {key!r}")
        return default
    value = params[key]
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ParameterError(f"{key} must be a non-negative integer, got {value!r}")
    return value


def _prob_param(params: dict[str, Any], key: str = "p", default: float | None = None) -> float:
    if key not in params:
        if default is None:
            raise ParameterError(f"missing parameter {key!r}")
        return default
    p = params[key]
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise ParameterError(f"{key} must be a number, got {p!r}") from None
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ParameterError(f"{key} must lie in [0, 1], got {p}")
    return p


def _sample_pairs(total: int, p: float, rng: random.Random) -> list[int]:
    """Indices in range(total) kept independently with probability p (geometric skips)."""
    if p <= 0.0 or total == 0:
        return []
    if p >= 1.0:
        return list(range(total))
    log_q = math.log1p(-p)
    out = []
    i = -1
    while True:
        skip = math.log1p(-rng.random()) / log_q
        if i + 1 + skip >= total:
            return out
        i += 1 + int(skip)
        out.append(i)


def _pair_from_index(k: int) -> Edge:
    # row-major over pairs (a, b) with a < b, enumerated by b then a
    b = int((1 + math.isqrt(1 + 8 * k)) // 2)
    while b * (b - 1) // 2 > k:
        b -= 1
    while (b + 1) * b // 2 <= k:
        b += 1
    a = k - b * (b - 1) // 2
    return (a, b)


def gnp(n: int, p: float, seed: int = 0) -> Instance:
    rng = random.Random(seed)
    edges = [_pair_from_index(k) for k in _sample_pairs(n * (n - 1) // 2, p, rng)]
    rng.shuffle(edges)
    return Instance(Graph(n, tuple(edges)), f"gnp_n{n}_s{seed}")


def bipartite(n1: int, n2: int, p: float, seed: int = 0) -> Instance:
    rng = random.Random(seed)
    edges = []
    for k in _sample_pairs(n1 * n2, p, rng):
        a, b = divmod(k, n2)
        edges.append((a, n1 + b))
    rng.shuffle(edges)
    return Instance(Graph(n1 + n2, tuple(edges)), f"bipartite_{n1}x{n2}_s{seed}")


def _sum_free_offsets(n: int, rng: random.Random) -> set[int]:
    """Random symmetric offset set D in Z_n with no x + y = z for x, y, z in D."""
    offsets: set[int] = set()
    candidates = list(range(1, n // 2 + 1))
    rng.shuffle(candidates)
    for s in candidates:
        trial = offsets | {s, (-s) % n}
        if all((x + y) % n not in trial for x in trial for y in trial):
            offsets = trial
    return offsets


def has_triangle(graph: Graph) -> bool:
    adj: list[set[int]] = [set() for _ in range(graph.n)]
    for a, b in graph.edges:
        adj[a].add(b)
        adj[b].add(a)
    return any(adj[a] & adj[b] for a, b in graph.edges)


def triangle_free(n: int, p: float, seed: int = 0, kind: str = "mixed") -> Instance:
    """Random bipartite graph or random subgraph of a triangle-free circulant."""
    rng = random.Random(seed)
    if kind == "mixed":
        kind = rng.choice(("bipartite", "circulant"))
    if kind == "bipartite":
        left = rng.randint(0, n)
        inst = bipartite(left, n - left, p, rng.getrandbits(64))
        perm = list(range(n))
        rng.shuffle(perm)
        edges = [tuple(sorted((perm[a], perm[b]))) for a, b in inst.edges]
    elif kind == "circulant":
        offsets = _sum_free_offsets(n, rng) if n >= 2 else set()
        base = sorted({tuple(sorted((i, (i + s) % n))) for i in range(n) for s in offsets})
        perm = list(range(n))
        rng.shuffle(perm)
        edges = [tuple(sorted((perm[a], perm[b]))) for a, b in base if rng.random() < p]
        rng.shuffle(edges)
    else:
        raise ParameterError(f"unknown triangle-free kind {kind!r}")
    graph = Graph(n, tuple(edges))
    if n <= TRIANGLE_CERTIFY_LIMIT and has_triangle(graph):
        raise AssertionError("triangle-free generator produced a triangle")
    return Instance(graph, f"trianglefree_{kind}_n{n}_s{seed}")


def adversarial_paths(k: int) -> Instance:
    """k disjoint 3-edge paths, all middle edges streamed before any outer edge."""
    middles = [(4 * i + 1, 4 * i + 2) for i in range(k)]
    outers = [e for i in range(k) for e in ((4 * i, 4 * i + 1), (4 * i + 2, 4 * i + 3))]
    return Instance(Graph(4 * k, tuple(middles + outers)), f"adversarial_paths_k{k}")


def _piece(rng: random.Random, size: int) -> list[Edge]:
    shape = rng.choice(("triangle_pendant", "path", "star", "clique", "cycle"))
    if size < 2:
        return []
    if shape == "path":
        return [(i, i + 1) for i in range(size - 1)]
    if shape == "star":
        return [(0, i) for i in range(1, size)]
    if shape == "clique":
        return [(a, b) for a in range(size) for b in range(a + 1, size)]
    if shape == "cycle" and size >= 3:
        return [(i, (i + 1) % size) for i in range(size)]
    if size >= 3:
        tri = [(0, 1), (1, 2), (0, 2)]
        return tri + [(rng.randrange(3), i) for i in range(3, size)]
    return [(0, 1)]


def components_mix(n: int, seed: int = 0, max_piece: int = 6) -> Instance:
    """Disjoint small pieces (triangles with pendants, paths, stars, cliques, cycles)."""
    if max_piece < 1:
        raise ParameterError("max_piece must be positive")
    rng = random.Random(seed)
    edges: list[Edge] = []
    base = 0
    while base < n:
        size = min(rng.randint(1, max_piece), n - base)
        for a, b in _piece(rng, size):
            x, y = base + a, base + b
            edges.append((x, y) if x < y else (y, x))
        base += size
    perm = list(range(n))
    rng.shuffle(perm)
    edges = [tuple(sorted((perm[a], perm[b]))) for a, b in edges]
    rng.shuffle(edges)
    return Instance(Graph(n, tuple(edges)), f"components_mix_n{n}_s{seed}")


def generate(spec: FamilySpec) -> Instance:
    prm, seed = spec.params, spec.seed
    fam = spec.family
    if fam == "gnp":
        inst = gnp(_int_param(prm, "n"), _prob_param(prm), seed)
    elif fam == "bipartite":
        inst = bipartite(_int_param(prm, "n1"), _int_param(prm, "n2"), _prob_param(prm), seed)
    elif fam == "triangle_free":
        inst = triangle_free(_int_param(prm, "n"), _prob_param(prm), seed,
                             str(prm.get("kind", "mixed")))
    elif fam == "adversarial_paths":
        inst = adversarial_paths(_int_param(prm, "k"))
    elif fam == "components_mix":
        inst = components_mix(_int_param(prm, "n"), seed, _int_param(prm, "max_piece", 6))
    else:
        raise ParameterError(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
    return Instance(inst.graph, spec.label())
