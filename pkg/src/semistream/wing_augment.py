"""Three-pass augmenting-path algorithms built on a greedy maximal matching.

Pass 1 builds a maximal matching ``M0``. Pass 2 collects *wings* (edges with
exactly one endpoint covered by ``M0``) under degree caps: one wing per
matched vertex and two per unmatched vertex. Post-processing pairs wings
across ``M0`` edges into length-3 augmenting paths through an auxiliary
graph on the unmatched vertices and keeps a maximum matching of it. Pass 3
greedily completes further vertex-disjoint augmenting paths.

``WingTriangleFree`` uses one wing set; ``WingGeneral`` uses two disjoint
wing sets so that a wing closing a triangle never blocks every alternative.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from .exact_matching import max_matching_edges
from .graph_core import ContractError, Edge, Path4, augment
from .greedy_baseline import GreedyMatcher
from .stream_engine import MemoryMeter, StreamingAlgorithm


def partner_map(m0: Iterable[Edge]) -> dict[int, int]:
    mate: dict[int, int] = {}
    for a, b in m0:
        if a in mate or b in mate:
            raise ContractError("M0 is not a matching")
        mate[a] = b
        mate[b] = a
    return mate


class WingSet:
    """Wings kept under the caps deg(matched end) <= 1, deg(free end) <= 2."""

    MATCHED_CAP = 1
    FREE_CAP = 2

    def __init__(self, covered: dict[int, int] | set[int], meter: MemoryMeter | None = None):
        self.covered = covered
        self.edges: dict[Edge, None] = {}
        self.at_matched: dict[int, int] = {}
        self.free_degree: dict[int, int] = {}
        self.meter = meter

    def orient(self, e: Edge) -> tuple[int, int] | None:
        """(matched end, free end) if ``e`` is a wing, else None."""
        a, b = e
        ca, cb = a in self.covered, b in self.covered
        if ca == cb:
            return None
        return (a, b) if ca else (b, a)

    def accepts(self, u: int, v: int) -> bool:
        return u not in self.at_matched and self.free_degree.get(v, 0) < self.FREE_CAP

    def try_add(self, e: Edge) -> bool:
        roles = self.orient(e)
        if roles is None:
            return False
        u, v = roles
        if not self.accepts(u, v):
            return False
        self._add(e, u, v)
        return True

    def _add(self, e: Edge, u: int, v: int) -> None:
        self.edges[e] = None
        self.at_matched[u] = v
        self.free_degree[v] = self.free_degree.get(v, 0) + 1
        if self.meter is not None:
            self.meter.retain()

    def free_end_at(self, a: int) -> int | None:
        return self.at_matched.get(a)

    def degree(self, x: int) -> int:
        if x in self.at_matched:
            return 1
        return self.free_degree.get(x, 0)

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e: object) -> bool:
        return e in self.edges

    def __iter__(self):
        return iter(self.edges)


def pass2_wings(stream: Iterable[Edge], m0: Iterable[Edge]) -> WingSet:
    w = WingSet(partner_map(m0))
    for e in stream:
        w.try_add(e)
    return w


class TwoWingCollector:
    def __init__(self, covered: dict[int, int], meter: MemoryMeter | None = None):
        self.w1 = WingSet(covered, meter)
        self.w2 = WingSet(covered, meter)

    def offer(self, e: Edge) -> None:
        roles = self.w1.orient(e)
        if roles is None or e in self.w1.edges or e in self.w2.edges:
            return
        u, v = roles
        if self.w1.accepts(u, v):
            self.w1._add(e, u, v)
        elif self.w2.accepts(u, v):
            self.w2._add(e, u, v)


def pass2_wings_two_sets(stream: Iterable[Edge], m0: Iterable[Edge]) -> tuple[WingSet, WingSet]:
    col = TwoWingCollector(partner_map(m0))
    for e in stream:
        col.offer(e)
    return col.w1, col.w2


@dataclass
class AuxGraph:
    """Simple projection of the auxiliary multigraph on unmatched vertices.

    ``payload`` keeps the first-enumerated augmenting path per vertex pair;
    ``paths`` keeps every underlying path (the multigraph edges).
    """

    payload: dict[Edge, Path4] = field(default_factory=dict)
    paths: list[Path4] = field(default_factory=list)

    @property
    def edges(self) -> list[Edge]:
        return list(self.payload)


def _wing_ends(m0: Iterable[Edge], wings: Iterable[Edge]) -> tuple[dict[int, int], dict[int, list[int]]]:
    mate = partner_map(m0)
    ends: dict[int, list[int]] = {}
    for a, b in wings:
        am, bm = a in mate, b in mate
        if am == bm:
            raise ContractError(f"({a}, {b}) is not a wing")
        matched, free = (a, b) if am else (b, a)
        ends.setdefault(matched, []).append(free)
    for lst in ends.values():
        lst.sort()
    return mate, ends


def build_aux_graph(m0: Iterable[Edge], wings: Iterable[Edge]) -> AuxGraph:
    """Enumerate wing / M0-edge / wing paths with distinct free endpoints.

    Order: M0 edges in canonical sorted order, wings at each side by free
    endpoint; both directions of an M0 edge yield the same simple pair so
    only the ``a < b`` orientation is enumerated.
    """
    m0 = sorted(m0)
    mate, ends = _wing_ends(m0, wings)
    aux = AuxGraph()
    for a, b in m0:
        for u in ends.get(a, ()):
            for v in ends.get(b, ()):
                if u == v:
                    continue
                path = Path4(u, a, b, v)
                aux.paths.append(path)
                key = (u, v) if u < v else (v, u)
                if key not in aux.payload:
                    aux.payload[key] = path
    return aux


class AugPathSet:
    def __init__(self, meter: MemoryMeter | None = None, occupied: Iterable[int] = ()):
        self.paths: list[Path4] = []
        self.occupied: set[int] = set(occupied)
        self.meter = meter

    def fits(self, p: Path4) -> bool:
        occ = self.occupied
        return p.u not in occ and p.a not in occ and p.b not in occ and p.v not in occ

    def add(self, p: Path4) -> None:
        if not self.fits(p) or len(set(p.vertices())) != 4:
            raise ContractError(f"path {p} overlaps an existing path")
        self.paths.append(p)
        self.occupied.update(p.vertices())
        if self.meter is not None:
            self.meter.retain(3)

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)


def select_P1(aux: AuxGraph, n: int | None = None,
              meter: MemoryMeter | None = None) -> tuple[AugPathSet, dict[str, int]]:
    """Paths of a maximum matching in the auxiliary graph.

    With two wing sets two matched auxiliary edges may route through the same
    M0 edge; such conflicts are resolved in sorted order, and a greedy sweep
    over every enumerated path then restores maximality (no augmenting path
    vertex-disjoint from the selection survives). With a single wing set both
    steps are no-ops.
    """
    if n is None:
        n = 1 + max((max(p.vertices()) for p in aux.paths), default=-1)
    ma = max_matching_edges(n, aux.payload)
    chosen = AugPathSet(meter)
    dropped = 0
    for key in sorted(ma):
        p = aux.payload[key]
        if chosen.fits(p):
            chosen.add(p)
        else:
            dropped += 1
    completed = 0
    for p in aux.paths:
        if chosen.fits(p):
            chosen.add(p)
            completed += 1
    return chosen, {"aux_edges": len(aux.payload), "aux_paths": len(aux.paths),
                    "matching_size": len(ma), "conflicts_dropped": dropped,
                    "completed": completed}


class PathCompleter:
    """Third pass: finish wing / M0 edge / stored wing paths greedily."""

    def __init__(self, mate: dict[int, int], wing_sets: Sequence[WingSet], paths: AugPathSet):
        self.mate = mate
        self.wing_sets = wing_sets
        self.paths = paths
        self.found: list[Path4] = []

    def offer(self, e: Edge) -> None:
        x, y = e
        mate = self.mate
        xm, ym = x in mate, y in mate
        if xm == ym:
            return
        u, a = (y, x) if xm else (x, y)
        occ = self.paths.occupied
        if u in occ or a in occ:
            return
        b = mate[a]
        if b in occ:
            return
        for ws in self.wing_sets:
            v = ws.at_matched.get(b)
            if v is not None and v != u and v not in occ:
                p = Path4(u, a, b, v)
                self.paths.add(p)
                self.found.append(p)
                return


def pass3_greedy_paths(stream: Iterable[Edge], m0: Iterable[Edge],
                       wings: WingSet | Sequence[WingSet] | Iterable[Edge],
                       P1: Iterable[Path4] = ()) -> list[Path4]:
    """Greedy third pass; ``wings`` may be one wing set or several in preference order."""
    mate = partner_map(m0)
    if isinstance(wings, WingSet):
        wing_sets: list[WingSet] = [wings]
    elif isinstance(wings, (list, tuple)) and wings and all(isinstance(w, WingSet) for w in wings):
        wing_sets = list(wings)
    else:
        ws = WingSet(mate)
        for e in wings:
            roles = ws.orient(e)
            if roles is None:
                raise ContractError(f"{e} is not a wing")
            ws._add(e, *roles)
        wing_sets = [ws]
    occupied: set[int] = set()
    for p in P1:
        occupied.update(p.vertices())
    paths = AugPathSet(occupied=occupied)
    completer = PathCompleter(mate, wing_sets, paths)
    for e in stream:
        completer.offer(e)
    return completer.found


def finalize_wing_algo(m0: Iterable[Edge], P1: Iterable[Path4],
                       P2: Iterable[Path4]) -> frozenset[Edge]:
    return augment(m0, [*P1, *P2])


class _WingAlgorithm(StreamingAlgorithm):
    passes = 3

    def __init__(self, n: int, meter: MemoryMeter | None = None):
        super().__init__(n, meter)
        self.greedy = GreedyMatcher(self.meter)
        self.mate: dict[int, int] = {}
        self.P1: AugPathSet | None = None
        self.completer: PathCompleter | None = None
        self.stats: dict[str, Any] = {}

    def _wing_sets(self) -> list[WingSet]:
        raise NotImplementedError

    def end_pass(self, index: int) -> None:
        if index == 0:
            self.mate = dict(self.greedy.mate)
            self._start_wings()
        elif index == 1:
            wings = [e for ws in self._wing_sets() for e in ws]
            aux = build_aux_graph(self.greedy.edges, wings)
            self.meter.retain(len(aux.paths))
            self.P1, self.stats = select_P1(aux, self.n, self.meter)
            self.meter.discard(len(aux.paths))
            self.completer = PathCompleter(self.mate, self._wing_sets(), self.P1)

    def process(self, edge: Edge) -> None:
        if self.current_pass == 0:
            self.greedy.offer(edge)
        elif self.current_pass == 1:
            self._offer_wing(edge)
        else:
            self.completer.offer(edge)

    def finish(self) -> tuple[frozenset[Edge], dict[str, Any]]:
        assert self.P1 is not None and self.completer is not None
        p1 = list(self.P1.paths[: len(self.P1.paths) - len(self.completer.found)])
        p2 = list(self.completer.found)
        m0 = self.greedy.matching()
        out = finalize_wing_algo(m0, p1, p2)
        arts = {"M0": m0, "P1": tuple(p1), "P2": tuple(p2)}
        arts.update(self._wing_artifacts())
        return out, arts


class WingTriangleFree(_WingAlgorithm):
    name = "wing-tf"

    def _start_wings(self) -> None:
        self.W = WingSet(self.mate, self.meter)

    def _offer_wing(self, edge: Edge) -> None:
        self.W.try_add(edge)

    def _wing_sets(self) -> list[WingSet]:
        return [self.W]

    def _wing_artifacts(self) -> dict[str, Any]:
        return {"W": frozenset(self.W.edges)}


class WingGeneral(_WingAlgorithm):
    name = "wing-gen"

    def _start_wings(self) -> None:
        self.wings = TwoWingCollector(self.mate, self.meter)

    def _offer_wing(self, edge: Edge) -> None:
        self.wings.offer(edge)

    def _wing_sets(self) -> list[WingSet]:
        return [self.wings.w1, self.wings.w2]

    def _wing_artifacts(self) -> dict[str, Any]:
        return {"W1": frozenset(self.wings.w1.edges), "W2": frozenset(self.wings.w2.edges)}
