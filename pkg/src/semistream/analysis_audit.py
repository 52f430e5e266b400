"""Recompute the approximation analysis of each algorithm from its artifacts.

Every charging quantity is an exact integer and every inequality is checked
with fractions cleared, so a verdict never depends on floating point. The
reference optimum ``M*`` can be any maximum matching of the instance.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

from .graph_core import ContractError, Edge, Path4, is_matching, vertices_of
from .stream_engine import RunResult
from .triangle_greedy import ComponentKind, TriComponentIndex


class AnalysisContractError(RuntimeError):
    """An optimum edge falls in a class the first-pass analysis rules out."""


class AuditScopeError(ValueError):
    """The run lacks an artifact the auditor needs for its algorithm family."""


@dataclass(frozen=True)
class InequalityRecord:
    id: str
    name: str
    lhs: int
    relation: str
    rhs: int

    @property
    def holds(self) -> bool:
        if self.relation == "<=":
            return self.lhs <= self.rhs
        if self.relation == ">=":
            return self.lhs >= self.rhs
        return self.lhs == self.rhs

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "name": self.name, "lhs": self.lhs,
                "relation": self.relation, "rhs": self.rhs, "holds": self.holds}

    def __str__(self) -> str:
        mark = "ok  " if self.holds else "FAIL"
        return f"{mark} {self.id:5s} {self.name}: {self.lhs} {self.relation} {self.rhs}"


@dataclass
class AuditReport:
    algo: str
    records: list[InequalityRecord] = field(default_factory=list)
    quantities: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.holds for r in self.records)

    def failures(self) -> list[InequalityRecord]:
        return [r for r in self.records if not r.holds]

    def by_id(self, rid: str) -> InequalityRecord:
        for r in self.records:
            if r.id == rid:
                return r
        raise KeyError(rid)

    def add(self, rid: str, name: str, lhs: int, relation: str, rhs: int) -> None:
        self.records.append(InequalityRecord(rid, name, lhs, relation, rhs))

    def to_list(self) -> list[dict[str, Any]]:
        return [r.to_dict() for r in self.records]


# --- triangle-component quantities -------------------------------------------

@dataclass(frozen=True)
class ChargingStats:
    s: int
    d: int
    t: int
    dn: int
    dd: int
    ss: int
    ds: int
    dm: int
    ftri: int
    classes: Mapping[Edge, str] = field(default_factory=dict, compare=False, repr=False)


def component_census(index: TriComponentIndex) -> tuple[int, int, int]:
    counts = Counter(c.kind for c in index.components())
    return (counts[ComponentKind.ISOLATED_EDGE], counts[ComponentKind.PATH2],
            counts[ComponentKind.TRIANGLE])


def _role(index: TriComponentIndex, v: int) -> str:
    c = index.cid[v]
    k = index.kind[c]
    if k is ComponentKind.ISOLATED_VERTEX:
        return "iso"
    if k is ComponentKind.ISOLATED_EDGE:
        return "edge"
    if k is ComponentKind.PATH2 and index.middle[c] == v:
        return "mid"
    return "conn"


def classify_edge(index: TriComponentIndex, e: Edge) -> str:
    x, y = e
    rx, ry = _role(index, x), _role(index, y)
    same = index.cid[x] == index.cid[y]
    if rx == "mid" or ry == "mid":
        return "dm"
    if same and index.kind[index.cid[x]] is ComponentKind.TRIANGLE:
        return "dm"
    pair = {rx, ry}
    if pair == {"conn"}:
        if same:
            raise AnalysisContractError(f"optimum edge {e} joins the two ends of one path")
        return "dd"
    if pair == {"conn", "iso"}:
        return "dn"
    if pair == {"edge"}:
        return "ss"
    if pair == {"edge", "conn"}:
        return "ds"
    raise AnalysisContractError(
        f"optimum edge {e} joins roles {rx}/{ry}; the first pass should have kept it")


def _triangle_members(index: TriComponentIndex) -> dict[int, tuple[int, ...]]:
    return {c.cid: c.members for c in index.components() if c.kind is ComponentKind.TRIANGLE}


def _mstar_free_triangles(index: TriComponentIndex, mstar: Iterable[Edge]) -> set[int]:
    tris = set(_triangle_members(index))
    for x, y in mstar:
        c = index.cid[x]
        if c == index.cid[y]:
            tris.discard(c)
    return tris


def potentials(index: TriComponentIndex, mstar: Iterable[Edge]) -> ChargingStats:
    mstar = list(mstar)
    s, d, t = component_census(index)
    classes = {e: classify_edge(index, e) for e in mstar}
    cnt = Counter(classes.values())
    ftri = len(_mstar_free_triangles(index, mstar))
    return ChargingStats(s, d, t, cnt["dn"], cnt["dd"], cnt["ss"], cnt["ds"], cnt["dm"],
                         ftri, classes)


def _touched_components(index: TriComponentIndex, edges: Iterable[Edge]) -> set[int]:
    out: set[int] = set()
    for x, y in edges:
        out.add(index.cid[x])
        out.add(index.cid[y])
    return out


def ftri_split(index: TriComponentIndex, mstar: Iterable[Edge], A1: Iterable[Edge],
               A2: Iterable[Edge]) -> tuple[int, int]:
    free = _mstar_free_triangles(index, mstar)
    t1 = _touched_components(index, A1)
    t2 = _touched_components(index, A2)
    return len(free & t1), len(free & t2)


def missed_dd(index: TriComponentIndex, mstar: Iterable[Edge], A1: Iterable[Edge]) -> int:
    touched = _touched_components(index, A1)
    missed = 0
    for e in mstar:
        if classify_edge(index, e) == "dd":
            if index.cid[e[0]] in touched or index.cid[e[1]] in touched:
                missed += 1
    return missed


# --- wing quantities ---------------------------------------------------------

def wing_mstar(m0: Iterable[Edge], mstar: Iterable[Edge]) -> set[Edge]:
    covered = vertices_of(m0)
    return {e for e in mstar if (e[0] in covered) != (e[1] in covered)}


def _wing_roles(covered: set[int] | Mapping[int, int], e: Edge) -> tuple[int, int]:
    a, b = e
    if (a in covered) == (b in covered):
        raise ContractError(f"{e} is not a wing")
    return (a, b) if a in covered else (b, a)


def build_W2prime(W1: Iterable[Edge], W2: Iterable[Edge], W_M: Iterable[Edge],
                  arrival: Mapping[Edge, int], m0: Iterable[Edge]) -> set[Edge]:
    """Extend W2 with the optimum wings of W1, scanned in stream arrival order."""
    covered = vertices_of(m0)
    w2p = set(W2)
    matched_deg: Counter[int] = Counter()
    free_deg: Counter[int] = Counter()
    for e in w2p:
        u, v = _wing_roles(covered, e)
        matched_deg[u] += 1
        free_deg[v] += 1
    wm = set(W_M)
    for e in sorted((e for e in W1 if e in wm), key=lambda e: (arrival.get(e, -1), e)):
        u, v = _wing_roles(covered, e)
        if matched_deg[u] < 1 and free_deg[v] < 2:
            w2p.add(e)
            matched_deg[u] += 1
            free_deg[v] += 1
    return w2p


Walk = tuple[int, int, int, int]


def build_Pprime(m0: Iterable[Edge], W_M: Iterable[Edge], wings_a: Iterable[Edge],
                 wings_b: Iterable[Edge] | None = None) -> list[Walk]:
    """Directed optimum-wing / M0 edge / kept-wing walks, with multiplicity."""
    mate: dict[int, int] = {}
    for a, b in m0:
        mate[a], mate[b] = b, a
    families = [wings_a] if wings_b is None else [wings_a, wings_b]
    walks: list[Walk] = []
    for fam in families:
        at: dict[int, list[int]] = {}
        for e in fam:
            u, v = _wing_roles(mate, e)
            at.setdefault(u, []).append(v)
        for e in sorted(W_M):
            a, u = _wing_roles(mate, e)
            b = mate[a]
            for v in sorted(at.get(b, ())):
                walks.append((u, a, b, v))
    return walks


def filter_Pdoubleprime(pprime: Iterable[Walk], P1: Iterable[Path4],
                        mode: str = "triangle_free") -> list[Walk]:
    if mode not in ("triangle_free", "general"):
        raise ValueError(f"unknown mode {mode!r}")
    occ: set[int] = set()
    for p in P1:
        occ.update(p.vertices())
    out = []
    for w in pprime:
        if mode == "general" and w[0] == w[3]:
            continue
        if occ.isdisjoint(w):
            out.append(w)
    return out


def is_triangle_free(n: int, edges: Iterable[Edge]) -> bool:
    adj: list[set[int]] = [set() for _ in range(n)]
    simple = set(edges)
    for a, b in simple:
        adj[a].add(b)
        adj[b].add(a)
    for a, b in simple:
        small, big = (adj[a], adj[b]) if len(adj[a]) < len(adj[b]) else (adj[b], adj[a])
        if any(x in big for x in small):
            return False
    return True


# --- run-level audit ---------------------------------------------------------

def _need(run: RunResult, *keys: str) -> list[Any]:
    missing = [k for k in keys if k not in run.artifacts]
    if missing:
        raise AuditScopeError(f"{run.algo} run lacks artifacts {missing}")
    return [run.artifacts[k] for k in keys]


def _structural_triangle(rep: AuditReport, run: RunResult, index: TriComponentIndex,
                         P: frozenset[Edge], A1: frozenset[Edge], A2: frozenset[Edge]) -> None:
    try:
        index.check_shapes(P)
        bad = 0
    except ContractError:
        bad = 1
    rep.add("S1", "first-pass components are short paths or triangles (violations)", bad, "==", 0)
    for label, A in (("A1", A1), ("A2", A2)):
        per = Counter()
        for x, y in A:
            per[index.cid[x]] += 1
            per[index.cid[y]] += 1
        rep.add(f"S2.{label}", f"edges of {label} touching one component (max)",
                max(per.values(), default=0), "<=", 1)


def _audit_triangles(rep: AuditReport, run: RunResult, mstar: frozenset[Edge]) -> None:
    index, P, A1, A2 = _need(run, "index", "P", "A1", "A2")
    n = run.instance.n
    opt = len(mstar)
    out = run.output_size
    _structural_triangle(rep, run, index, P, A1, A2)
    cs = potentials(index, mstar)
    s, d, t = cs.s, cs.d, cs.t
    dn, dd, ss, ds, dm, ftri = cs.dn, cs.dd, cs.ss, cs.ds, cs.dm, cs.ftri
    a1, a2 = len(A1), len(A2)
    rep.quantities.update(s=s, d=d, t=t, dn=dn, dd=dd, ss=ss, ds=ds, dm=dm, ftri=ftri,
                          A1=a1, A2=a2, P=len(P), opt=opt, output=out)

    rep.add("I1", "retained edges |P|, 2|A1|, 2|A2| (max) at most n",
            max(len(P), 2 * a1, 2 * a2), "<=", n)
    rep.add("I2", "charge bound 2dn+4dd+2ss+3ds+2dm <= 2s+6d+6t",
            2 * dn + 4 * dd + 2 * ss + 3 * ds + 2 * dm, "<=", 2 * s + 6 * d + 6 * t)
    rep.add("I3", "optimum edges partition dn+dd+ss+ds+dm = |M*|",
            dn + dd + ss + ds + dm, "==", opt)
    rep.add("I4", "dm <= d + t - ftri", dm, "<=", d + t - ftri)
    rep.add("I5", "2ss + ds <= 2s", 2 * ss + ds, "<=", 2 * s)
    rep.add("I6", "dn + dd + 2s + d + t - ftri >= |M*|", dn + dd + 2 * s + d + t - ftri, ">=", opt)
    rep.add("I7", "dn - ftri + 2s + 4d + 4t >= 2|M*|",
            dn - ftri + 2 * s + 4 * d + 4 * t, ">=", 2 * opt)
    rep.add("I8", "3|A1| >= dn - ftri", 3 * a1, ">=", dn - ftri)

    if run.algo == "tri2":
        L = s + d + t + max(a1, a2)
        rep.quantities["L"] = L
        rep.add("I9", "4|A2| >= dd + dn - ftri", 4 * a2, ">=", dd + dn - ftri)
        rep.add("I10a", "3|A1| + 2s + 4d + 4t >= 2|M*|", 3 * a1 + 2 * s + 4 * d + 4 * t, ">=", 2 * opt)
        rep.add("I10b", "4|A2| + 2s + d + t >= |M*|", 4 * a2 + 2 * s + d + t, ">=", opt)
        rep.add("I11a", "13 L >= 7 |M*|", 13 * L, ">=", 7 * opt)
        rep.add("I11b", "output >= L", out, ">=", L)
        rep.add("I11c", "13 output >= 7 |M*|", 13 * out, ">=", 7 * opt)
        return

    f1, f2 = ftri_split(index, mstar, A1, A2)
    missed = missed_dd(index, mstar, A1)
    L2 = s + d + t + a1 + a2
    rep.quantities.update(ftri_dn=f1, ftri_dd=f2, missed_dd=missed, L2=L2)
    t1 = _touched_components(index, A1)
    t2 = _touched_components(index, A2)
    rep.add("S3", "components touched by both A1 and A2", len(t1 & t2), "==", 0)
    rep.add("I12", "3|A1| >= dn - ftri_dn", 3 * a1, ">=", dn - f1)
    rep.add("I13", "ftri_dn + ftri_dd <= ftri", f1 + f2, "<=", ftri)
    rep.add("I14", "missed_dd <= 3|A1| - dn + ftri_dn", missed, "<=", 3 * a1 - dn + f1)
    rep.add("I15", "4|A2| >= dd - missed_dd - ftri_dd", 4 * a2, ">=", dd - missed - f2)
    rep.add("I16", "12|A1| + 12|A2| >= 4dn + 3dd - 4ftri_dn - 3ftri_dd",
            12 * a1 + 12 * a2, ">=", 4 * dn + 3 * dd - 4 * f1 - 3 * f2)
    rep.add("I17a", "9 L2 >= 5 |M*|", 9 * L2, ">=", 5 * opt)
    rep.add("I17b", "output >= L2", out, ">=", L2)
    rep.add("I17c", "9 output >= 5 |M*|", 9 * out, ">=", 5 * opt)


def _structural_wings(rep: AuditReport, run: RunResult, m0: frozenset[Edge],
                      wing_sets: dict[str, frozenset[Edge]], P1, P2) -> None:
    covered = vertices_of(m0)
    n = run.instance.n
    for label, W in wing_sets.items():
        mdeg: Counter[int] = Counter()
        fdeg: Counter[int] = Counter()
        bad = 0
        for e in W:
            if (e[0] in covered) == (e[1] in covered):
                bad += 1
                continue
            u, v = _wing_roles(covered, e)
            mdeg[u] += 1
            fdeg[v] += 1
        rep.add(f"S4.{label}.wing", f"non-wing edges in {label}", bad, "==", 0)
        rep.add(f"S4.{label}.matched", f"{label} degree at matched vertices (max)",
                max(mdeg.values(), default=0), "<=", 1)
        rep.add(f"S4.{label}.free", f"{label} degree at unmatched vertices (max)",
                max(fdeg.values(), default=0), "<=", 2)
        rep.add(f"I18c.{label}", f"|{label}| <= 2|M0|", len(W), "<=", 2 * len(m0))
    paths = [*P1, *P2]
    seen: Counter[int] = Counter()
    bad_paths = 0
    for p in paths:
        seen.update(p.vertices())
        if p.mid not in m0 or p.first in m0 or p.last in m0 or len(set(p.vertices())) != 4:
            bad_paths += 1
    rep.add("S5a", "malformed augmenting paths", bad_paths, "==", 0)
    rep.add("S5b", "vertices shared by two augmenting paths",
            sum(1 for c in seen.values() if c > 1), "==", 0)
    rep.add("S6", "output = |M0| + |P1| + |P2|", run.output_size, "==",
            len(m0) + len(P1) + len(P2))
    rep.add("I18d", "2|M0| <= n", 2 * len(m0), "<=", n)
    rep.add("I18e", "4(|P1| + |P2|) <= n", 4 * (len(P1) + len(P2)), "<=", n)


def _maximality(run: RunResult, m0: frozenset[Edge]) -> int:
    covered = vertices_of(m0)
    return sum(1 for a, b in run.instance.edges if a not in covered and b not in covered)


def _audit_wings(rep: AuditReport, run: RunResult, mstar: frozenset[Edge],
                 triangle_free: bool | None) -> None:
    general = run.algo == "wing-gen"
    if general:
        m0, W1, W2, P1, P2 = _need(run, "M0", "W1", "W2", "P1", "P2")
        wing_sets = {"W1": W1, "W2": W2}
    else:
        m0, W, P1, P2 = _need(run, "M0", "W", "P1", "P2")
        wing_sets = {"W": W}
        W1 = W
    opt, out = len(mstar), run.output_size
    M0, p1, p2 = len(m0), len(P1), len(P2)
    _structural_wings(rep, run, m0, wing_sets, P1, P2)
    rep.add("S7", "stream edges with both ends unmatched by M0", _maximality(run, m0), "==", 0)
    WM = wing_mstar(m0, mstar)
    rep.quantities.update(M0=M0, P1=p1, P2=p2, W_M=len(WM), opt=opt, output=out,
                          **{k: len(v) for k, v in wing_sets.items()})
    rep.add("I18a", "2|M0| >= |M*|", 2 * M0, ">=", opt)
    rep.add("I18b", "|W_M| >= 2(|M*| - |M0|)", len(WM), ">=", 2 * (opt - M0))
    label = "W1" if general else "W"
    rep.add("I19a", f"3|{label}| >= 2|W_M|", 3 * len(W1), ">=", 2 * len(WM))
    rep.add("I19b", f"3|{label}| >= 4(|M*| - |M0|)", 3 * len(W1), ">=", 4 * (opt - M0))

    if not general:
        if triangle_free is None:
            triangle_free = is_triangle_free(run.instance.n, run.instance.edges)
        rep.quantities["triangle_free"] = int(triangle_free)
        if not triangle_free:
            return
        pp = build_Pprime(m0, WM, W1)
        pdp = filter_Pdoubleprime(pp, P1, "triangle_free")
        rep.quantities.update(Pprime=len(pp), Pdoubleprime=len(pdp))
        rep.add("I20", "3|P'| >= 10|M*| - 16|M0|", 3 * len(pp), ">=", 10 * opt - 16 * M0)
        rep.add("I21a", "|P''| >= |P'| - 6|P1|", len(pdp), ">=", len(pp) - 6 * p1)
        rep.add("I21b", "3|P''| >= 10|M*| - 16|M0| - 18|P1|", 3 * len(pdp), ">=",
                10 * opt - 16 * M0 - 18 * p1)
        rep.add("I22a", "6|P2| >= |P''|", 6 * p2, ">=", len(pdp))
        rep.add("I22b", "9|P2| >= 5|M*| - 8|M0| - 9|P1|", 9 * p2, ">=", 5 * opt - 8 * M0 - 9 * p1)
        rep.add("I23", "18 output >= 11 |M*|", 18 * out, ">=", 11 * opt)
        return

    rep.add("S8a", "|W1 & W2|", len(W1 & W2), "==", 0)
    w2p = build_W2prime(W1, W2, WM, run.arrival_index(), m0)
    rep.add("S8b", "|W2' - (W1 | W2)|", len(w2p - (W1 | W2)), "==", 0)
    pp = build_Pprime(m0, WM, W1, w2p)
    pdp = filter_Pdoubleprime(pp, P1, "general")
    rep.quantities.update(W2prime=len(w2p), Pprime=len(pp), Pdoubleprime=len(pdp))
    rep.add("I24", "3(|W1| + |W2'|) >= 4|W_M|", 3 * (len(W1) + len(w2p)), ">=", 4 * len(WM))
    rep.add("I25", "3|P'| >= 20|M*| - 32|M0|", 3 * len(pp), ">=", 20 * opt - 32 * M0)
    rep.add("I26a", "|P''| >= |P'| - 12|P1| - |M0|", len(pdp), ">=", len(pp) - 12 * p1 - M0)
    rep.add("I26b", "3|P''| >= 20|M*| - 35|M0| - 36|P1|", 3 * len(pdp), ">=",
            20 * opt - 35 * M0 - 36 * p1)
    rep.add("I27a", "12|P2| >= |P''|", 12 * p2, ">=", len(pdp))
    rep.add("I27b", "36|P2| >= 20|M*| - 35|M0| - 36|P1|", 36 * p2, ">=",
            20 * opt - 35 * M0 - 36 * p1)
    rep.add("I28", "72 output >= 41 |M*|", 72 * out, ">=", 41 * opt)


def _audit_greedy(rep: AuditReport, run: RunResult, mstar: frozenset[Edge]) -> None:
    (m0,) = _need(run, "M0")
    rep.quantities.update(M0=len(m0), opt=len(mstar), output=run.output_size)
    rep.add("S7", "stream edges with both ends unmatched by M0", _maximality(run, m0), "==", 0)
    rep.add("I0", "2 output >= |M*|", 2 * run.output_size, ">=", len(mstar))


def audit_run(run: RunResult, mstar: Iterable[Edge],
              triangle_free: bool | None = None) -> AuditReport:
    """Check every inequality that applies to ``run``'s algorithm family.

    For ``wing-tf`` the triangle-free chain is only evaluated when the
    instance is triangle-free (detected unless ``triangle_free`` is given).
    """
    mstar = frozenset(mstar)
    if not is_matching(mstar, run.instance.n):
        raise ValueError("reference optimum is not a matching")
    rep = AuditReport(run.algo)
    rep.add("S0", "|output| <= |M*|", run.output_size, "<=", len(mstar))
    if run.algo in ("tri2", "tri3"):
        _audit_triangles(rep, run, mstar)
    elif run.algo in ("wing-tf", "wing-gen"):
        _audit_wings(rep, run, mstar, triangle_free)
    elif run.algo == "greedy":
        _audit_greedy(rep, run, mstar)
    else:
        raise AuditScopeError(f"no audit defined for algorithm {run.algo!r}")
    return rep
