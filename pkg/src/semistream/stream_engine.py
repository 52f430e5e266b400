"""Instance I/O, stream ordering and the multi-pass replay harness.

Memory is accounted in retained edges: every algorithm reports each edge it
stores (and releases) through a :class:`MemoryMeter`, and the harness
enforces a hard ceiling of ``6n`` retained edges at any instant.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .graph_core import ContractError, Edge, Graph, MalformedInputError, is_matching, make_edge

MASK64 = (1 << 64) - 1
MEMORY_FACTOR = 6

ORDER_POLICIES = ("file", "reverse", "random")


class ParseError(MalformedInputError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MemoryContractError(RuntimeError):
    pass


@dataclass(frozen=True)
class Instance:
    graph: Graph
    name: str = "instance"

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges


def parse_instance(text: str, name: str = "instance") -> Instance:
    """Parse the edge-list format.

    ``#`` comment lines and blank lines are ignored; the first remaining line
    is ``n m`` and exactly ``m`` lines ``u v`` follow, in stream order.
    """
    header: tuple[int, int] | None = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(lineno, f"expected two integers, got {line!r}")
        try:
            x, y = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(lineno, f"expected two integers, got {line!r}") from None
        if header is None:
            if x < 0 or y < 0:
                raise ParseError(lineno, "malformed header: counts must be non-negative")
            header = (x, y)
            continue
        n, m = header
        if len(edges) >= m:
            raise ParseError(lineno, f"edge-count mismatch: header declares {m} edges")
        if x == y:
            raise ParseError(lineno, f"self-loop at vertex {x}")
        if not (0 <= x < n and 0 <= y < n):
            raise ParseError(lineno, f"endpoint out of range in ({x}, {y}) for n={n}")
        edges.append((x, y) if x < y else (y, x))
    if header is None:
        raise ParseError(0, "malformed header: missing 'n m' line")
    if len(edges) != header[1]:
        raise ParseError(0, f"edge-count mismatch: header declares {header[1]}, found {len(edges)}")
    return Instance(Graph(header[0], tuple(edges)), name)


def format_instance(instance: Instance, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{instance.n} {len(instance.edges)}")
    lines.extend(f"{a} {b}" for a, b in instance.edges)
    return "\n".join(lines) + "\n"


def load_instance(path: str | Path) -> Instance:
    p = Path(path)
    return parse_instance(p.read_text(encoding="utf-8"), name=p.stem)


def save_instance(instance: Instance, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(format_instance(instance, comment), encoding="utf-8")


class XorShift64Star:
    """xorshift64* generator (Vigna): shifts 12/25/27, multiplier 0x2545F4914F6CDD1D.

    The seed is first passed through one splitmix64 step so that seed 0 and
    nearby seeds give well-mixed, non-zero states.
    """

    MULT = 0x2545F4914F6CDD1D

    def __init__(self, seed: int):
        z = (seed + 0x9E3779B97F4A7C15) & MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z ^= z >> 31
        self.state = z or 0x9E3779B97F4A7C15

    def next(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * self.MULT) & MASK64

    def below(self, bound: int) -> int:
        # modulo reduction; bias is < bound / 2**64
        return self.next() % bound


@dataclass(frozen=True)
class StreamOrder:
    policy: str
    seed: int
    permutation: tuple[int, ...]

    def apply(self, edges: Sequence[Edge]) -> list[Edge]:
        return [edges[i] for i in self.permutation]


def make_order(m: int, policy: str = "file", seed: int = 0) -> StreamOrder:
    if policy not in ORDER_POLICIES:
        raise ValueError(f"unknown order policy {policy!r}")
    if m < 0:
        raise ValueError("edge count must be non-negative")
    seed &= MASK64
    perm = list(range(m))
    if policy == "reverse":
        perm.reverse()
    elif policy == "random":
        rng = XorShift64Star(seed)
        for i in range(m - 1, 0, -1):
            j = rng.below(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
    return StreamOrder(policy, seed if policy == "random" else 0, tuple(perm))


class MemoryMeter:
    """Counts retained edges; a stored 3-edge path is retained as 3."""

    def __init__(self, limit: int | None = None):
        self.limit = limit
        self.current = 0
        self.peak = 0
        self.per_pass_peaks: list[int] = []

    def begin_pass(self) -> None:
        self.per_pass_peaks.append(self.current)

    def retain(self, count: int = 1) -> None:
        self.current += count
        if self.current > self.peak:
            self.peak = self.current
        if self.per_pass_peaks and self.current > self.per_pass_peaks[-1]:
            self.per_pass_peaks[-1] = self.current
        if self.limit is not None and self.current > self.limit:
            raise MemoryContractError(
                f"retained {self.current} edges, above the limit of {self.limit}")

    def discard(self, count: int = 1) -> None:
        if count > self.current:
            raise MemoryContractError("discarding more edges than are retained")
        self.current -= count

    def to_dict(self) -> dict[str, Any]:
        return {"peak_edges": self.peak, "per_pass": list(self.per_pass_peaks)}


class StreamingAlgorithm:
    """Base class for a k-pass streaming algorithm driven by :func:`run_multi_pass`.

    Subclasses set ``name`` and ``passes`` and implement ``process`` (called
    once per streamed edge), ``end_pass`` (between-pass post-processing) and
    ``finish`` (returns the output matching and the retained artifacts).
    """

    name = "abstract"
    passes = 1

    def __init__(self, n: int, meter: MemoryMeter | None = None):
        self.n = n
        self.meter = meter if meter is not None else MemoryMeter()
        self.current_pass = -1

    def begin_pass(self, index: int) -> None:
        self.current_pass = index

    def process(self, edge: Edge) -> None:
        raise NotImplementedError

    def end_pass(self, index: int) -> None:
        pass

    def finish(self) -> tuple[frozenset[Edge], dict[str, Any]]:
        raise NotImplementedError


@dataclass
class RunResult:
    algo: str
    output: frozenset[Edge]
    artifacts: dict[str, Any]
    meter: MemoryMeter
    passes_used: int
    instance: Instance
    order: StreamOrder
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def output_size(self) -> int:
        return len(self.output)

    def arrival_index(self) -> dict[Edge, int]:
        """First position of every edge in the replayed stream."""
        pos: dict[Edge, int] = {}
        for t, i in enumerate(self.order.permutation):
            pos.setdefault(self.instance.edges[i], t)
        return pos


def run_multi_pass(algorithm: type[StreamingAlgorithm], instance: Instance,
                   order: StreamOrder | None = None) -> RunResult:
    """Replay the ordered stream ``algorithm.passes`` times and collect the result."""
    if order is None:
        order = make_order(len(instance.edges))
    if len(order.permutation) != len(instance.edges):
        raise ValueError("stream order does not cover the instance edges")
    n = instance.n
    meter = MemoryMeter(limit=MEMORY_FACTOR * n)
    algo = algorithm(n, meter)
    stream = order.apply(instance.edges)
    passes = 0
    for p in range(algo.passes):
        meter.begin_pass()
        algo.begin_pass(p)
        process = algo.process
        for e in stream:
            process(e)
        algo.end_pass(p)
        passes += 1
    output, artifacts = algo.finish()
    if not is_matching(output, n):
        raise ContractError(f"{algo.name} returned a non-matching")
    edge_set = set(instance.edges)
    stray = [e for e in output if e not in edge_set]
    if stray:
        raise ContractError(f"{algo.name} output contains non-input edges {stray[:3]}")
    return RunResult(algo.name, output, artifacts, meter, passes, instance, order,
                     getattr(algo, "stats", {}))


def stream_of(edges: Iterable[tuple[int, int]]) -> list[Edge]:
    """Canonicalize an iterable of vertex pairs into a replayable stream."""
    return [make_edge(u, v) for u, v in edges]
