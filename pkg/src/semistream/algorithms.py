"""Name-to-class registry for the streaming algorithms and their guarantees."""

from __future__ import annotations

from fractions import Fraction

from .greedy_baseline import GreedyAlgorithm
from .stream_engine import Instance, RunResult, StreamingAlgorithm, make_order, run_multi_pass
from .triangle_greedy import ThreePassTriangles, TwoPassTriangles
from .wing_augment import WingGeneral, WingTriangleFree

ALGORITHMS: dict[str, type[StreamingAlgorithm]] = {
    "greedy": GreedyAlgorithm,
    "tri2": TwoPassTriangles,
    "tri3": ThreePassTriangles,
    "wing-tf": WingTriangleFree,
    "wing-gen": WingGeneral,
}

# worst-case approximation guarantee of each algorithm
GUARANTEES: dict[str, Fraction] = {
    "greedy": Fraction(1, 2),
    "tri2": Fraction(7, 13),
    "tri3": Fraction(5, 9),
    "wing-tf": Fraction(11, 18),
    "wing-gen": Fraction(41, 72),
}


def get_algorithm(name: str) -> type[StreamingAlgorithm]:
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}") from None


def run_algorithm(name: str, instance: Instance, policy: str = "file", seed: int = 0) -> RunResult:
    order = make_order(len(instance.edges), policy, seed)
    return run_multi_pass(get_algorithm(name), instance, order)


def meets_guarantee(name: str, output: int, opt: int) -> bool:
    g = GUARANTEES[name]
    return g.denominator * output >= g.numerator * opt
