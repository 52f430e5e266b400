"""Multi-pass semi-streaming maximum matching with exact analysis auditing."""

from .algorithms import ALGORITHMS, GUARANTEES, get_algorithm, run_algorithm
from .analysis_audit import AuditReport, audit_run
from .exact_matching import brute_force_max_size, max_matching, max_matching_edges
from .generators import FamilySpec, generate
from .graph_core import Edge, Graph, Path4, augment, degree_in, is_matching
from .stream_engine import Instance, load_instance, make_order, parse_instance, run_multi_pass

__all__ = [
    "ALGORITHMS", "GUARANTEES", "get_algorithm", "run_algorithm",
    "AuditReport", "audit_run",
    "brute_force_max_size", "max_matching", "max_matching_edges",
    "FamilySpec", "generate",
    "Edge", "Graph", "Path4", "augment", "degree_in", "is_matching",
    "Instance", "load_instance", "make_order", "parse_instance", "run_multi_pass",
]
