"""Finite groups realized as symmetry groups of quantum graphs."""

from .automorphism import (
    InducedEdgeMap,
    SymmetryGroups,
    WhitneyStatus,
    edge_symmetries,
    induce_edge_map,
    node_automorphisms,
    whitney_status,
)
from .errors import CapExceededError, ParseError, QfgError
from .frucht import frucht_graph, verify_realization
from .graph_core import SimpleGraph, classify, graphs_isomorphic, line_graph
from .metric_fem import QuantumGraphSpec, discretize, evolve, quadratic_form, spectrum
from .perm_group import (
    FiniteGroup,
    Permutation,
    cayley_color_digraph,
    closure_from_generators,
    compose,
    groups_isomorphic,
)
from .symmetry_engine import (
    check_symmetry,
    induced_operator,
    ouhabaz_check,
    symmetry_report,
    vonneumann_projection,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "FiniteGroup",
    "InducedEdgeMap",
    "ParseError",
    "Permutation",
    "QfgError",
    "QuantumGraphSpec",
    "SimpleGraph",
    "SymmetryGroups",
    "WhitneyStatus",
    "cayley_color_digraph",
    "check_symmetry",
    "classify",
    "closure_from_generators",
    "compose",
    "discretize",
    "edge_symmetries",
    "evolve",
    "frucht_graph",
    "graphs_isomorphic",
    "groups_isomorphic",
    "induce_edge_map",
    "induced_operator",
    "line_graph",
    "node_automorphisms",
    "ouhabaz_check",
    "quadratic_form",
    "spectrum",
    "symmetry_report",
    "verify_realization",
    "vonneumann_projection",
    "whitney_status",
]
