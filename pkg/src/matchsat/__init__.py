"""SAT encoding of the at-least-K matching decision problem, with a DPLL
solver, certificate checker, exhaustive oracle and corpus harness."""

from .certifier import MatchingCertificate, decode, reconstruct_l, verify
from .encoder import Cnf, EncodeFlags, VarMap, build_varmap, encode, to_dimacs
from .graph import Graph, Instance, adjacent_pairs, parse_graph, validate_instance
from .oracle import max_matching
from .solver import Status, analyze_structure, solve, unit_propagate

__all__ = [
    "Cnf", "EncodeFlags", "Graph", "Instance", "MatchingCertificate",
    "Status", "VarMap", "adjacent_pairs", "analyze_structure", "build_varmap",
    "decode", "encode", "max_matching", "parse_graph", "reconstruct_l",
    "solve", "to_dimacs", "unit_propagate", "validate_instance", "verify",
]
