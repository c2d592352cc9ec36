from facpl.smt.encoder import DecisionFormulas, Vocabulary, encode, encode_constraint
from facpl.smt.smtlib import Completeness, Coverage, Disjointness, Enforcement, Query, Reach, emit_smtlib, parse_query
from facpl.smt.solver import SolverResult, solve

__all__ = [
    "DecisionFormulas", "Vocabulary", "encode", "encode_constraint", "Completeness", "Coverage",
    "Disjointness", "Enforcement", "Query", "Reach", "emit_smtlib", "parse_query", "SolverResult", "solve",
]
