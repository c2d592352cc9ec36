"""
Combining algorithms as data: each algorithm is a pairwise matrix folded
left to right over the child decisions, optionally followed by a
finalising map. The SMT encoder builds its formulas from the same tables.
"""
from __future__ import annotations

from functools import reduce
from itertools import product
from typing import Dict, Iterable, Tuple

from facpl.core.errors import UsageError
from facpl.models.policies import CombAlg, Decision

P = Decision.PERMIT
D = Decision.DENY
NA = Decision.NOT_APPLICABLE
IN = Decision.INDETERMINATE

DECISIONS: Tuple[Decision, ...] = (P, D, NA, IN)

Matrix = Dict[Tuple[Decision, Decision], Decision]

# Permit-overrides, row = left operand, column = right operand
PERMIT_OVERRIDES: Matrix = {
    (P, P): P,  (P, D): P,  (P, NA): P,  (P, IN): P,
    (D, P): P,  (D, D): D,  (D, NA): D,  (D, IN): IN,
    (NA, P): P, (NA, D): D, (NA, NA): NA, (NA, IN): IN,
    (IN, P): P, (IN, D): IN, (IN, NA): IN, (IN, IN): IN,
}

_SWAP = {P: D, D: P, NA: NA, IN: IN}


def swap(decision: Decision) -> Decision:
    """Exchange permit and deny"""
    return _SWAP[decision]


def _dual(matrix: Matrix) -> Matrix:
    return {(swap(a), swap(b)): swap(result) for (a, b), result in matrix.items()}


def _tabulate(rule) -> Matrix:
    return {(a, b): rule(a, b) for a, b in product(DECISIONS, repeat=2)}


def _first_applicable(a: Decision, b: Decision) -> Decision:
    return a if a is not NA else b


def _only_one_applicable(a: Decision, b: Decision) -> Decision:
    if IN in (a, b):
        return IN
    if a is NA:
        return b
    if b is NA:
        return a
    return IN


def _weak_consensus(a: Decision, b: Decision) -> Decision:
    if IN in (a, b):
        return IN
    if a is NA:
        return b
    if b is NA or a is b:
        return a
    return IN


def _strong_consensus(a: Decision, b: Decision) -> Decision:
    return a if a is b else IN


DENY_OVERRIDES = _dual(PERMIT_OVERRIDES)

MATRICES: Dict[CombAlg, Matrix] = {
    CombAlg.PERMIT_OVERRIDES: PERMIT_OVERRIDES,
    CombAlg.DENY_OVERRIDES: DENY_OVERRIDES,
    CombAlg.DENY_UNLESS_PERMIT: PERMIT_OVERRIDES,
    CombAlg.PERMIT_UNLESS_DENY: DENY_OVERRIDES,
    CombAlg.FIRST_APPLICABLE: _tabulate(_first_applicable),
    CombAlg.ONLY_ONE_APPLICABLE: _tabulate(_only_one_applicable),
    CombAlg.WEAK_CONSENSUS: _tabulate(_weak_consensus),
    CombAlg.STRONG_CONSENSUS: _tabulate(_strong_consensus),
}

# Applied once to the folded result
FINALISERS: Dict[CombAlg, Dict[Decision, Decision]] = {
    CombAlg.DENY_UNLESS_PERMIT: {P: P, D: D, NA: D, IN: D},
    CombAlg.PERMIT_UNLESS_DENY: {P: P, D: D, NA: P, IN: P},
}


def combine_pair(alg: CombAlg, left: Decision, right: Decision) -> Decision:
    return MATRICES[alg][(left, right)]


def combine(alg: CombAlg, decisions: Iterable[Decision]) -> Decision:
    """Combine an ordered, non-empty sequence of decisions"""
    decisions = list(decisions)
    if not decisions:
        raise UsageError(f"{alg} cannot combine an empty sequence of decisions")
    matrix = MATRICES[alg]
    folded = reduce(lambda acc, nxt: matrix[(acc, nxt)], decisions)
    final = FINALISERS.get(alg)
    return final[folded] if final else folded
