"""
Propositional helpers over pysmt formula nodes.

pysmt hash-conses nodes in its global environment, so equal sub-formulas
are the same object and the encoder's DAGs stay shared. The smart
constructors below fold constants and flatten nested connectives before
handing over to pysmt.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional

from pysmt.fnode import FNode
from pysmt.shortcuts import And, Not, Or
from pysmt.shortcuts import FALSE as _FALSE
from pysmt.shortcuts import TRUE as _TRUE

Formula = FNode

TRUE: Formula = _TRUE()
FALSE: Formula = _FALSE()


# -----------------------------------------------------
# ✅ Smart constructors
# -----------------------------------------------------
def neg(formula: Formula) -> Formula:
    if formula.is_true():
        return FALSE
    if formula.is_false():
        return TRUE
    if formula.is_not():
        return formula.arg(0)
    return Not(formula)


def _flatten(nested, absorbing, args: Iterable[Formula]) -> Optional[List[Formula]]:
    flat: List[Formula] = []
    seen = set()
    for arg in args:
        if absorbing(arg):
            return None
        if arg.is_true() or arg.is_false():
            continue
        for part in (arg.args() if nested(arg) else (arg,)):
            if part not in seen:
                seen.add(part)
                flat.append(part)
    return flat


def conj(*args: Formula) -> Formula:
    flat = _flatten(FNode.is_and, FNode.is_false, args)
    if flat is None:
        return FALSE
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(flat)


def disj(*args: Formula) -> Formula:
    flat = _flatten(FNode.is_or, FNode.is_true, args)
    if flat is None:
        return TRUE
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(flat)


def conj_all(args: Iterable[Formula]) -> Formula:
    return conj(*args)


def disj_all(args: Iterable[Formula]) -> Formula:
    return disj(*args)


def iff(left: Formula, right: Formula) -> Formula:
    return disj(conj(left, right), conj(neg(left), neg(right)))


# -----------------------------------------------------
# ✅ Evaluation under an explicit assignment
# -----------------------------------------------------
def holds(formula: Formula, assignment: Mapping[str, object], memo: Dict[Formula, bool] = None) -> bool:
    """
    Truth value of a formula under `assignment` (symbol name -> bool, int
    or Fraction). Unassigned Boolean symbols are false and unassigned
    terms equal nothing.
    """
    memo = {} if memo is None else memo
    # iterative post-order so deep formulas do not hit the recursion limit
    stack = [(formula, False)]
    while stack:
        node, expanded = stack.pop()
        if node in memo:
            continue
        if (node.is_and() or node.is_or() or node.is_not() or node.is_iff()) and not expanded:
            stack.append((node, True))
            stack.extend((child, False) for child in node.args() if child not in memo)
            continue
        memo[node] = _node_value(node, assignment, memo)
    return memo[formula]


def _node_value(node: Formula, assignment: Mapping[str, object], memo: Dict[Formula, bool]) -> bool:
    if node.is_true():
        return True
    if node.is_false():
        return False
    if node.is_symbol():
        return assignment.get(node.symbol_name()) is True
    if node.is_not():
        return not memo[node.arg(0)]
    if node.is_and():
        return all(memo[child] for child in node.args())
    if node.is_or():
        return any(memo[child] for child in node.args())
    if node.is_iff():
        return memo[node.arg(0)] == memo[node.arg(1)]
    if node.is_equals():
        left, right = node.args()
        if not (left.is_symbol() and right.is_constant()):
            left, right = right, left
        if not (left.is_symbol() and right.is_constant()):
            raise TypeError(f"unsupported equality: {node}")
        bound = assignment.get(left.symbol_name())
        return bound is not None and not isinstance(bound, bool) and bound == right.constant_value()
    raise TypeError(f"unsupported formula node: {node}")
