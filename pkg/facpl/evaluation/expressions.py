"""
Expression evaluation: typed operators over values, value sets, the absent
outcome (⊥) and in-band errors.
"""
from __future__ import annotations

import math
from datetime import date
from typing import Callable, Dict, List, Union

from facpl.models.config import EMPTY_CONFIG, EngineConfig
from facpl.models.policies import Call, Const, Expr, Name, Operator, SetConst
from facpl.models.requests import Request
from facpl.models.values import ABSENT, ExprError, Value, ValueKind, _Absent, value_kind

ExprResult = Union[bool, float, str, date, frozenset, _Absent, ExprError]


def is_error(result: ExprResult) -> bool:
    return isinstance(result, ExprError)


def _is_double(value: ExprResult) -> bool:
    return type(value) is float


def _kind(result: ExprResult):
    """Value kind of a value or of a value set's elements"""
    if isinstance(result, frozenset):
        return value_kind(next(iter(result)))
    return value_kind(result)


def eval_expr(expr: Expr, request: Request, config: EngineConfig = EMPTY_CONFIG) -> ExprResult:
    if isinstance(expr, Name):
        return request.lookup(expr.name)
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, SetConst):
        return expr.values
    if isinstance(expr, Call):
        args = [eval_expr(arg, request, config) for arg in expr.args]
        return apply_operator(expr.op, args, config)
    raise TypeError(f"not an expression: {expr!r}")


def apply_operator(op: Operator, args: List[ExprResult], config: EngineConfig = EMPTY_CONFIG) -> ExprResult:
    """Apply an operator to already evaluated operands"""
    if op in (Operator.AND, Operator.OR):
        return _kleene(op, args)

    for arg in args:
        if is_error(arg):
            return arg
    if any(arg is ABSENT for arg in args):
        return ABSENT
    return _STRICT[op](args, config)


# -----------------------------------------------------
# ✅ Boolean connectives (Kleene on ⊥, errors dominate)
# -----------------------------------------------------
def _kleene(op: Operator, args: List[ExprResult]) -> ExprResult:
    for arg in args:
        if is_error(arg):
            return arg
    for arg in args:
        if arg is not ABSENT and type(arg) is not bool:
            return ExprError(f"{op} expects booleans, got {_describe(arg)}")
    absorbing = op is Operator.OR
    if any(arg is absorbing for arg in args):
        return absorbing
    if any(arg is ABSENT for arg in args):
        return ABSENT
    return not absorbing


def _not(args, config) -> ExprResult:
    (operand,) = args
    if type(operand) is not bool:
        return ExprError(f"not expects a boolean, got {_describe(operand)}")
    return not operand


# -----------------------------------------------------
# ✅ Comparison and membership
# -----------------------------------------------------
def _equal(args, config) -> ExprResult:
    left, right = args
    if isinstance(left, frozenset) != isinstance(right, frozenset) or _kind(left) is not _kind(right):
        return ExprError(f"equal on mismatched operands {_describe(left)} and {_describe(right)}")
    return left == right


def _in(args, config) -> ExprResult:
    element, container = args
    if isinstance(element, frozenset):
        return ExprError("in expects a single value on the left, got a set")
    members = container if isinstance(container, frozenset) else frozenset((container,))
    if _kind(element) is not _kind(members):
        return ExprError(f"in on mismatched operands {_describe(element)} and {_describe(container)}")
    return element in members


def _greater_than(args, config) -> ExprResult:
    left, right = args
    if isinstance(left, frozenset) or isinstance(right, frozenset):
        return ExprError("greater-than on a set")
    kinds = (value_kind(left), value_kind(right))
    if kinds not in ((ValueKind.DOUBLE, ValueKind.DOUBLE), (ValueKind.DATE, ValueKind.DATE)):
        return ExprError(f"greater-than on {kinds[0].value} and {kinds[1].value}")
    return left > right


# -----------------------------------------------------
# ✅ Arithmetic on doubles
# -----------------------------------------------------
def _arithmetic(name: str, fn: Callable[[float, float], float]):
    def apply(args, config) -> ExprResult:
        left, right = args
        if not (_is_double(left) and _is_double(right)):
            return ExprError(f"{name} expects doubles, got {_describe(left)} and {_describe(right)}")
        if name == "divide" and right == 0.0:
            return ExprError("division by zero")
        try:
            result = fn(left, right)
        except OverflowError:
            return ExprError(f"{name} overflows")
        if not math.isfinite(result):
            return ExprError(f"{name} overflows")
        return result

    return apply


# -----------------------------------------------------
# ✅ Extension functions
# -----------------------------------------------------
def _leq(args, config: EngineConfig) -> ExprResult:
    low, high = args
    if not (isinstance(low, str) and isinstance(high, str)):
        return ExprError(f"leq expects level names, got {_describe(low)} and {_describe(high)}")
    result = config.leq(low, high)
    if result is None:
        return ExprError(f"unknown level in leq({low}, {high})")
    return result


def _sub_role(args, config: EngineConfig) -> ExprResult:
    roles, ancestor = args
    if not isinstance(ancestor, str):
        return ExprError(f"sub-role expects a role name, got {_describe(ancestor)}")
    candidates = roles if isinstance(roles, frozenset) else frozenset((roles,))
    if not all(isinstance(role, str) for role in candidates):
        return ExprError(f"sub-role expects role names, got {_describe(roles)}")
    found = False
    for role in sorted(candidates):
        reaches = config.is_sub_role(role, ancestor)
        if reaches is None:
            return ExprError(f"unknown role in sub-role({role}, {ancestor})")
        found = found or reaches
    return found


_STRICT: Dict[Operator, Callable] = {
    Operator.NOT: _not,
    Operator.EQUAL: _equal,
    Operator.IN: _in,
    Operator.GREATER_THAN: _greater_than,
    Operator.ADD: _arithmetic("add", lambda a, b: a + b),
    Operator.SUBTRACT: _arithmetic("subtract", lambda a, b: a - b),
    Operator.MULTIPLY: _arithmetic("multiply", lambda a, b: a * b),
    Operator.DIVIDE: _arithmetic("divide", lambda a, b: a / b),
    Operator.LEQ: _leq,
    Operator.SUB_ROLE: _sub_role,
}


def _describe(result: ExprResult) -> str:
    if result is ABSENT:
        return "absent"
    if isinstance(result, frozenset):
        return f"a set of {_kind(result).value}"
    return value_kind(result).value
