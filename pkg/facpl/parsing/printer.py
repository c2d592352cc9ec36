"""
Canonical text rendering of policies, expressions, requests and domains.
The output parses back to an equal object.
"""
from __future__ import annotations

from datetime import date
from typing import List, Union

from facpl.models.domains import AttributeDomain, DomainSpec
from facpl.models.policies import Call, Const, Expr, Name, Pdp, Policy, PolicySet, Rule, SetConst
from facpl.models.requests import Request
from facpl.models.values import Binding, Value, sort_key

_INDENT = "  "


def format_value(value: Value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, date):
        return value.isoformat()
    escaped = value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{escaped}"'


def format_value_set(values) -> str:
    return "{" + ", ".join(format_value(v) for v in sorted(values, key=sort_key)) + "}"


def format_expr(expr: Expr) -> str:
    if isinstance(expr, Name):
        return str(expr.name)
    if isinstance(expr, Const):
        return format_value(expr.value)
    if isinstance(expr, SetConst):
        return format_value_set(expr.values)
    if isinstance(expr, Call):
        return f"{expr.op}({', '.join(format_expr(arg) for arg in expr.args)})"
    raise TypeError(f"not an expression: {expr!r}")


def format_policy(policy: Union[Pdp, Policy]) -> str:
    lines: List[str] = []
    if isinstance(policy, Pdp):
        lines.append(f"pdp {{ {policy.alg}")
        lines.append(f"{_INDENT}policies:")
        for child in policy.policies:
            _policy_lines(child, 2, lines)
        lines.append("}")
    else:
        _policy_lines(policy, 0, lines)
    return "\n".join(lines) + "\n"


def _policy_lines(policy: Policy, depth: int, lines: List[str]) -> None:
    pad = _INDENT * depth
    if isinstance(policy, Rule):
        lines.append(f"{pad}({policy.effect} target: {format_expr(policy.target)})")
        return
    if isinstance(policy, PolicySet):
        head = f"{pad}{{ {policy.alg}"
        if policy.target is not None:
            head += f" target: {format_expr(policy.target)}"
        lines.append(head)
        lines.append(f"{pad}{_INDENT}policies:")
        for child in policy.children:
            _policy_lines(child, depth + 2, lines)
        lines.append(f"{pad}}}")
        return
    raise TypeError(f"not a policy: {policy!r}")


def format_binding(binding: Binding) -> str:
    if isinstance(binding, frozenset):
        return format_value_set(binding)
    return format_value(binding)


def format_request(request: Request) -> str:
    """One line, attributes in name order; unbound attributes are omitted"""
    return " ".join(f"({name}, {format_binding(bound)})" for name, bound in request.entries())


def format_attribute(attribute: AttributeDomain) -> str:
    universe = ", ".join(format_value(v) for v in attribute.universe)
    suffix = "" if attribute.allow_absent else " required"
    return f"{attribute.name} : {attribute.kind} in {{{universe}}}{suffix}"


def format_domain(domain: DomainSpec) -> str:
    return "".join(format_attribute(attribute) + "\n" for attribute in domain.attributes)
