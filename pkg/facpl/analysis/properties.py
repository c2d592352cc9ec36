"""
Catalogue of security properties as permit/deny request-set predicates.

A property splits the requests it speaks about into a permit set (secure
behaviours) and a deny set (nonsecure behaviours). Properties can be
scoped to one resource and a set of subjects, and conjoined: a conjunction
is secure when every part is secure and nonsecure when any part is.
"""
from __future__ import annotations

from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from facpl.core.errors import UsageError
from facpl.models.domains import DomainSpec, RequestSetSpec
from facpl.models.policies import Call, Const, Expr, Name, Operator, SetConst
from facpl.models.values import AttrName

SUBJECT_ID = AttrName(category="subject", attribute="id")
SUBJECT_LEVEL = AttrName(category="subject", attribute="level")
SUBJECT_ROLE = AttrName(category="subject", attribute="role")
RESOURCE_ID = AttrName(category="resource", attribute="id")
RESOURCE_LEVEL = AttrName(category="resource", attribute="level")
RESOURCE_READ_IDS = AttrName(category="resource", attribute="read.ids")
ACTION_ID = AttrName(category="action", attribute="id")


def _call(op: Operator, *args: Expr) -> Call:
    return Call(op=op, args=args)


def _and(*parts: Expr) -> Expr:
    result = parts[0]
    for part in parts[1:]:
        result = _call(Operator.AND, result, part)
    return result


def _or(*parts: Expr) -> Expr:
    result = parts[0]
    for part in parts[1:]:
        result = _call(Operator.OR, result, part)
    return result


def _not(expr: Expr) -> Expr:
    return _call(Operator.NOT, expr)


def _is(name: AttrName, value: str) -> Expr:
    return _call(Operator.EQUAL, Name(name=name), Const(value=value))


class SecurityProperty(BaseModel):
    """A property as a pair of request-set predicates"""
    model_config = ConfigDict(frozen=True)

    name: str
    secure: Expr
    nonsecure: Expr

    def scoped(self, resource: Optional[str] = None, subjects: Sequence[str] = ()) -> "SecurityProperty":
        """Restrict both sets to one resource id and a set of subject ids"""
        guards = []
        if resource is not None:
            guards.append(_is(RESOURCE_ID, resource))
        if subjects:
            guards.append(_call(Operator.IN, Name(name=SUBJECT_ID), SetConst(values=frozenset(subjects))))
        if not guards:
            return self
        return SecurityProperty(
            name=self.name, secure=_and(*guards, self.secure), nonsecure=_and(*guards, self.nonsecure),
        )

    def request_sets(self, domain: DomainSpec) -> Tuple[RequestSetSpec, RequestSetSpec]:
        """(permit set, deny set) over the domain"""
        return (
            RequestSetSpec(domain=domain, constraint=self.secure, label=f"{self.name} secure"),
            RequestSetSpec(domain=domain, constraint=self.nonsecure, label=f"{self.name} nonsecure"),
        )


def _guarded(name: str, action: str, condition: Expr) -> SecurityProperty:
    guard = _is(ACTION_ID, action)
    return SecurityProperty(name=name, secure=_and(guard, condition), nonsecure=_and(guard, _not(condition)))


def _leq(low: AttrName, high: AttrName) -> Expr:
    return _call(Operator.LEQ, Name(name=low), Name(name=high))


# -----------------------------------------------------
# ✅ Confidentiality and integrity (multi-level security)
# -----------------------------------------------------
def no_read_up() -> SecurityProperty:
    """Subjects read only resources at or below their level"""
    return _guarded("no-read-up", "read", _leq(RESOURCE_LEVEL, SUBJECT_LEVEL))


def no_write_down() -> SecurityProperty:
    """Subjects write only resources at or above their level"""
    return _guarded("no-write-down", "write", _leq(SUBJECT_LEVEL, RESOURCE_LEVEL))


def no_read_down() -> SecurityProperty:
    return _guarded("no-read-down", "read", _leq(SUBJECT_LEVEL, RESOURCE_LEVEL))


def no_write_up() -> SecurityProperty:
    return _guarded("no-write-up", "write", _leq(RESOURCE_LEVEL, SUBJECT_LEVEL))


# -----------------------------------------------------
# ✅ Discretionary access and role-based properties
# -----------------------------------------------------
def dac(action: str = "read", acl: AttrName = RESOURCE_READ_IDS) -> SecurityProperty:
    """The subject appears in the resource's access list"""
    return _guarded("dac", action, _call(Operator.IN, Name(name=SUBJECT_ID), Name(name=acl)))


def separation_of_duty(required: str = "officier", conflicting: str = "assistant", action: str = "approve") -> SecurityProperty:
    """Static SoD: the action needs one role and is barred to holders of the conflicting one"""
    roles = Name(name=SUBJECT_ROLE)
    condition = _and(
        _call(Operator.IN, Const(value=required), roles),
        _not(_call(Operator.IN, Const(value=conflicting), roles)),
    )
    return _guarded("sod", action, condition)


def hybrid(role: str = "assistant", excluded: str = "officier", action: str = "submit") -> SecurityProperty:
    """Role-hierarchy access combined with a separation constraint"""
    roles = Name(name=SUBJECT_ROLE)
    condition = _and(
        _call(Operator.SUB_ROLE, roles, Const(value=role)),
        _not(_call(Operator.IN, Const(value=excluded), roles)),
    )
    return _guarded("hybrid", action, condition)


def conjunction(parts: Iterable[SecurityProperty]) -> SecurityProperty:
    parts = list(parts)
    if not parts:
        raise UsageError("a conjunction needs at least one property")
    if len(parts) == 1:
        return parts[0]
    return SecurityProperty(
        name="+".join(part.name for part in parts),
        secure=_and(*(part.secure for part in parts)),
        nonsecure=_or(*(part.nonsecure for part in parts)),
    )


CATALOGUE: Dict[str, Callable[[], SecurityProperty]] = {
    "nru": no_read_up,
    "nwd": no_write_down,
    "nrd": no_read_down,
    "nwu": no_write_up,
    "dac": dac,
    "sod": separation_of_duty,
    "hybrid": hybrid,
}


def lookup_property(names: str) -> SecurityProperty:
    """`nru` or a `+`/`,`-separated conjunction such as `nru+dac`"""
    parts = []
    for name in names.replace(",", "+").split("+"):
        name = name.strip()
        if name not in CATALOGUE:
            known = ", ".join(sorted(CATALOGUE))
            raise UsageError(f"unknown property {name!r}; known properties: {known}")
        parts.append(CATALOGUE[name]())
    return conjunction(parts)
