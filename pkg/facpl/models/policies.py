"""
Decisions, effects, combining algorithms and the policy / expression AST.
"""
from __future__ import annotations

from enum import Enum
from typing import FrozenSet, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from facpl.models.values import AttrName, Value, check_value, set_kind


class Decision(str, Enum):
    PERMIT = "permit"
    DENY = "deny"
    NOT_APPLICABLE = "not-applicable"
    INDETERMINATE = "indeterminate"

    @property
    def is_applicable(self) -> bool:
        """True for permit and deny"""
        return self in (Decision.PERMIT, Decision.DENY)

    def __str__(self) -> str:
        return self.value


class Effect(str, Enum):
    PERMIT = "permit"
    DENY = "deny"

    @property
    def decision(self) -> Decision:
        return Decision(self.value)

    def __str__(self) -> str:
        return self.value


class CombAlg(str, Enum):
    PERMIT_OVERRIDES = "permit-overrides"
    DENY_OVERRIDES = "deny-overrides"
    DENY_UNLESS_PERMIT = "deny-unless-permit"
    PERMIT_UNLESS_DENY = "permit-unless-deny"
    FIRST_APPLICABLE = "first-applicable"
    ONLY_ONE_APPLICABLE = "only-one-applicable"
    WEAK_CONSENSUS = "weak-consensus"
    STRONG_CONSENSUS = "strong-consensus"

    def __str__(self) -> str:
        return self.value


class Operator(str, Enum):
    AND = "and"
    OR = "or"
    NOT = "not"
    EQUAL = "equal"
    IN = "in"
    GREATER_THAN = "greater-than"
    ADD = "add"
    SUBTRACT = "subtract"
    DIVIDE = "divide"
    MULTIPLY = "multiply"
    LEQ = "leq"
    SUB_ROLE = "sub-role"

    @property
    def arity(self) -> int:
        return 1 if self is Operator.NOT else 2

    def __str__(self) -> str:
        return self.value


class _Node(BaseModel):
    model_config = ConfigDict(frozen=True)


# -----------------------------------------------------
# ✅ Expressions
# -----------------------------------------------------
class Name(_Node):
    """Reference to an attribute of the request"""
    name: AttrName


class Const(_Node):
    """Literal value"""
    value: Value

    @field_validator("value")
    @classmethod
    def _finite(cls, value: Value) -> Value:
        return check_value(value)


class SetConst(_Node):
    """Literal set of values of one kind"""
    values: FrozenSet[Value]

    @field_validator("values")
    @classmethod
    def _uniform(cls, values: FrozenSet[Value]) -> FrozenSet[Value]:
        for value in values:
            check_value(value)
        set_kind(values)
        return values


class Call(_Node):
    """Operator or extension-function application"""
    op: Operator
    args: Tuple["Expr", ...]

    @model_validator(mode="after")
    def _arity(self) -> "Call":
        if len(self.args) != self.op.arity:
            raise ValueError(f"{self.op} takes {self.op.arity} argument(s), got {len(self.args)}")
        return self


Expr = Union[Name, Const, SetConst, Call]

TRUE = Const(value=True)


# -----------------------------------------------------
# ✅ Policies
# -----------------------------------------------------
class Rule(_Node):
    effect: Effect
    target: Expr


class PolicySet(_Node):
    alg: CombAlg
    target: Optional[Expr] = None
    children: Tuple["Policy", ...] = Field(min_length=1)

    @property
    def effective_target(self) -> Expr:
        """An omitted target behaves as the literal true"""
        return TRUE if self.target is None else self.target


Policy = Union[Rule, PolicySet]


class Pdp(_Node):
    """Policy decision point: a targetless combination of policies"""
    alg: CombAlg
    policies: Tuple[Policy, ...] = Field(min_length=1)


Call.model_rebuild()
PolicySet.model_rebuild()
Pdp.model_rebuild()
