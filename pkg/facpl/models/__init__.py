from facpl.models.values import (
    ABSENT,
    AttrName,
    Binding,
    ExprError,
    Value,
    ValueKind,
    ValueSet,
    value_kind,
)
from facpl.models.policies import (
    TRUE,
    Call,
    CombAlg,
    Const,
    Decision,
    Effect,
    Expr,
    Name,
    Operator,
    Pdp,
    Policy,
    PolicySet,
    Rule,
    SetConst,
)
from facpl.models.requests import Request
from facpl.models.domains import AttrKind, AttributeDomain, DomainSpec, RequestSetSpec
from facpl.models.config import EMPTY_CONFIG, EngineConfig
from facpl.models.reports import CheckReport, CheckStatistics, Property, Witness

__all__ = [
    "ABSENT", "AttrName", "Binding", "ExprError", "Value", "ValueKind", "ValueSet", "value_kind",
    "TRUE", "Call", "CombAlg", "Const", "Decision", "Effect", "Expr", "Name", "Operator", "Pdp",
    "Policy", "PolicySet", "Rule", "SetConst", "Request", "AttrKind", "AttributeDomain", "DomainSpec",
    "RequestSetSpec", "EMPTY_CONFIG", "EngineConfig", "CheckReport", "CheckStatistics", "Property",
    "Witness",
]
