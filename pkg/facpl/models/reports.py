from __future__ import annotations

from enum import Enum
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from facpl.models.policies import Decision
from facpl.models.requests import Request


# -----------------------------------------------------
# ✅ Property check results
# -----------------------------------------------------
class Property(str, Enum):
    ENFORCEMENT = "enforcement"
    LEAST_PRIVILEGE = "least-privilege"
    COMPLETENESS = "completeness"
    REDUNDANCY = "redundancy"
    DISJOINTNESS = "disjointness"
    COVERAGE = "coverage"

    def __str__(self) -> str:
        return self.value


class Witness(BaseModel):
    """
    A request on which a property fails. `observed` holds the decision(s)
    the policies returned, `expected` the decision(s) the property asks for.
    A witness with no observed decisions marks a defect in a request-set
    specification (its constraint evaluated to an error); `note` says why.
    """
    model_config = ConfigDict(frozen=True)

    request: Request
    observed: Tuple[Decision, ...] = ()
    expected: Tuple[Decision, ...] = ()
    note: str = ""

    @property
    def is_spec_defect(self) -> bool:
        return not self.observed


class CheckStatistics(BaseModel):
    requests_examined: int = 0
    elapsed_seconds: float = 0.0
    violations: int = 0
    violations_by_decision: Dict[str, int] = Field(default_factory=dict)
    # requests whose set constraint evaluated to ABSENT (counted as non-members)
    absent_constraint_warnings: int = 0
    spec_defects: int = 0


class CheckReport(BaseModel):
    """
    Verdict of one property check over an enumerated request space.
    Witnesses are capped; statistics always count every violation.
    """
    property: Property
    holds: bool
    witnesses: Tuple[Witness, ...] = ()
    statistics: CheckStatistics = Field(default_factory=CheckStatistics)
    subject: str = ""

    @model_validator(mode="after")
    def _witnessed(self) -> "CheckReport":
        if not self.holds and not self.witnesses:
            raise ValueError("a failing check must carry at least one witness")
        return self
