"""
SMT-LIB 2 scripts for property queries over decision formulas.

Each query asserts the existence of a counterexample (or of a request
reaching a decision), so `unsat` means the property holds.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from io import StringIO
from typing import List, Optional

from pysmt.smtlib import commands as smtcmd
from pysmt.smtlib.script import SmtLibScript

from facpl import settings
from facpl.core.errors import UsageError
from facpl.models.domains import AttrKind
from facpl.models.policies import Decision
from facpl.smt.encoder import DecisionFormulas
from facpl.smt.formulas import Formula, conj, disj, neg

P = Decision.PERMIT
D = Decision.DENY
NA = Decision.NOT_APPLICABLE
IN = Decision.INDETERMINATE


class Query(ABC):
    """Base of the property queries"""

    name = "query"

    @abstractmethod
    def assertion(self, formulas: DecisionFormulas) -> Formula:
        """Formula satisfied exactly by the counterexamples (or witnesses)"""

    def others(self) -> List[DecisionFormulas]:
        return []


@dataclass(frozen=True)
class Reach(Query):
    """Some request evaluates to `decision`"""
    decision: Decision

    @property
    def name(self) -> str:
        return f"reach:{self.decision.value}"

    def assertion(self, formulas: DecisionFormulas) -> Formula:
        return formulas[self.decision]


@dataclass(frozen=True)
class Completeness(Query):
    """Some request is not-applicable (strict: or indeterminate)"""
    strict: bool = False
    name = "complete"

    def assertion(self, formulas: DecisionFormulas) -> Formula:
        if self.strict:
            return disj(formulas[NA], formulas[IN])
        return formulas[NA]


@dataclass(frozen=True, eq=False)
class Disjointness(Query):
    """Some request is decided by both policies"""
    other: DecisionFormulas
    name = "disjoint"

    def assertion(self, formulas: DecisionFormulas) -> Formula:
        return conj(disj(formulas[P], formulas[D]), disj(self.other[P], self.other[D]))

    def others(self) -> List[DecisionFormulas]:
        return [self.other]


@dataclass(frozen=True, eq=False)
class Coverage(Query):
    """Some request in the set is decided by `covered` differently"""
    covered: DecisionFormulas
    constraint: Formula
    mutual: bool = False
    name = "covers"

    def assertion(self, formulas: DecisionFormulas) -> Formula:
        covered = self.covered
        gaps = [conj(covered[d], neg(formulas[d])) for d in (P, D)]
        if self.mutual:
            gaps += [conj(formulas[d], neg(covered[d])) for d in (P, D)]
        return conj(self.constraint, disj(*gaps))

    def others(self) -> List[DecisionFormulas]:
        return [self.covered]


@dataclass(frozen=True, eq=False)
class Enforcement(Query):
    """Some request in the set does not evaluate to `decision`"""
    constraint: Formula
    decision: Decision

    @property
    def name(self) -> str:
        return f"enforce-{self.decision.value}"

    def assertion(self, formulas: DecisionFormulas) -> Formula:
        return conj(self.constraint, neg(formulas[self.decision]))


def build_script(formulas: DecisionFormulas, query: Query, logic: Optional[str] = None) -> SmtLibScript:
    """Declarations, domain restrictions, the query goal, then `check-sat` and `get-model`"""
    for other in query.others():
        if other.domain != formulas.domain:
            raise UsageError("both policies must be encoded over the same domain")
    vocabulary = formulas.vocabulary

    script = SmtLibScript()
    script.add(smtcmd.SET_OPTION, [":produce-models", "true"])
    script.add(smtcmd.SET_LOGIC, [logic or settings.SMT_LOGIC])
    for symbol in vocabulary.declarations():
        script.add(smtcmd.DECLARE_FUN, [symbol])
    for restriction in vocabulary.restrictions():
        script.add(smtcmd.ASSERT, [restriction])
    script.add(smtcmd.ASSERT, [query.assertion(formulas)])
    script.add(smtcmd.CHECK_SAT, [])
    script.add(smtcmd.GET_MODEL, [])
    return script


def emit_smtlib(formulas: DecisionFormulas, query: Query, logic: Optional[str] = None) -> str:
    """A complete, deterministic script for the query"""
    script = build_script(formulas, query, logic)
    lines = [f"; query: {query.name}" + (f" on {formulas.label}" if formulas.label else "")]
    for attribute in formulas.domain.attributes:
        if attribute.kind is AttrKind.STRING:
            codes = " ".join(f"{i}={value!r}" for i, value in enumerate(attribute.universe))
            lines.append(f"; {attribute.name}: {codes}")
    buffer = StringIO()
    script.serialize(buffer, daggify=True)
    return "\n".join(lines) + "\n" + buffer.getvalue()


def parse_query(text: str) -> Query:
    """`reach:<decision>` or `complete` / `complete-strict`; queries over other files are built by the CLI"""
    aliases = {"permit": P, "deny": D, "na": NA, "not-applicable": NA, "indet": IN, "indeterminate": IN}
    if text.startswith("reach:"):
        decision = aliases.get(text.split(":", 1)[1])
        if decision is None:
            raise UsageError(f"unknown decision in query {text!r}; use permit, deny, na or indet")
        return Reach(decision)
    if text == "complete":
        return Completeness()
    if text == "complete-strict":
        return Completeness(strict=True)
    raise UsageError(f"unknown query {text!r}")


