"""
Collapses a policy hierarchy into four per-decision formulas over typed
attribute variables.

Every sub-expression is encoded as a symbolic result: a formula for
"evaluates to an error", a formula for "evaluates to absent", and either
a list of guarded concrete values (scalars) or one membership formula
per universe element (sets). Operators on scalars are applied to the
concrete values through the evaluator itself, so both sides agree on
typing, IEEE arithmetic and the extension functions.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import date
from fractions import Fraction
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from pysmt.shortcuts import Equals, Int, Real, Symbol
from pysmt.typing import BOOL, INT, REAL

from facpl.core.errors import EncodingError, UsageError
from facpl.evaluation.combining import DECISIONS, FINALISERS, MATRICES
from facpl.evaluation.expressions import apply_operator, is_error
from facpl.models.config import EMPTY_CONFIG, EngineConfig
from facpl.models.domains import AttrKind, AttributeDomain, DomainSpec
from facpl.models.policies import (
    Call, CombAlg, Const, Decision, Expr, Name, Operator, Pdp, Policy, Rule, SetConst,
)
from facpl.models.requests import Request
from facpl.models.values import ABSENT, AttrName, Value, sort_key, value_kind
from facpl.smt.formulas import FALSE, TRUE, Formula, conj, conj_all, disj, disj_all, holds, iff, neg

logger = logging.getLogger(__name__)

Subject = Union[Pdp, Policy]


# -----------------------------------------------------
# ✅ Variables of a domain
# -----------------------------------------------------
_KIND_TAGS = {
    AttrKind.BOOLEAN: ("bool", BOOL),
    AttrKind.DOUBLE: ("real", REAL),
    AttrKind.DATE: ("date", INT),
    AttrKind.STRING: ("str", INT),
}


def value_var(attribute: AttributeDomain) -> Formula:
    # the kind tag keeps one name per SMT sort when domains disagree on an attribute
    tag, sort = _KIND_TAGS[attribute.kind]
    return Symbol(f"{tag}.{attribute.name}", sort)


def presence_var(name: AttrName) -> Formula:
    return Symbol(f"has.{name}", BOOL)


def member_var(name: AttrName, index: int) -> Formula:
    return Symbol(f"in.{name}.{index}", BOOL)


class Vocabulary:
    """
    SMT variables and domain restrictions of a domain. String values are
    Int codes: the index of the value in its attribute's universe.
    """

    def __init__(self, domain: DomainSpec):
        self.domain = domain

    def presence(self, attribute: AttributeDomain) -> Formula:
        return presence_var(attribute.name) if attribute.allow_absent else TRUE

    def members(self, attribute: AttributeDomain) -> List[Tuple[Value, Formula]]:
        return [(value, member_var(attribute.name, i)) for i, value in enumerate(attribute.universe)]

    def value_is(self, attribute: AttributeDomain, value: Value) -> Formula:
        var = value_var(attribute)
        if attribute.kind is AttrKind.BOOLEAN:
            return var if value else neg(var)
        return Equals(var, self.literal(attribute, value))

    def literal(self, attribute: AttributeDomain, value: Value) -> Formula:
        if attribute.kind is AttrKind.DOUBLE:
            return Real(Fraction(value))
        return Int(self.code_of(attribute, value))

    @staticmethod
    def code_of(attribute: AttributeDomain, value: Value) -> int:
        if attribute.kind is AttrKind.DATE:
            return value.toordinal()
        return attribute.universe.index(value)

    def restrictions(self) -> List[Formula]:
        """Assertions that admit exactly the assignments of domain requests"""
        found: List[Formula] = []
        for attribute in self.domain.attributes:
            present = self.presence(attribute)
            if attribute.kind.is_set:
                flags = [flag for _, flag in self.members(attribute)]
                found.append(disj(neg(present), disj_all(flags)))
                if attribute.allow_absent:
                    found.append(disj(present, conj_all(neg(flag) for flag in flags)))
            elif attribute.kind is not AttrKind.BOOLEAN or len(set(attribute.universe)) < 2:
                found.append(disj_all(self.value_is(attribute, value) for value in attribute.universe))
        return [formula for formula in found if not formula.is_true()]

    def declarations(self) -> List[Formula]:
        """Declared symbols in declaration order"""
        found: List[Formula] = []
        for attribute in self.domain.attributes:
            if attribute.kind.is_set:
                found.extend(member_var(attribute.name, i) for i in range(len(attribute.universe)))
            else:
                found.append(value_var(attribute))
            if attribute.allow_absent:
                found.append(presence_var(attribute.name))
        return found

    # -- requests <-> assignments --------------------------------------
    def assignment_of(self, request: Request) -> Dict[str, object]:
        """Symbol name -> bool, int or Fraction, as a solver model would give them"""
        assignment: Dict[str, object] = {}
        for attribute in self.domain.attributes:
            bound = request.lookup(attribute.name)
            if bound is ABSENT and not attribute.allow_absent:
                raise UsageError(f"request leaves required attribute {attribute.name} unbound")
            if attribute.allow_absent:
                assignment[presence_var(attribute.name).symbol_name()] = bound is not ABSENT
            if attribute.kind.is_set:
                members = bound if isinstance(bound, frozenset) else frozenset() if bound is ABSENT else {bound}
                for index, value in enumerate(attribute.universe):
                    assignment[member_var(attribute.name, index).symbol_name()] = value in members
                outside = set(members) - set(attribute.universe)
            else:
                value = attribute.universe[0] if bound is ABSENT else bound
                outside = set() if bound is ABSENT or bound in attribute.universe else {bound}
                if not outside:
                    assignment[value_var(attribute).symbol_name()] = self._raw(attribute, value)
            if outside:
                raise UsageError(f"request binds {attribute.name} outside its universe")
        return assignment

    def _raw(self, attribute: AttributeDomain, value: Value) -> object:
        if attribute.kind is AttrKind.BOOLEAN:
            return bool(value)
        if attribute.kind is AttrKind.DOUBLE:
            return Fraction(value)
        return self.code_of(attribute, value)

    def request_of(self, model: Mapping[str, object]) -> Request:
        """Request described by a solver model (or any assignment)"""
        bindings = {}
        for attribute in self.domain.attributes:
            if attribute.allow_absent and model.get(presence_var(attribute.name).symbol_name()) is not True:
                continue
            if attribute.kind.is_set:
                chosen = frozenset(
                    value for index, value in enumerate(attribute.universe)
                    if model.get(member_var(attribute.name, index).symbol_name()) is True
                )
                bindings[attribute.name] = chosen or frozenset(attribute.universe[:1])
            else:
                raw = model.get(value_var(attribute).symbol_name())
                bindings[attribute.name] = self._value_from_model(attribute, raw)
        return Request.model_construct(bindings=bindings)

    @staticmethod
    def _value_from_model(attribute: AttributeDomain, raw: object) -> Value:
        if raw is None:
            return attribute.universe[0]
        if attribute.kind is AttrKind.STRING:
            index = int(raw)
            return attribute.universe[index] if 0 <= index < len(attribute.universe) else attribute.universe[0]
        if attribute.kind is AttrKind.DATE:
            return date.fromordinal(int(raw))
        if attribute.kind is AttrKind.DOUBLE:
            return float(raw)
        return bool(raw)


# -----------------------------------------------------
# ✅ Symbolic expression results
# -----------------------------------------------------
@dataclass(frozen=True)
class Sym:
    err: Formula
    absent: Formula
    # scalars: mutually exclusive guards whose disjunction is "evaluates to a value"
    cases: Tuple[Tuple[Formula, Value], ...] = ()
    # sets: raw membership per element, only meaningful when ok
    members: Optional[Tuple[Tuple[Value, Formula], ...]] = None

    @property
    def is_set(self) -> bool:
        return self.members is not None

    @property
    def ok(self) -> Formula:
        return conj(neg(self.err), neg(self.absent))

    def member(self, value: Value) -> Formula:
        for element, formula in self.members or ():
            if type(element) is type(value) and element == value:
                return formula
        return FALSE

    def guard_for(self, test) -> Formula:
        return disj_all(guard for guard, value in self.cases if test(value))


def _grouped(cases: Sequence[Tuple[Formula, Value]]) -> Tuple[Tuple[Formula, Value], ...]:
    """Merge cases with equal values (keyed by kind, so True and 1.0 stay apart)"""
    guards: Dict[tuple, List[Formula]] = {}
    values: Dict[tuple, Value] = {}
    for guard, value in cases:
        if guard.is_false():
            continue
        key = (value_kind(value), value)
        guards.setdefault(key, []).append(guard)
        values[key] = value
    ordered = sorted(guards, key=lambda key: sort_key(values[key]))
    return tuple((disj_all(guards[key]), values[key]) for key in ordered)


# -----------------------------------------------------
# ✅ Decision formulas
# -----------------------------------------------------
@dataclass
class DecisionFormulas:
    """One formula per decision over the variables of `vocabulary`"""
    formulas: Dict[Decision, Formula]
    vocabulary: Vocabulary
    label: str = ""
    extras: Dict[str, Formula] = field(default_factory=dict)

    def __getitem__(self, decision: Decision) -> Formula:
        return self.formulas[decision]

    @property
    def domain(self) -> DomainSpec:
        return self.vocabulary.domain

    def decide(self, assignment: Mapping[str, object]) -> Decision:
        """The decision whose formula holds; exactly one does on domain assignments"""
        memo: Dict[Formula, bool] = {}
        true = [d for d in DECISIONS if holds(self.formulas[d], assignment, memo)]
        if len(true) != 1:
            raise EncodingError(f"decision formulas are not exclusive here: {[d.value for d in true]}")
        return true[0]

    def decide_request(self, request: Request) -> Decision:
        return self.decide(self.assignment_of(request))

    def assignment_of(self, request: Request) -> Dict[str, object]:
        return self.vocabulary.assignment_of(request)

    def request_of(self, model: Mapping[str, object]) -> Request:
        return self.vocabulary.request_of(model)


class Encoder:
    def __init__(self, domain: DomainSpec, config: EngineConfig = EMPTY_CONFIG):
        self.domain = domain
        self.config = config
        self.vocabulary = Vocabulary(domain)
        self.attributes = domain.by_name

    # -- expressions -----------------------------------------------------
    def expr(self, expr: Expr) -> Sym:
        if isinstance(expr, Name):
            return self._name(expr.name)
        if isinstance(expr, Const):
            return Sym(err=FALSE, absent=FALSE, cases=((TRUE, expr.value),))
        if isinstance(expr, SetConst):
            ordered = sorted(expr.values, key=sort_key)
            return Sym(err=FALSE, absent=FALSE, members=tuple((value, TRUE) for value in ordered))
        if isinstance(expr, Call):
            self._check_literals(expr)
            args = [self.expr(arg) for arg in expr.args]
            if expr.op in (Operator.AND, Operator.OR):
                return self._kleene(expr.op, args)
            return self._strict(expr.op, args)
        raise TypeError(f"not an expression: {expr!r}")

    def _name(self, name: AttrName) -> Sym:
        attribute = self.attributes.get(name)
        if attribute is None:
            raise EncodingError(f"attribute {name} is not declared in the domain")
        present = self.vocabulary.presence(attribute)
        if attribute.kind.is_set:
            members = tuple(self.vocabulary.members(attribute))
            return Sym(err=FALSE, absent=neg(present), members=members)
        cases = tuple((conj(present, self.vocabulary.value_is(attribute, v)), v) for v in attribute.universe)
        return Sym(err=FALSE, absent=neg(present), cases=cases)

    def _check_literals(self, call: Call) -> None:
        """A literal compared directly with an attribute must be in its universe"""
        if call.op not in (Operator.EQUAL, Operator.IN):
            return
        left, right = call.args
        pairs = [(right, left)] if call.op is Operator.IN else [(left, right), (right, left)]
        for name, const in pairs:
            if not (isinstance(name, Name) and isinstance(const, Const)):
                continue
            attribute = self.attributes.get(name.name)
            if attribute is None or value_kind(const.value) is not attribute.kind.element_kind:
                continue
            if const.value not in attribute.universe:
                raise EncodingError(f"value {const.value!r} compared with {name.name} is not in its universe")

    def _kleene(self, op: Operator, args: List[Sym]) -> Sym:
        def bad(arg: Sym) -> Formula:
            if arg.is_set:
                return arg.ok
            return arg.guard_for(lambda v: type(v) is not bool)

        err = disj_all([a.err for a in args] + [bad(a) for a in args])
        absorbing = op is Operator.OR
        hit = disj_all(a.guard_for(lambda v, want=absorbing: v is want) for a in args if not a.is_set)
        absent = conj(neg(err), neg(hit), disj_all(a.absent for a in args))
        if any(a.is_set for a in args):
            unit = FALSE
        else:
            unit = conj(neg(err), *(a.guard_for(lambda v, want=not absorbing: v is want) for a in args))
        result_hit = conj(neg(err), hit)
        return Sym(err=err, absent=absent, cases=_grouped([(result_hit, absorbing), (unit, not absorbing)]))

    def _strict(self, op: Operator, args: List[Sym]) -> Sym:
        inner_err = disj_all(a.err for a in args)
        absent = conj(neg(inner_err), disj_all(a.absent for a in args))
        ok_all = conj_all(a.ok for a in args)

        if any(a.is_set for a in args):
            op_err, cases = self._with_sets(op, args, ok_all)
        else:
            errors: List[Formula] = []
            found: List[Tuple[Formula, Value]] = []
            for combo in product(*(a.cases for a in args)):
                guard = conj_all(g for g, _ in combo)
                if guard.is_false():
                    continue
                result = apply_operator(op, [v for _, v in combo], self.config)
                if is_error(result):
                    errors.append(guard)
                else:
                    found.append((guard, result))
            op_err, cases = disj_all(errors), _grouped(found)
        return Sym(err=disj(inner_err, op_err), absent=absent, cases=cases)

    def _with_sets(self, op: Operator, args: List[Sym], ok_all: Formula):
        """Operators with a set operand: only `in`, `equal` and `sub-role` can succeed"""
        if op is Operator.IN and not args[0].is_set:
            element, container = args
            kind = value_kind(container.members[0][0]) if container.members else None
            errors, hits, misses = [], [], []
            for guard, value in element.cases:
                guard = conj(ok_all, guard)
                if value_kind(value) is not kind:
                    errors.append(guard)
                    continue
                hits.append(conj(guard, container.member(value)))
                misses.append(conj(guard, neg(container.member(value))))
            return disj_all(errors), _grouped([(disj_all(hits), True), (disj_all(misses), False)])

        if op is Operator.EQUAL and all(a.is_set for a in args):
            left, right = args
            kinds = {value_kind(v) for a in args for v, _ in a.members}
            if len(kinds) != 1:
                return ok_all, ()
            elements = {(value_kind(v), v): v for a in args for v, _ in a.members}
            same = conj_all(iff(left.member(v), right.member(v)) for _, v in sorted(elements.items(), key=lambda i: sort_key(i[1])))
            return FALSE, _grouped([(conj(ok_all, same), True), (conj(ok_all, neg(same)), False)])

        if op is Operator.SUB_ROLE and args[0].is_set and not args[1].is_set:
            roles, ancestor = args
            errors, hits, misses = [], [], []
            for guard, target in ancestor.cases:
                guard = conj(ok_all, guard)
                if not isinstance(target, str) or any(not isinstance(r, str) for r, _ in roles.members):
                    errors.append(guard)
                    continue
                unknown = disj_all(
                    flag for role, flag in roles.members if self.config.is_sub_role(role, target) is None
                )
                reaches = disj_all(
                    flag for role, flag in roles.members if self.config.is_sub_role(role, target) is True
                )
                errors.append(conj(guard, unknown))
                hits.append(conj(guard, neg(unknown), reaches))
                misses.append(conj(guard, neg(unknown), neg(reaches)))
            return disj_all(errors), _grouped([(disj_all(hits), True), (disj_all(misses), False)])

        return ok_all, ()

    # -- targets and policies -------------------------------------------
    def target(self, expr: Expr) -> Tuple[Formula, Formula, Formula]:
        """(match, no-match, error) for a target expression"""
        sym = self.expr(expr)
        if sym.is_set:
            match = FALSE
            no_match = sym.absent
        else:
            match = sym.guard_for(lambda v: v is True)
            no_match = disj(sym.absent, sym.guard_for(lambda v: v is False))
        return match, no_match, conj(neg(match), neg(no_match))

    def rule(self, rule: Rule) -> Dict[Decision, Formula]:
        match, no_match, error = self.target(rule.target)
        formulas = {d: FALSE for d in DECISIONS}
        formulas[rule.effect.decision] = match
        formulas[Decision.NOT_APPLICABLE] = no_match
        formulas[Decision.INDETERMINATE] = error
        return formulas

    def policy(self, policy: Policy) -> Dict[Decision, Formula]:
        if isinstance(policy, Rule):
            return self.rule(policy)
        match, no_match, error = self.target(policy.effective_target)
        combined = self.combine(policy.alg, [self.policy(child) for child in policy.children])
        return {
            Decision.PERMIT: conj(match, combined[Decision.PERMIT]),
            Decision.DENY: conj(match, combined[Decision.DENY]),
            Decision.NOT_APPLICABLE: disj(no_match, conj(match, combined[Decision.NOT_APPLICABLE])),
            Decision.INDETERMINATE: disj(error, conj(match, combined[Decision.INDETERMINATE])),
        }

    def pdp(self, pdp: Pdp) -> Dict[Decision, Formula]:
        return self.combine(pdp.alg, [self.policy(child) for child in pdp.policies])

    def combine(self, alg: CombAlg, children: List[Dict[Decision, Formula]]) -> Dict[Decision, Formula]:
        matrix = MATRICES[alg]
        acc = children[0]
        for nxt in children[1:]:
            acc = {
                d: disj_all(conj(acc[a], nxt[b]) for (a, b), out in matrix.items() if out is d)
                for d in DECISIONS
            }
        final = FINALISERS.get(alg)
        if final:
            acc = {d: disj_all(acc[src] for src, out in final.items() if out is d) for d in DECISIONS}
        return acc

    def subject(self, subject: Subject) -> Dict[Decision, Formula]:
        if isinstance(subject, Pdp):
            return self.pdp(subject)
        return self.policy(subject)


def encode(
    subject: Subject, domain: DomainSpec, config: EngineConfig = EMPTY_CONFIG, label: str = "",
) -> DecisionFormulas:
    """Decision formulas of a PDP or policy over the domain's variables"""
    encoder = Encoder(domain, config)
    formulas = encoder.subject(subject)
    logger.debug("Policy encoded", extra={"component": "smt", "path": label})
    return DecisionFormulas(formulas=formulas, vocabulary=encoder.vocabulary, label=label)


def encode_constraint(constraint: Expr, domain: DomainSpec, config: EngineConfig = EMPTY_CONFIG) -> Formula:
    """Membership formula of a request set: the constraint evaluates to true"""
    match, _, _ = Encoder(domain, config).target(constraint)
    return match
