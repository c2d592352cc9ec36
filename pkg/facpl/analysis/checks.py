"""
Security and structural property checks by exhaustive enumeration.

Each check is an inspector applied to every request of the domain. Inspectors are
picklable so the request space can be split across worker processes; the
partial results merge associatively into the sequential result.
"""
from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

from facpl import settings
from facpl.analysis.enumerator import check_cap, enumerate_requests
from facpl.core.errors import UsageError
from facpl.core.metrics import CheckTimer, MetricsCollector
from facpl.evaluation.combining import combine
from facpl.evaluation.expressions import eval_expr
from facpl.evaluation.policies import evaluate, eval_policy, target_outcome
from facpl.models.config import EMPTY_CONFIG, EngineConfig
from facpl.models.domains import DomainSpec, RequestSetSpec
from facpl.models.policies import Decision, Expr, Pdp, Policy, PolicySet
from facpl.models.reports import CheckReport, CheckStatistics, Property, Witness
from facpl.models.requests import Request
from facpl.models.values import ABSENT

logger = logging.getLogger(__name__)

Subject = Union[Pdp, Policy]
Container = Union[Pdp, PolicySet]
ChildPath = Tuple[int, ...]

# Below this many requests a worker pool costs more than it saves
_PARALLEL_THRESHOLD = 4096

SPEC_DEFECT = "spec-defect"


# -----------------------------------------------------
# ✅ Request-set membership
# -----------------------------------------------------
MEMBER = "member"
NON_MEMBER = "non-member"
ABSENT_CONSTRAINT = "absent"
DEFECT = "defect"


def membership(constraint: Expr, request: Request, config: EngineConfig = EMPTY_CONFIG) -> str:
    """Classify a request against a set constraint"""
    result = eval_expr(constraint, request, config)
    if result is True:
        return MEMBER
    if result is False:
        return NON_MEMBER
    if result is ABSENT:
        return ABSENT_CONSTRAINT
    return DEFECT


class Observation(NamedTuple):
    witness: Optional[Witness] = None
    absent_constraint: bool = False


_OK = Observation()


# -----------------------------------------------------
# ✅ Inspectors
# -----------------------------------------------------
@dataclass(frozen=True)
class EnforcementInspector:
    subject: Subject
    permit: Expr
    # None: every request outside the permit set must be denied
    deny: Optional[Expr]
    config: EngineConfig

    def __call__(self, request: Request) -> Observation:
        absent = False
        expected: List[Decision] = []

        in_permit = membership(self.permit, request, self.config)
        if in_permit == DEFECT:
            return Observation(Witness(request=request, note="permit-set constraint is not boolean"))
        absent = in_permit == ABSENT_CONSTRAINT
        if in_permit == MEMBER:
            expected.append(Decision.PERMIT)

        if self.deny is None:
            if in_permit != MEMBER:
                expected.append(Decision.DENY)
        else:
            in_deny = membership(self.deny, request, self.config)
            if in_deny == DEFECT:
                return Observation(Witness(request=request, note="deny-set constraint is not boolean"))
            absent = absent or in_deny == ABSENT_CONSTRAINT
            if in_deny == MEMBER:
                expected.append(Decision.DENY)

        if not expected:
            return Observation(absent_constraint=absent)
        decision = evaluate(self.subject, request, self.config)
        if all(decision is want for want in expected):
            return Observation(absent_constraint=absent)
        return Observation(Witness(request=request, observed=(decision,), expected=tuple(expected)), absent)


@dataclass(frozen=True)
class CompletenessInspector:
    subject: Subject
    config: EngineConfig
    strict: bool = False

    def __call__(self, request: Request) -> Observation:
        decision = evaluate(self.subject, request, self.config)
        if decision is Decision.NOT_APPLICABLE or (self.strict and decision is Decision.INDETERMINATE):
            return Observation(Witness(
                request=request, observed=(decision,), expected=(Decision.PERMIT, Decision.DENY),
            ))
        return _OK


@dataclass(frozen=True)
class RedundancyInspector:
    container: Container
    path: ChildPath
    config: EngineConfig
    memoise: bool = False
    reduced: Optional[Container] = None

    def __call__(self, request: Request) -> Observation:
        if self.memoise:
            full, without = _decide_with_and_without(self.container, self.path, request, self.config)
        else:
            full = evaluate(self.container, request, self.config)
            without = evaluate(self.reduced, request, self.config)
        if full is without:
            return _OK
        return Observation(Witness(
            request=request, observed=(full, without), note="decision changes when the child is removed",
        ))


@dataclass(frozen=True)
class DisjointnessInspector:
    first: Subject
    second: Subject
    config: EngineConfig

    def __call__(self, request: Request) -> Observation:
        left = evaluate(self.first, request, self.config)
        if not left.is_applicable:
            return _OK
        right = evaluate(self.second, request, self.config)
        if not right.is_applicable:
            return _OK
        return Observation(Witness(request=request, observed=(left, right), note="both policies apply"))


@dataclass(frozen=True)
class CoverageInspector:
    covering: Subject
    covered: Subject
    constraint: Expr
    config: EngineConfig
    mutual: bool = False

    def __call__(self, request: Request) -> Observation:
        member = membership(self.constraint, request, self.config)
        if member == DEFECT:
            return Observation(Witness(request=request, note="request-set constraint is not boolean"))
        if member != MEMBER:
            return Observation(absent_constraint=member == ABSENT_CONSTRAINT)
        covering = evaluate(self.covering, request, self.config)
        covered = evaluate(self.covered, request, self.config)
        if covered.is_applicable and covering is not covered:
            return Observation(Witness(
                request=request, observed=(covering, covered), expected=(covered,),
                note="first policy does not match the second",
            ))
        if self.mutual and covering.is_applicable and covering is not covered:
            return Observation(Witness(
                request=request, observed=(covering, covered), expected=(covering,),
                note="second policy does not match the first",
            ))
        return _OK


# -----------------------------------------------------
# ✅ Partial results
# -----------------------------------------------------
def _key(witness: Witness) -> str:
    if witness.is_spec_defect:
        return SPEC_DEFECT
    return "/".join(decision.value for decision in witness.observed)


@dataclass
class Partial:
    """Result of scanning one slice of the request space"""
    limit: int
    examined: int = 0
    violations: int = 0
    by_decision: Counter = field(default_factory=Counter)
    absent_warnings: int = 0
    spec_defects: int = 0
    witnesses: List[Witness] = field(default_factory=list)
    seen_keys: set = field(default_factory=set)

    def retain(self, witness: Witness) -> None:
        """Keep the first `limit` witnesses and the first of every distinct observation"""
        key = _key(witness)
        if len(self.witnesses) < self.limit or key not in self.seen_keys:
            self.witnesses.append(witness)
        self.seen_keys.add(key)

    def observe(self, observation: Observation) -> None:
        self.examined += 1
        if observation.absent_constraint:
            self.absent_warnings += 1
        witness = observation.witness
        if witness is None:
            return
        self.violations += 1
        self.by_decision[_key(witness)] += 1
        if witness.is_spec_defect:
            self.spec_defects += 1
        self.retain(witness)


def merge(left: Partial, right: Partial) -> Partial:
    """Associative merge of two consecutive slices"""
    merged = Partial(limit=left.limit)
    merged.examined = left.examined + right.examined
    merged.violations = left.violations + right.violations
    merged.by_decision = left.by_decision + right.by_decision
    merged.absent_warnings = left.absent_warnings + right.absent_warnings
    merged.spec_defects = left.spec_defects + right.spec_defects
    for witness in left.witnesses + right.witnesses:
        merged.retain(witness)
    return merged


def scan(inspector, domain: DomainSpec, limit: int, start: int = 0, stop: Optional[int] = None) -> Partial:
    partial = Partial(limit=limit)
    # the cap was checked by the caller
    for request in enumerate_requests(domain, cap=domain.request_count(), start=start, stop=stop):
        partial.observe(inspector(request))
    return partial


def _scan_slice(args) -> Partial:
    inspector, domain, limit, start, stop = args
    return scan(inspector, domain, limit, start, stop)


def run_check(
    prop: Property,
    inspector,
    domain: DomainSpec,
    *,
    cap: Optional[int] = None,
    witness_limit: Optional[int] = None,
    jobs: Optional[int] = None,
    subject: str = "",
) -> CheckReport:
    limit = settings.WITNESS_LIMIT if witness_limit is None else witness_limit
    jobs = settings.JOBS if jobs is None else jobs
    total = check_cap(domain, cap)

    logger.info("Check started", extra={"component": "analysis", "property": prop.value, "requests": total})
    with CheckTimer(prop.value) as timer:
        if jobs > 1 and total >= _PARALLEL_THRESHOLD:
            size = -(-total // (jobs * 4))
            slices = [(inspector, domain, limit, start, min(start + size, total)) for start in range(0, total, size)]
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                partial = reduce(merge, pool.map(_scan_slice, slices))
        else:
            partial = scan(inspector, domain, limit)

    holds = partial.violations == 0
    MetricsCollector.record_check(prop.value, holds, partial.examined, timer.elapsed)
    logger.info(
        "Check finished",
        extra={
            "component": "analysis",
            "property": prop.value,
            "verdict": "holds" if holds else "violated",
            "requests": partial.examined,
            "duration_ms": round(timer.elapsed * 1000, 2),
        },
    )
    if partial.absent_warnings:
        logger.warning(
            "Set constraint evaluated to absent; requests counted as non-members",
            extra={"component": "analysis", "property": prop.value, "requests": partial.absent_warnings},
        )

    return CheckReport(
        property=prop,
        holds=holds,
        witnesses=tuple(partial.witnesses),
        statistics=CheckStatistics(
            requests_examined=partial.examined,
            elapsed_seconds=timer.elapsed,
            violations=partial.violations,
            violations_by_decision=dict(sorted(partial.by_decision.items())),
            absent_constraint_warnings=partial.absent_warnings,
            spec_defects=partial.spec_defects,
        ),
        subject=subject,
    )


# -----------------------------------------------------
# ✅ Child paths for redundancy
# -----------------------------------------------------
def _children(container: Container) -> Tuple[Policy, ...]:
    return container.policies if isinstance(container, Pdp) else container.children


def parse_child_path(text: str) -> ChildPath:
    """`0.1` is child 1 of child 0"""
    try:
        path = tuple(int(part) for part in text.split("."))
    except ValueError:
        raise UsageError(f"invalid child path {text!r}; expected indices like 0 or 0.1") from None
    if any(index < 0 for index in path):
        raise UsageError(f"invalid child path {text!r}; indices are non-negative")
    return path


def _validate_path(container: Container, path: ChildPath) -> None:
    if not path:
        raise UsageError("empty child path")
    node: Union[Container, Policy] = container
    for depth, index in enumerate(path):
        if not isinstance(node, (Pdp, PolicySet)):
            raise UsageError(f"child path {_show(path[:depth])} is a rule and has no children")
        children = _children(node)
        if not 0 <= index < len(children):
            raise UsageError(f"child index {index} out of range at {_show(path[:depth]) or 'top level'}")
        if depth == len(path) - 1 and len(children) < 2:
            raise UsageError("cannot remove the only child of a policy set")
        node = children[index]


def _show(path: ChildPath) -> str:
    return ".".join(str(index) for index in path)


def remove_child(container: Container, path: ChildPath) -> Container:
    """Copy of the container without the child at `path`"""
    _validate_path(container, path)
    index, rest = path[0], path[1:]
    children = list(_children(container))
    if rest:
        children[index] = remove_child(children[index], rest)
    else:
        del children[index]
    if isinstance(container, Pdp):
        return Pdp(alg=container.alg, policies=tuple(children))
    return PolicySet(alg=container.alg, target=container.target, children=tuple(children))


def _decide_with_and_without(
    container: Container, path: ChildPath, request: Request, config: EngineConfig,
) -> Tuple[Decision, Decision]:
    """Both decisions from one evaluation of every child"""
    if isinstance(container, PolicySet):
        outcome = target_outcome(eval_expr(container.effective_target, request, config))
        if outcome == "no-match":
            return Decision.NOT_APPLICABLE, Decision.NOT_APPLICABLE
        if outcome == "error":
            return Decision.INDETERMINATE, Decision.INDETERMINATE
    children = _children(container)
    index, rest = path[0], path[1:]
    decisions = [eval_policy(child, request, config) for child in children[:index]]
    after = [eval_policy(child, request, config) for child in children[index + 1:]]
    if rest:
        with_child, without_child = _decide_with_and_without(children[index], rest, request, config)
        return (
            combine(container.alg, decisions + [with_child] + after),
            combine(container.alg, decisions + [without_child] + after),
        )
    removed = eval_policy(children[index], request, config)
    return combine(container.alg, decisions + [removed] + after), combine(container.alg, decisions + after)


# -----------------------------------------------------
# ✅ Public checks
# -----------------------------------------------------
def _same_domain(*specs: RequestSetSpec) -> DomainSpec:
    domain = specs[0].domain
    for spec in specs[1:]:
        if spec.domain != domain:
            raise UsageError("request sets must share one domain")
    return domain


def check_enforcement(
    subject: Subject,
    permit_set: RequestSetSpec,
    deny_set: RequestSetSpec,
    config: EngineConfig = EMPTY_CONFIG,
    **options,
) -> CheckReport:
    """Requests in the permit set are permitted and requests in the deny set are denied"""
    domain = _same_domain(permit_set, deny_set)
    inspector = EnforcementInspector(subject, permit_set.constraint, deny_set.constraint, config)
    return run_check(Property.ENFORCEMENT, inspector, domain, **options)


def check_least_privilege(
    subject: Subject, permit_set: RequestSetSpec, config: EngineConfig = EMPTY_CONFIG, **options,
) -> CheckReport:
    """Exactly the permit set is permitted; every other request is denied"""
    inspector = EnforcementInspector(subject, permit_set.constraint, None, config)
    return run_check(Property.LEAST_PRIVILEGE, inspector, permit_set.domain, **options)


def check_completeness(
    subject: Subject, domain: DomainSpec, config: EngineConfig = EMPTY_CONFIG, *, strict: bool = False, **options,
) -> CheckReport:
    return run_check(Property.COMPLETENESS, CompletenessInspector(subject, config, strict), domain, **options)


def check_redundancy(
    container: Container,
    child: Union[int, str, Sequence[int]],
    domain: DomainSpec,
    config: EngineConfig = EMPTY_CONFIG,
    *,
    memoise: bool = False,
    **options,
) -> CheckReport:
    """
    Holds when the child is redundant: removing it never changes the
    container's decision. `child` is an index or a path into nested sets.
    """
    if isinstance(child, int):
        path: ChildPath = (child,)
    elif isinstance(child, str):
        path = parse_child_path(child)
    else:
        path = tuple(child)
    if not isinstance(container, (Pdp, PolicySet)):
        raise UsageError("redundancy is checked on a policy set or a PDP")
    reduced = remove_child(container, path)
    inspector = RedundancyInspector(container, path, config, memoise, None if memoise else reduced)
    return run_check(Property.REDUNDANCY, inspector, domain, **options)


def check_disjointness(
    first: Subject, second: Subject, domain: DomainSpec, config: EngineConfig = EMPTY_CONFIG, **options,
) -> CheckReport:
    """No request is decided (permit or deny) by both policies"""
    return run_check(Property.DISJOINTNESS, DisjointnessInspector(first, second, config), domain, **options)


def check_coverage(
    covering: Subject, covered: Subject, requests: RequestSetSpec, config: EngineConfig = EMPTY_CONFIG, **options,
) -> CheckReport:
    """Wherever the second policy decides, the first returns the same decision"""
    inspector = CoverageInspector(covering, covered, requests.constraint, config)
    return run_check(Property.COVERAGE, inspector, requests.domain, **options)


def check_mutual_coverage(
    first: Subject, second: Subject, requests: RequestSetSpec, config: EngineConfig = EMPTY_CONFIG, **options,
) -> CheckReport:
    """Coverage in both directions"""
    inspector = CoverageInspector(first, second, requests.constraint, config, mutual=True)
    return run_check(Property.COVERAGE, inspector, requests.domain, **options)
