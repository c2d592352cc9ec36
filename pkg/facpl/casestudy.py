"""
End-to-end replay of the banking case study over the bundled fixtures.

Policy A (permit-overrides) leaves nonsecure reads not-applicable, Policy B
(deny-unless-permit) lets a clerk missing from the access list read, and
Policy C (deny-unless-permit over strong-consensus) enforces both
no-read-up and the access list, with least privilege.
"""
from __future__ import annotations

import logging
from typing import Callable, List, Optional

from pydantic import BaseModel

from facpl.analysis.checks import check_enforcement, check_least_privilege
from facpl.analysis.rendering import format_decisions
from facpl.data.loader import bundled, load_config, load_domain, load_policy, load_request_set
from facpl.models.policies import Decision
from facpl.models.reports import CheckReport
from facpl.parsing.printer import format_request

logger = logging.getLogger(__name__)


class CaseResult(BaseModel):
    case: str
    property: str
    holds: bool
    expected_holds: bool
    # a failing check must show a witness with this decision
    expected_witness: Optional[Decision] = None
    report: CheckReport

    @property
    def witness(self):
        if self.expected_witness is None:
            return None
        for witness in self.report.witnesses:
            if self.expected_witness in witness.observed:
                return witness
        return None

    @property
    def matches(self) -> bool:
        if self.holds != self.expected_holds:
            return False
        return self.expected_witness is None or self.witness is not None


def run_case_study(cap: Optional[int] = None, witness_limit: Optional[int] = None, jobs: Optional[int] = None) -> List[CaseResult]:
    options = {"cap": cap, "witness_limit": witness_limit, "jobs": jobs}
    domain = load_domain(bundled("banking.dom"))
    config = load_config(bundled("banking.cfg"))
    policies = {name: load_policy(bundled(f"policy{name}.facpl")) for name in "ABC"}

    def sets(prefix: str):
        return (
            load_request_set(bundled(f"{prefix}_secure.spec"), domain),
            load_request_set(bundled(f"{prefix}_nonsecure.spec"), domain),
        )

    nru_permit, nru_deny = sets("nru")
    both_permit, both_deny = sets("nru_dac")

    plan: List[tuple] = [
        ("A", "no-read-up", False, Decision.NOT_APPLICABLE,
         lambda: check_enforcement(policies["A"], nru_permit, nru_deny, config, **options)),
        ("B", "no-read-up+dac", False, Decision.PERMIT,
         lambda: check_enforcement(policies["B"], both_permit, both_deny, config, **options)),
        ("C", "no-read-up+dac", True, None,
         lambda: check_enforcement(policies["C"], both_permit, both_deny, config, **options)),
        ("C", "least-privilege", True, None,
         lambda: check_least_privilege(policies["C"], both_permit, config, **options)),
    ]
    results = []
    for case, prop, expected, witness, run in plan:
        report: CheckReport = run()
        results.append(CaseResult(
            case=case, property=prop, holds=report.holds, expected_holds=expected,
            expected_witness=witness, report=report,
        ))
        logger.info(
            f"Case {case} checked",
            extra={"component": "casestudy", "property": prop, "verdict": "holds" if report.holds else "violated"},
        )
    return results


def render_case_text(result: CaseResult) -> str:
    verdict = "HOLDS" if result.holds else "FAILS"
    line = f"{result.case}: {result.property} {verdict}"
    witness = result.witness
    if witness is not None:
        line += f" ({format_decisions(witness.observed)} witness: {format_request(witness.request)})"
    if not result.matches:
        line += " [UNEXPECTED]"
    return line


def render_case_tsv(result: CaseResult) -> str:
    def verdict(holds: bool) -> str:
        return "holds" if holds else "fails"

    return "\t".join([
        result.case, result.property, verdict(result.holds), verdict(result.expected_holds),
        "yes" if result.matches else "no",
    ])


RENDERERS: dict = {"text": render_case_text, "tsv": render_case_tsv}


def render_case_study(results: List[CaseResult], fmt: str = "text") -> str:
    render: Callable[[CaseResult], str] = RENDERERS[fmt]
    lines = [render(result) for result in results]
    if fmt == "tsv":
        lines.insert(0, "case\tproperty\tverdict\texpected\tmatch")
    return "\n".join(lines) + "\n"
