"""
Report rendering: human-readable text and a line-oriented TSV format.

TSV layout (no timings, so output is byte-stable):

    PROPERTY<TAB>HOLDS<TAB>WITNESS_COUNT
    WITNESS<TAB><request><TAB><observed><TAB><expected>
"""
from __future__ import annotations

from typing import List

from facpl.models.reports import CheckReport, Witness
from facpl.parsing.printer import format_request


def format_decisions(decisions) -> str:
    return ",".join(decision.value for decision in decisions) or "-"


def _request_text(witness: Witness) -> str:
    return format_request(witness.request) or "(empty request)"


def render_tsv(report: CheckReport) -> str:
    lines = [f"{report.property.value}\t{str(report.holds).lower()}\t{len(report.witnesses)}"]
    for witness in report.witnesses:
        lines.append(
            f"WITNESS\t{_request_text(witness)}\t{format_decisions(witness.observed)}\t{format_decisions(witness.expected)}"
        )
    return "\n".join(lines) + "\n"


def render_text(report: CheckReport) -> str:
    stats = report.statistics
    verdict = "HOLDS" if report.holds else "VIOLATED"
    title = f"{report.property.value}"
    if report.subject:
        title += f" [{report.subject}]"
    lines: List[str] = [
        f"{title}: {verdict}",
        f"  requests examined: {stats.requests_examined}",
        f"  elapsed: {stats.elapsed_seconds:.3f}s",
    ]
    if stats.violations:
        lines.append(f"  violations: {stats.violations}")
        for key, count in stats.violations_by_decision.items():
            lines.append(f"    {key}: {count}")
    if stats.absent_constraint_warnings:
        lines.append(f"  warning: {stats.absent_constraint_warnings} request(s) with an absent set constraint")
    if report.witnesses:
        shown = len(report.witnesses)
        lines.append(f"  witnesses ({shown} of {stats.violations}):")
        for witness in report.witnesses:
            lines.append(f"    {_request_text(witness)}")
            if witness.is_spec_defect:
                lines.append(f"      spec defect: {witness.note}")
                continue
            detail = f"      observed {format_decisions(witness.observed)}"
            if witness.expected:
                detail += f", expected {format_decisions(witness.expected)}"
            if witness.note:
                detail += f" ({witness.note})"
            lines.append(detail)
    return "\n".join(lines) + "\n"
