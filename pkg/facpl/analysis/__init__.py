from facpl.analysis.checks import (
    check_completeness,
    check_coverage,
    check_disjointness,
    check_enforcement,
    check_least_privilege,
    check_mutual_coverage,
    check_redundancy,
    membership,
    parse_child_path,
    remove_child,
)
from facpl.analysis.enumerator import check_cap, enumerate_requests
from facpl.analysis.properties import CATALOGUE, SecurityProperty, conjunction, lookup_property
from facpl.analysis.rendering import render_text, render_tsv

__all__ = [
    "check_completeness", "check_coverage", "check_disjointness", "check_enforcement",
    "check_least_privilege", "check_mutual_coverage", "check_redundancy", "membership",
    "parse_child_path", "remove_child", "check_cap", "enumerate_requests", "CATALOGUE",
    "SecurityProperty", "conjunction", "lookup_property", "render_text", "render_tsv",
]
