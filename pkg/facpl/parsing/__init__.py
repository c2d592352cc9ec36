from facpl.parsing.parser import (
    MAX_DEPTH,
    RequestSetSource,
    parse_config,
    parse_domain,
    parse_expr,
    parse_policy,
    parse_request,
    parse_request_set,
)
from facpl.parsing.printer import format_domain, format_expr, format_policy, format_request, format_value

__all__ = [
    "MAX_DEPTH", "RequestSetSource", "parse_config", "parse_domain", "parse_expr", "parse_policy",
    "parse_request", "parse_request_set", "format_domain", "format_expr", "format_policy",
    "format_request", "format_value",
]
