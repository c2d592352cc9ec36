"""
Exhaustive enumeration of the request space of a finite domain.
"""
from __future__ import annotations

import logging
from itertools import islice, product
from typing import Iterator, Optional

from facpl import settings
from facpl.core.errors import EnumerationLimitError
from facpl.models.domains import DomainSpec
from facpl.models.requests import Request
from facpl.models.values import ABSENT

logger = logging.getLogger(__name__)


def check_cap(domain: DomainSpec, cap: Optional[int] = None) -> int:
    """Size of the request space; raises when it exceeds the cap"""
    cap = settings.ENUMERATION_CAP if cap is None else cap
    total = domain.request_count()
    if total > cap:
        factors = " x ".join(f"{a.name}:{a.option_count}" for a in domain.attributes)
        logger.warning(
            "Request space above cap",
            extra={"component": "enumerator", "requests": total, "error_type": "EnumerationLimitError"},
        )
        raise EnumerationLimitError(total, cap, factors)
    return total


def enumerate_requests(
    domain: DomainSpec,
    cap: Optional[int] = None,
    start: int = 0,
    stop: Optional[int] = None,
) -> Iterator[Request]:
    """
    Every request of the domain in lexicographic order: attributes vary in
    declaration order (last fastest), options in universe order, set kinds
    by subset size then position, ABSENT last. `start`/`stop` select a
    contiguous slice of that order.
    """
    check_cap(domain, cap)
    names = domain.names()
    options = [attribute.options() for attribute in domain.attributes]
    for combo in islice(product(*options), start, stop):
        bindings = {name: option for name, option in zip(names, combo) if option is not ABSENT}
        # values come from a validated domain
        yield Request.model_construct(bindings=bindings)
