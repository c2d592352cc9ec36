"""
Loading policies, requests, domains, configs and request-set specs from
files, and access to the bundled case-study corpus.
"""
from __future__ import annotations

import logging
from importlib import resources
from importlib.abc import Traversable
from pathlib import Path
from typing import Optional, Union

from facpl.core.errors import SourceError, UsageError
from facpl.core.metrics import MetricsCollector
from facpl.models.config import EngineConfig
from facpl.models.domains import DomainSpec, RequestSetSpec
from facpl.models.policies import Pdp, Policy
from facpl.models.requests import Request
from facpl.parsing.parser import (
    parse_config, parse_domain, parse_policy, parse_request, parse_request_set,
)

logger = logging.getLogger(__name__)

Source = Union[str, Path, Traversable]


def bundled(name: str) -> Traversable:
    """A file of the bundled case-study corpus"""
    return resources.files("facpl.data").joinpath("casestudy", name)


def read_source(source: Source) -> bytes:
    try:
        if isinstance(source, (str, Path)):
            return Path(source).read_bytes()
        return source.read_bytes()
    except FileNotFoundError:
        raise UsageError(f"file not found: {source}") from None
    except IsADirectoryError:
        raise UsageError(f"not a file: {source}") from None


def _parsed(source: Source, parse):
    data = read_source(source)
    try:
        return parse(data)
    except SourceError as exc:
        MetricsCollector.record_error("SourceError", "parser")
        logger.warning(
            "Parse failed",
            extra={"component": "parser", "path": str(source), "error_type": "SourceError"},
        )
        raise exc.with_path(str(source)) from None


def load_policy(source: Source) -> Union[Pdp, Policy]:
    return _parsed(source, parse_policy)


def load_request(source: Source) -> Request:
    return _parsed(source, parse_request)


def load_domain(source: Source) -> DomainSpec:
    return _parsed(source, parse_domain)


def load_config(source: Source) -> EngineConfig:
    return _parsed(source, parse_config)


def _beside(source: Source, name: str) -> Source:
    """A file named inside `source`, resolved relative to it"""
    if isinstance(source, (str, Path)):
        return (Path(source).parent / name).resolve()
    return bundled(name)


def load_request_set(source: Source, domain: Optional[DomainSpec] = None) -> RequestSetSpec:
    """
    A `.spec` file. An explicit `domain` wins; otherwise the file's
    `domain:` line is resolved next to the spec file.
    """
    parsed = _parsed(source, parse_request_set)
    if domain is None:
        if parsed.domain_path is None:
            raise UsageError(f"{source}: no domain given and the file names none")
        domain = load_domain(_beside(source, parsed.domain_path))
    return RequestSetSpec(domain=domain, constraint=parsed.constraint, label=_label(source))


def request_set_config(source: Source) -> Optional[Source]:
    """The configuration file a `.spec` file names in its `config:` line, if any"""
    parsed = _parsed(source, parse_request_set)
    if parsed.config_path is None:
        return None
    return _beside(source, parsed.config_path)


def _label(source: Source) -> str:
    name = source.name if hasattr(source, "name") else str(source)
    return name.rsplit(".", 1)[0]
