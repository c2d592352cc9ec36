"""
Command-line front end: `facpl eval|check|encode|case-study`.

Exit status: 0 success / property holds, 1 property violated, 2 input
error, 3 resource error (enumeration cap, solver failure).
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import click

from facpl import settings
from facpl.analysis.checks import (
    check_completeness, check_coverage, check_disjointness, check_enforcement, check_least_privilege,
    check_mutual_coverage, check_redundancy,
)
from facpl.analysis.properties import lookup_property
from facpl.analysis.rendering import render_text, render_tsv
from facpl.casestudy import render_case_study, run_case_study
from facpl.core.errors import (
    EncodingError, EnumerationLimitError, FacplError, SolverError, SourceError, UsageError,
)
from facpl.core.logger import setup_logging
from facpl.core.metrics import MetricsCollector
from facpl.data.loader import (
    load_config, load_domain, load_policy, load_request, load_request_set, request_set_config,
)
from facpl.evaluation.policies import evaluate
from facpl.models.config import EMPTY_CONFIG, EngineConfig
from facpl.models.domains import DomainSpec, RequestSetSpec
from facpl.models.policies import TRUE, Decision
from facpl.models.reports import CheckReport
from facpl.parsing.printer import format_request
from facpl.smt.encoder import encode, encode_constraint
from facpl.smt.formulas import TRUE as TRUE_FORMULA
from facpl.smt.smtlib import Coverage, Disjointness, Enforcement, emit_smtlib, parse_query
from facpl.smt.solver import solve

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

_EXTENSIONS = {".facpl": "policies", ".req": "requests", ".dom": "domains", ".cfg": "configs", ".spec": "specs"}


@dataclass
class Options:
    config_path: Optional[str] = None
    cap: Optional[int] = None
    witnesses: Optional[int] = None
    fmt: str = "text"
    jobs: Optional[int] = None

    @property
    def check_options(self) -> dict:
        return {"cap": self.cap, "witness_limit": self.witnesses, "jobs": self.jobs}


@dataclass
class Inputs:
    """Positional files sorted by extension"""
    policies: List[str] = field(default_factory=list)
    requests: List[str] = field(default_factory=list)
    domains: List[str] = field(default_factory=list)
    configs: List[str] = field(default_factory=list)
    specs: List[str] = field(default_factory=list)

    @classmethod
    def classify(cls, paths) -> "Inputs":
        inputs = cls()
        for path in paths:
            kind = _EXTENSIONS.get(Path(path).suffix)
            if kind is None:
                known = ", ".join(sorted(_EXTENSIONS))
                raise UsageError(f"cannot tell what {path} is; expected one of {known}")
            getattr(inputs, kind).append(path)
        return inputs

    def single(self, kind: str, what: str, required: bool = True) -> Optional[str]:
        found = getattr(self, kind)
        if len(found) > 1:
            raise UsageError(f"expected one {what}, got {len(found)}")
        if not found:
            if required:
                raise UsageError(f"missing {what}")
            return None
        return found[0]


def handle_errors(command):
    """Map engine errors to exit statuses"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except (SourceError, UsageError, EncodingError) as exc:
            code = EXIT_INPUT
            error = exc
        except (EnumerationLimitError, SolverError) as exc:
            code = EXIT_RESOURCE
            error = exc
        except FacplError as exc:
            code = EXIT_INPUT
            error = exc
        MetricsCollector.record_error(type(error).__name__, f"cli:{ctx.info_name}")
        logger.error(str(error), extra={"component": "cli", "error_type": type(error).__name__})
        click.echo(f"error: {error}", err=True)
        ctx.exit(code)

    return wrapper


def _resolve_config(options: Options, inputs: Optional[Inputs] = None, specs: Sequence[str] = ()) -> EngineConfig:
    """
    --config, then a positional .cfg, then the `config:` line of the request-set
    files, then FACPL_CONFIG, else the empty configuration
    """
    path = options.config_path
    if path is None and inputs is not None:
        path = inputs.single("configs", "configuration file (.cfg)", required=False)
    if path is None:
        named = sorted({str(found) for found in map(request_set_config, specs) if found is not None})
        if len(named) > 1:
            raise UsageError(f"request-set files name different configurations: {', '.join(named)}")
        path = named[0] if named else None
    if path is None:
        path = settings.CONFIG_FILE
    return load_config(path) if path else EMPTY_CONFIG


def _emit_report(report: CheckReport, options: Options) -> int:
    render = render_tsv if options.fmt == "tsv" else render_text
    click.echo(render(report), nl=False)
    return EXIT_OK if report.holds else EXIT_VIOLATED


# -----------------------------------------------------
# ✅ Command group
# -----------------------------------------------------
@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="Engine configuration (levels and roles).")
@click.option("--cap", type=click.IntRange(min=1), default=None, help="Maximum request-space size.")
@click.option("--witnesses", type=click.IntRange(min=0), default=None, help="Witnesses kept per report.")
@click.option("--format", "fmt", type=click.Choice(["text", "tsv"]), default="text", show_default=True)
@click.option("--log-level", default=settings.LOG_LEVEL, show_default=True,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
@click.option("--metrics-out", type=click.Path(dir_okay=False), default=None,
              help="Write Prometheus metrics to this file on exit.")
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes for checks.")
@click.pass_context
def cli(ctx, config_path, cap, witnesses, fmt, log_level, metrics_out, jobs):
    """Evaluate and verify FACPL access-control policies."""
    setup_logging(level=log_level, json_format=settings.LOG_JSON)
    ctx.obj = Options(config_path=config_path, cap=cap, witnesses=witnesses, fmt=fmt, jobs=jobs)
    if metrics_out:
        ctx.call_on_close(lambda: MetricsCollector.write_textfile(metrics_out))


# -----------------------------------------------------
# ✅ eval
# -----------------------------------------------------
@cli.command("eval")
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@handle_errors
def cmd_eval(options: Options, files):
    """Decide a request: POLICY.facpl REQUEST.req [CONFIG.cfg]"""
    inputs = Inputs.classify(files)
    policy = load_policy(inputs.single("policies", "policy file (.facpl)"))
    request = load_request(inputs.single("requests", "request file (.req)"))
    config = _resolve_config(options, inputs)

    decision = evaluate(policy, request, config)
    MetricsCollector.record_decision(decision.value)
    logger.info("Request evaluated", extra={"component": "eval", "decision": decision.value})
    click.echo(decision.value)


# -----------------------------------------------------
# ✅ check
# -----------------------------------------------------
PROPERTIES = ["complete", "redundant", "disjoint", "covers", "enforce", "least-privilege"]


def _domain_for(inputs: Inputs, spec_paths: List[str]) -> Optional[DomainSpec]:
    path = inputs.single("domains", "domain file (.dom)", required=False)
    if path is not None:
        return load_domain(path)
    if spec_paths:
        return load_request_set(spec_paths[0]).domain
    return None


def _require_domain(domain: Optional[DomainSpec]) -> DomainSpec:
    if domain is None:
        raise UsageError("missing domain file (.dom)")
    return domain


def _security_sets(options_property, resource, subjects, permit_set, deny_set, domain):
    """(permit, deny) request sets from spec files or a catalogue property"""
    if options_property:
        prop = lookup_property(options_property)
        subject_ids = [s.strip() for s in subjects.split(",") if s.strip()] if subjects else []
        return prop.scoped(resource, subject_ids).request_sets(_require_domain(domain))
    permit = load_request_set(permit_set, domain) if permit_set else None
    deny = load_request_set(deny_set, domain) if deny_set else None
    return permit, deny


@cli.command("check")
@click.argument("prop", metavar="PROPERTY", type=click.Choice(PROPERTIES))
@click.argument("files", nargs=-1, type=click.Path(exists=True, dir_okay=False))
@click.option("--permit-set", type=click.Path(exists=True, dir_okay=False), help="Permit request set (.spec).")
@click.option("--deny-set", type=click.Path(exists=True, dir_okay=False), help="Deny request set (.spec).")
@click.option("--set", "request_set", type=click.Path(exists=True, dir_okay=False),
              help="Request set restricting `covers` (.spec).")
@click.option("--property", "catalogue", default=None, help="Catalogue property, e.g. nru or nru+dac.")
@click.option("--resource", default=None, help="Scope a catalogue property to one resource id.")
@click.option("--subjects", default=None, help="Scope a catalogue property to comma-separated subject ids.")
@click.option("--child", default=None, help="Child index or path (0.1) for `redundant`.")
@click.option("--strict", is_flag=True, help="`complete`: indeterminate also counts as a gap.")
@click.option("--mutual", is_flag=True, help="`covers`: check both directions.")
@click.option("--memoise", is_flag=True, help="`redundant`: evaluate each child once per request.")
@click.pass_obj
@handle_errors
def cmd_check(options: Options, prop, files, permit_set, deny_set, request_set, catalogue, resource,
              subjects, child, strict, mutual, memoise):
    """Check a property: complete | redundant | disjoint | covers | enforce | least-privilege"""
    inputs = Inputs.classify(files)
    specs = [p for p in (permit_set, deny_set, request_set) if p] + inputs.specs
    domain = _domain_for(inputs, specs)
    config = _resolve_config(options, inputs, specs)
    policies = [load_policy(path) for path in inputs.policies]
    run = options.check_options

    def policy_count(count: int):
        if len(policies) != count:
            raise UsageError(f"`{prop}` takes {count} policy file(s), got {len(policies)}")

    if prop == "complete":
        policy_count(1)
        report = check_completeness(policies[0], _require_domain(domain), config, strict=strict, **run)
    elif prop == "redundant":
        policy_count(1)
        if child is None:
            raise UsageError("`redundant` needs --child N")
        report = check_redundancy(policies[0], child, _require_domain(domain), config, memoise=memoise, **run)
    elif prop == "disjoint":
        policy_count(2)
        report = check_disjointness(policies[0], policies[1], _require_domain(domain), config, **run)
    elif prop == "covers":
        policy_count(2)
        if request_set:
            requests = load_request_set(request_set, domain)
        else:
            requests = RequestSetSpec(domain=_require_domain(domain), constraint=TRUE, label="all")
        covers = check_mutual_coverage if mutual else check_coverage
        report = covers(policies[0], policies[1], requests, config, **run)
    elif prop == "enforce":
        policy_count(1)
        permit, deny = _security_sets(catalogue, resource, subjects, permit_set, deny_set, domain)
        if permit is None or deny is None:
            raise UsageError("`enforce` needs --permit-set and --deny-set, or --property")
        report = check_enforcement(policies[0], permit, deny, config, **run)
    else:
        policy_count(1)
        permit, _ = _security_sets(catalogue, resource, subjects, permit_set, None, domain)
        if permit is None:
            raise UsageError("`least-privilege` needs --permit-set or --property")
        report = check_least_privilege(policies[0], permit, config, **run)

    click.get_current_context().exit(_emit_report(report, options))


# -----------------------------------------------------
# ✅ encode
# -----------------------------------------------------
def _build_query(text: str, domain: DomainSpec, config: EngineConfig):
    kind, _, argument = text.partition(":")
    if kind in ("disjoint", "covers") and argument:
        other = encode(load_policy(argument), domain, config, label=argument)
        if kind == "disjoint":
            return Disjointness(other)
        return Coverage(other, TRUE_FORMULA)
    if kind in ("enforce-permit", "enforce-deny") and argument:
        spec = load_request_set(argument, domain)
        decision = Decision.PERMIT if kind == "enforce-permit" else Decision.DENY
        return Enforcement(encode_constraint(spec.constraint, domain, config), decision)
    return parse_query(text)


@cli.command("encode")
@click.argument("policy_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("domain_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("query")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the script to this file.")
@click.option("--solve", "run_solver", is_flag=True, help="Run the solver and print its verdict.")
@click.option("--solver", default=None, help="Solver command (default: FACPL_SMT_SOLVER).")
@click.option("--timeout", type=float, default=None, help="Solver timeout in seconds.")
@click.pass_obj
@handle_errors
def cmd_encode(options: Options, policy_file, domain_file, query, out, run_solver, solver, timeout):
    """Emit an SMT-LIB query: reach:permit|deny|na|indet, complete, disjoint:<file>, covers:<file>, ..."""
    policy = load_policy(policy_file)
    domain = load_domain(domain_file)
    kind, _, argument = query.partition(":")
    specs = [argument] if kind in ("enforce-permit", "enforce-deny") and argument else []
    config = _resolve_config(options, specs=specs)

    formulas = encode(policy, domain, config, label=policy_file)
    script = emit_smtlib(formulas, _build_query(query, domain, config))
    if out:
        Path(out).write_text(script, encoding="utf-8")
    if not run_solver:
        if not out:
            click.echo(script, nl=False)
        return

    result = solve(script, solver=solver, timeout=timeout, formulas=formulas)
    click.echo(result.verdict)
    if result.request is not None:
        click.echo(f"witness: {format_request(result.request)}")
        click.echo(f"decision: {evaluate(policy, result.request, config).value}")


# -----------------------------------------------------
# ✅ case-study
# -----------------------------------------------------
@cli.command("case-study")
@click.pass_obj
@handle_errors
def cmd_casestudy(options: Options):
    """Replay the bundled banking case study (policies A, B and C)"""
    results = run_case_study(**options.check_options)
    click.echo(render_case_study(results, options.fmt), nl=False)
    all_match = all(result.matches for result in results)
    click.get_current_context().exit(EXIT_OK if all_match else EXIT_VIOLATED)


def main():
    cli(prog_name="facpl")


if __name__ == "__main__":
    main()
