"""
Runs an external SMT-LIB 2 solver on a script (via standard input) and
reads back its verdict and model.
"""
from __future__ import annotations

import logging
import shlex
import subprocess
import time
from io import StringIO
from typing import Any, Dict, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict
from pysmt.exceptions import PysmtException
from pysmt.smtlib import commands as smtcmd
from pysmt.smtlib.parser import SmtLibParser

from facpl import settings
from facpl.core.errors import SolverError
from facpl.core.metrics import MetricsCollector
from facpl.models.requests import Request
from facpl.smt.encoder import DecisionFormulas

logger = logging.getLogger(__name__)

Verdict = Literal["sat", "unsat", "unknown"]
VERDICTS = ("sat", "unsat", "unknown")


class SolverResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    verdict: Verdict
    model: Dict[str, Any] = {}
    request: Optional[Request] = None
    output: str = ""
    elapsed_seconds: float = 0.0


# -----------------------------------------------------
# ✅ Solver output
# -----------------------------------------------------
def split_verdict(output: str) -> Tuple[Optional[str], str]:
    """The first `sat` / `unsat` / `unknown` line and the text after it"""
    lines = output.splitlines()
    for index, line in enumerate(lines):
        if line.strip() in VERDICTS:
            return line.strip(), "\n".join(lines[index + 1:])
    return None, output


def read_model(script: str, text: str) -> Dict[str, Any]:
    """
    Values of the script's declared symbols in a `get-model` response,
    keyed by symbol name. Solvers may list helper definitions of their own
    next to the declared symbols; those are parsed and skipped.
    """
    declarations = "\n".join(line for line in script.splitlines() if line.startswith(f"({smtcmd.DECLARE_FUN} "))
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1].strip()
    if body.startswith("model"):
        body = body[len("model"):]

    parser = SmtLibParser()
    model: Dict[str, Any] = {}
    try:
        declared = {cmd.args[0].symbol_name() for cmd in parser.get_script(StringIO(declarations)).commands}
        for command in parser.get_command_generator(StringIO(body)):
            if command.name != smtcmd.DEFINE_FUN:
                continue
            name, params, _, value = command.args
            if name not in declared or params:
                continue
            value = value.simplify()
            if not value.is_constant():
                raise SolverError(f"model gives {name} a non-literal value")
            model[name] = value.constant_value()
    except PysmtException as exc:
        raise SolverError(f"unreadable model in solver output: {exc}") from None
    return model


# -----------------------------------------------------
# ✅ Solver process
# -----------------------------------------------------
def solve(
    script: str,
    solver: Optional[str] = None,
    timeout: Optional[float] = None,
    formulas: Optional[DecisionFormulas] = None,
) -> SolverResult:
    """
    Run the solver command (shell-split, script on stdin). With `formulas`,
    a sat model is turned into a witness request of their domain.
    """
    command = shlex.split(solver or settings.SMT_SOLVER)
    timeout = settings.SOLVER_TIMEOUT if timeout is None else timeout
    if not command:
        raise SolverError("no solver command configured")

    start = time.perf_counter()
    try:
        completed = subprocess.run(
            command, input=script, capture_output=True, text=True, timeout=timeout, check=False,
        )
    except FileNotFoundError:
        MetricsCollector.record_error("SolverNotFound", "solver")
        raise SolverError(f"solver not found: {command[0]}") from None
    except subprocess.TimeoutExpired:
        MetricsCollector.record_error("SolverTimeout", "solver")
        raise SolverError(f"solver timed out after {timeout}s") from None
    except OSError as exc:
        MetricsCollector.record_error(type(exc).__name__, "solver")
        raise SolverError(f"cannot run solver {command[0]}: {exc}") from None
    elapsed = time.perf_counter() - start

    verdict, rest = split_verdict(completed.stdout)
    if verdict is None:
        detail = (completed.stderr or completed.stdout).strip().splitlines()
        logger.error(
            "Solver gave no verdict",
            extra={"component": "solver", "error_type": "SolverError", "duration_ms": round(elapsed * 1000, 2)},
        )
        MetricsCollector.record_error("SolverError", "solver")
        raise SolverError("solver gave no verdict" + (f": {detail[0]}" if detail else ""))

    model: Dict[str, Any] = {}
    request = None
    if verdict == "sat":
        model = read_model(script, rest)
        if formulas is not None:
            request = formulas.request_of(model)

    MetricsCollector.record_solver_call(verdict, elapsed)
    logger.info(
        "Solver finished",
        extra={"component": "solver", "verdict": verdict, "duration_ms": round(elapsed * 1000, 2)},
    )
    return SolverResult(
        verdict=verdict, model=model, request=request, output=completed.stdout, elapsed_seconds=elapsed,
    )
