"""
Tests for the external solver bridge: a stub solver script, and z3 when installed
"""
from fractions import Fraction

import pytest

from facpl.core.errors import SolverError
from facpl.evaluation import evaluate
from facpl.models import AttrName, Decision
from facpl.smt import Completeness, Disjointness, Reach, emit_smtlib, encode, solve
from facpl.smt.solver import read_model, split_verdict
from tests.conftest import requires_z3

# loan.dom strings are coded by universe position: clerk2=1, assistant=0, loanDoc=0, read=0.
# z3 lists its own helper definitions next to the declared symbols.
LOAN_MODEL = """sat
(
  (define-fun |f:0| () Bool (and has.subject/id (= str.subject/id 1)))
  (define-fun str.subject/id () Int 1)
  (define-fun has.subject/id () Bool true)
  (define-fun str.subject/role () Int 0)
  (define-fun has.subject/role () Bool true)
  (define-fun |f:1| () Bool (not |f:0|))
  (define-fun str.resource/id () Int 0)
  (define-fun has.resource/id () Bool true)
  (define-fun str.action/id () Int 0)
  (define-fun has.action/id () Bool true)
)
"""

AMOUNT_SCRIPT = """(set-logic QF_LIRA)
(declare-fun real.env/amount () Real)
(declare-fun date.env/day () Int)
(declare-fun has.env/day () Bool)
(check-sat)
(get-model)
"""


def stub_solver(tmp_path, output: str, name: str = "stub.sh") -> str:
    """A solver command that swallows the script and prints `output`"""
    script = tmp_path / name
    script.write_text(f"cat > /dev/null\ncat <<'EOF'\n{output}EOF\n")
    return f"sh {script}"


# -----------------------------------------------------
# ✅ Reading solver output
# -----------------------------------------------------
def test_split_verdict():
    assert split_verdict("sat\n((define-fun x () Int 0))\n") == ("sat", "((define-fun x () Int 0))")
    assert split_verdict('(error "line 3")\nunsat\n') == ("unsat", "")
    assert split_verdict('(error "unknown logic")\n')[0] is None


def test_read_model_keeps_declared_literals():
    model = read_model(AMOUNT_SCRIPT, (
        "((define-fun real.env/amount () Real (- (/ 1.0 10.0)))"
        " (define-fun date.env/day () Int 738886)"
        " (define-fun has.env/day () Bool false)"
        " (define-fun |f:3| () Bool (not has.env/day))"
        " (define-fun other () Int (- 5)))"
    ))
    assert model == {"real.env/amount": Fraction(-1, 10), "date.env/day": 738886, "has.env/day": False}


def test_read_model_accepts_a_model_head():
    model = read_model(AMOUNT_SCRIPT, "(model (define-fun date.env/day () Int (- 3)))")
    assert model == {"date.env/day": -3}
    assert read_model(AMOUNT_SCRIPT, "()") == {}


def test_read_model_rejects_symbolic_values():
    with pytest.raises(SolverError, match="non-literal"):
        read_model(AMOUNT_SCRIPT, "((define-fun date.env/day () Int (+ date.env/day 1)))")


# -----------------------------------------------------
# ✅ Running a solver process
# -----------------------------------------------------
def test_stub_solver_sat_gives_a_witness(tmp_path, policy, loan_domain):
    formulas = encode(policy("loan_doc.facpl"), loan_domain)
    script = emit_smtlib(formulas, Reach(Decision.PERMIT))
    result = solve(script, solver=stub_solver(tmp_path, LOAN_MODEL), formulas=formulas)
    assert result.verdict == "sat"
    assert set(result.model) == {symbol.symbol_name() for symbol in formulas.vocabulary.declarations()}
    assert result.request.lookup(AttrName.parse("subject/id")) == "clerk2"
    assert result.request.lookup(AttrName.parse("subject/role")) == "assistant"
    assert result.request.lookup(AttrName.parse("action/id")) == "read"
    assert evaluate(policy("loan_doc.facpl"), result.request) is Decision.PERMIT


def test_stub_solver_unsat(tmp_path):
    result = solve("(check-sat)\n", solver=stub_solver(tmp_path, "unsat\n(error \"model is not available\")\n"))
    assert result.verdict == "unsat"
    assert result.request is None and result.model == {}


def test_solver_failures(tmp_path):
    with pytest.raises(SolverError, match="not found"):
        solve("(check-sat)\n", solver="facpl-no-such-solver-binary")
    with pytest.raises(SolverError, match="timed out"):
        solve("(check-sat)\n", solver="sleep 5", timeout=0.2)
    with pytest.raises(SolverError, match="no verdict"):
        solve("(check-sat)\n", solver=stub_solver(tmp_path, '(error "unknown logic")\n'))


# -----------------------------------------------------
# ✅ z3
# -----------------------------------------------------
@requires_z3
def test_z3_completeness_verdicts(policy, banking_domain, banking_config):
    for name, complete in (("policyA.facpl", False), ("policyC.facpl", True)):
        formulas = encode(policy(name), banking_domain, banking_config)
        result = solve(emit_smtlib(formulas, Completeness()), solver="z3 -in", formulas=formulas)
        assert result.verdict == ("unsat" if complete else "sat")
        if not complete:
            assert evaluate(policy(name), result.request, banking_config) is Decision.NOT_APPLICABLE


@requires_z3
def test_z3_disjointness(policy, banking_domain, banking_config):
    read = encode(policy("read_rule.facpl"), banking_domain, banking_config)
    write = encode(policy("write_rule.facpl"), banking_domain, banking_config)
    assert solve(emit_smtlib(read, Disjointness(write)), solver="z3 -in").verdict == "unsat"
    assert solve(emit_smtlib(read, Disjointness(read)), solver="z3 -in").verdict == "sat"


@requires_z3
def test_z3_reach_witnesses_replay(policy, banking_domain, banking_config):
    subject = policy("policyB.facpl")
    formulas = encode(subject, banking_domain, banking_config)
    for decision in (Decision.PERMIT, Decision.DENY, Decision.NOT_APPLICABLE):
        result = solve(emit_smtlib(formulas, Reach(decision)), solver="z3 -in", formulas=formulas)
        assert result.verdict == "sat"
        assert evaluate(subject, result.request, banking_config) is decision
    assert solve(emit_smtlib(formulas, Reach(Decision.INDETERMINATE)), solver="z3 -in").verdict == "unsat"
