"""
Tests for expression and policy evaluation
"""
import random
from datetime import date

import pytest

from facpl.data.loader import bundled, load_request
from facpl.evaluation import apply_operator, eval_expr, evaluate, is_error
from facpl.models import (
    ABSENT, EMPTY_CONFIG, AttrName, CombAlg, Decision, Effect, EngineConfig, Operator, PolicySet, Request, Rule,
)
from facpl.models.values import ExprError
from facpl.parsing import parse_expr, parse_policy, parse_request
from tests.generators import gen_any, gen_request, gen_subject

CONFIG = EngineConfig.from_relations([("L1", "L2"), ("L2", "L3")], [("officier", "assistant")])


def value_of(text: str, request: str = "", config: EngineConfig = CONFIG):
    return eval_expr(parse_expr(text), parse_request(request), config)


# -----------------------------------------------------
# ✅ Boolean connectives
# -----------------------------------------------------
@pytest.mark.parametrize(
    "text, expected",
    [
        ("and(true, true)", True),
        ("and(true, false)", False),
        ("and(false, x/missing)", False),
        ("and(true, x/missing)", ABSENT),
        ("or(x/missing, true)", True),
        ("or(false, x/missing)", ABSENT),
        ("or(false, false)", False),
        ("not(x/missing)", ABSENT),
        ("not(false)", True),
    ],
)
def test_kleene_connectives(text, expected):
    assert value_of(text) is expected


def test_errors_dominate_connectives():
    assert is_error(value_of("and(false, divide(1.0, 0.0))"))
    assert is_error(value_of("or(true, not(1.0))"))
    assert is_error(value_of('and(false, "yes")'))
    assert is_error(value_of('and(false, {"a"})'))


# -----------------------------------------------------
# ✅ Strict operators
# -----------------------------------------------------
def test_absent_propagates_through_strict_operators():
    for text in ('equal(x/missing, "a")', "add(1.0, x/missing)", 'in("a", x/missing)', "leq(x/missing, \"L1\")"):
        assert value_of(text) is ABSENT


def test_error_wins_over_absent():
    assert is_error(value_of("add(x/missing, divide(1.0, 0.0))"))


def test_equal_and_in():
    assert value_of('equal("a", "a")') is True
    assert value_of('equal({"a", "b"}, {"b", "a"})') is True
    assert is_error(value_of('equal("a", 1.0)'))
    assert is_error(value_of('equal("a", {"a"})'))
    assert value_of('in("a", {"a", "b"})') is True
    assert value_of('in("c", {"a", "b"})') is False
    # a plain value on the right behaves as a singleton
    assert value_of('in("a", "a")') is True
    assert is_error(value_of('in({"a"}, {"a"})'))
    assert is_error(value_of('in(1.0, {"a"})'))


def test_in_with_request_set():
    assert value_of('in("officier", subject/role)', "(subject/role, assistant) (subject/role, officier)") is True
    assert value_of('in("clerk", subject/role)', "(subject/role, assistant)") is False


def test_greater_than():
    assert value_of("greater-than(2.0, 1.0)") is True
    assert value_of("greater-than(2024-01-02, 2024-01-01)") is True
    assert is_error(value_of('greater-than("b", "a")'))
    assert is_error(value_of("greater-than(2024-01-02, 1.0)"))
    assert is_error(value_of("greater-than(true, false)"))


def test_arithmetic():
    assert value_of("add(1.5, 2.0)") == 3.5
    assert value_of("subtract(1.5, 2.0)") == -0.5
    assert value_of("multiply(1.5, 2.0)") == 3.0
    assert value_of("divide(3.0, 2.0)") == 1.5
    assert value_of("divide(1.0, 0.0)") == ExprError("division by zero")
    assert is_error(value_of("multiply(1e308, 1e308)"))
    assert is_error(value_of('add("1", 1.0)'))


def test_leq_uses_the_level_order():
    assert value_of('leq("L1", "L3")') is True
    assert value_of('leq("L3", "L1")') is False
    assert is_error(value_of('leq("L1", "L9")'))
    assert is_error(value_of('leq("L1", "L2")', config=EMPTY_CONFIG))
    assert is_error(value_of('leq(1.0, "L2")'))


def test_sub_role_uses_the_role_hierarchy():
    assert value_of('sub-role("officier", "assistant")') is True
    assert value_of('sub-role("assistant", "officier")') is False
    assert value_of('sub-role(subject/role, "assistant")', "(subject/role, {officier})") is True
    assert is_error(value_of('sub-role(subject/role, "assistant")', "(subject/role, clerk)"))
    assert is_error(value_of('sub-role("officier", {"assistant"})'))


def test_apply_operator_directly():
    assert apply_operator(Operator.ADD, [1.0, 2.0]) == 3.0
    assert apply_operator(Operator.AND, [True, ABSENT]) is ABSENT
    assert is_error(apply_operator(Operator.NOT, [ExprError("boom")]))


# -----------------------------------------------------
# ✅ Policies
# -----------------------------------------------------
def test_loan_document_walkthrough():
    policy = parse_policy(bundled("loan_doc.facpl").read_bytes())
    request = load_request(bundled("loan_doc.req"))
    assert evaluate(policy, request) is Decision.PERMIT

    other_resource = parse_request("(subject/id, clerk1) (subject/role, assistant) (resource/id, creditReport) (action/id, read)")
    assert evaluate(policy, other_resource) is Decision.NOT_APPLICABLE

    officier = parse_request("(subject/id, clerk1) (subject/role, officier) (resource/id, loanDoc) (action/id, read)")
    assert evaluate(policy, officier) is Decision.DENY

    assert evaluate(policy, load_request(bundled("loan_doc_write.req"))) is Decision.DENY


def test_rule_outcomes():
    permit = parse_policy('(permit target: equal(action/id, "read"))')
    assert evaluate(permit, parse_request("(action/id, read)")) is Decision.PERMIT
    assert evaluate(permit, parse_request("(action/id, write)")) is Decision.NOT_APPLICABLE
    assert evaluate(permit, Request()) is Decision.NOT_APPLICABLE
    assert evaluate(permit, parse_request("(action/id, 1.0)")) is Decision.INDETERMINATE
    assert evaluate(parse_policy("(deny target: 1.0)"), Request()) is Decision.INDETERMINATE


def test_policy_set_target_gates_children():
    rule = Rule(effect=Effect.PERMIT, target=parse_expr("true"))
    gated = PolicySet(alg=CombAlg.PERMIT_OVERRIDES, target=parse_expr("equal(action/id, \"read\")"), children=(rule,))
    assert evaluate(gated, parse_request("(action/id, read)")) is Decision.PERMIT
    assert evaluate(gated, parse_request("(action/id, write)")) is Decision.NOT_APPLICABLE
    assert evaluate(gated, parse_request("(action/id, 2.0)")) is Decision.INDETERMINATE

    # the finaliser applies only once the target matches
    unless = PolicySet(alg=CombAlg.DENY_UNLESS_PERMIT, target=parse_expr("false"), children=(rule,))
    assert evaluate(unless, Request()) is Decision.NOT_APPLICABLE


def test_pdp_combines_top_level_policies():
    pdp = parse_policy("pdp { first-applicable policies: (deny target: x/flag) (permit target: true) }")
    assert evaluate(pdp, parse_request("(x/flag, true)")) is Decision.DENY
    assert evaluate(pdp, parse_request("(x/flag, false)")) is Decision.PERMIT
    assert evaluate(pdp, Request()) is Decision.PERMIT


def test_first_applicable_is_order_sensitive():
    forward = parse_policy("{ first-applicable policies: (permit target: true) (deny target: true) }")
    backward = parse_policy("{ first-applicable policies: (deny target: true) (permit target: true) }")
    assert evaluate(forward, Request()) is Decision.PERMIT
    assert evaluate(backward, Request()) is Decision.DENY


def test_evaluation_is_total_on_random_input(small_domain, small_config):
    rng = random.Random(99)
    for _ in range(400):
        subject = gen_subject(rng, small_domain)
        for _ in range(10):
            request = gen_request(rng, small_domain)
            assert evaluate(subject, request, small_config) in Decision
            result = eval_expr(gen_any(rng, small_domain, 4), request, small_config)
            assert result is ABSENT or is_error(result) or isinstance(result, (bool, float, str, date, frozenset))


def test_names_missing_from_the_request_are_absent():
    assert eval_expr(parse_expr("x/missing"), Request()) is ABSENT
    assert eval_expr(parse_expr("x/flag"), Request(bindings={AttrName.parse("x/flag"): True})) is True
