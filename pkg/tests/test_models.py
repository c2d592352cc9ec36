"""
Tests for the core data model
"""
import random
from datetime import date

import pytest
from pydantic import ValidationError

from facpl.models import (
    ABSENT, AttrKind, AttributeDomain, AttrName, Call, CombAlg, Const, Decision, DomainSpec, Effect,
    EngineConfig, Name, Operator, Pdp, PolicySet, Request, Rule, SetConst,
)
from facpl.models.reports import CheckReport, Property
from facpl.parsing import parse_request

ROLE = AttrName(category="subject", attribute="role")


def test_attr_name_parse_and_order():
    name = AttrName.parse("resource/read.ids")
    assert (name.category, name.attribute) == ("resource", "read.ids")
    assert str(name) == "resource/read.ids"
    assert AttrName.parse("action/id") < name
    with pytest.raises(ValueError):
        AttrName.parse("no-slash")
    with pytest.raises(ValidationError):
        AttrName(category="9bad", attribute="id")


def test_request_lookup_is_total():
    request = Request(bindings={ROLE: "assistant"})
    assert request.lookup(ROLE) == "assistant"
    assert request.lookup(AttrName.parse("action/id")) is ABSENT


def test_request_repeated_entries_form_a_set():
    request = Request.from_entries([(ROLE, "assistant"), (ROLE, "officier"), (ROLE, "assistant")])
    assert request.lookup(ROLE) == frozenset({"assistant", "officier"})


def test_request_construction_ignores_entry_order():
    action, amount = AttrName.parse("action/id"), AttrName.parse("env/amount")
    entries = [(ROLE, "assistant"), (action, "read"), (ROLE, "officier"), (amount, 2.5), (ROLE, "assistant")]
    lines = ['(subject/role, "assistant")', '(action/id, "read")', '(subject/role, "officier")', "(env/amount, 2.5)"]
    expected = Request(bindings={ROLE: frozenset({"assistant", "officier"}), action: "read", amount: 2.5})
    rng = random.Random(99)
    for _ in range(25):
        rng.shuffle(entries)
        rng.shuffle(lines)
        assert Request.from_entries(entries) == expected
        assert parse_request(" ".join(lines)) == expected


def test_request_rejects_mixed_kind_sets_and_non_finite_doubles():
    with pytest.raises(ValidationError):
        Request(bindings={ROLE: frozenset({"assistant", 1.0})})
    with pytest.raises(ValidationError):
        Request(bindings={ROLE: float("nan")})


def test_call_arity_is_checked():
    with pytest.raises(ValidationError):
        Call(op=Operator.NOT, args=(Const(value=True), Const(value=False)))
    with pytest.raises(ValidationError):
        Call(op=Operator.EQUAL, args=(Const(value=True),))


def test_set_literal_is_uniform_and_non_empty():
    with pytest.raises(ValidationError):
        SetConst(values=frozenset())
    with pytest.raises(ValidationError):
        SetConst(values=frozenset({"a", date(2024, 1, 1)}))


def test_policy_set_needs_children_and_defaults_its_target():
    rule = Rule(effect=Effect.PERMIT, target=Const(value=True))
    with pytest.raises(ValidationError):
        PolicySet(alg=CombAlg.PERMIT_OVERRIDES, children=())
    with pytest.raises(ValidationError):
        Pdp(alg=CombAlg.PERMIT_OVERRIDES, policies=())
    policy_set = PolicySet(alg=CombAlg.FIRST_APPLICABLE, children=(rule,))
    assert policy_set.effective_target == Const(value=True)


def test_decision_helpers():
    assert Decision.PERMIT.is_applicable and Decision.DENY.is_applicable
    assert not Decision.NOT_APPLICABLE.is_applicable
    assert Effect.DENY.decision is Decision.DENY


def test_attribute_domain_options_and_count():
    roles = AttributeDomain(name=ROLE, kind=AttrKind.SET_OF_STRING, universe=("a", "b", "c"))
    options = roles.options()
    assert len(options) == roles.option_count == 8
    assert options[-1] is ABSENT
    assert options[0] == frozenset({"a"})

    level = AttributeDomain(
        name=AttrName.parse("subject/level"), kind=AttrKind.STRING, universe=("L1", "L2"), allow_absent=False,
    )
    assert level.options() == ["L1", "L2"]
    assert DomainSpec(attributes=(roles, level)).request_count() == 16


def test_attribute_domain_rejects_bad_universes():
    with pytest.raises(ValidationError):
        AttributeDomain(name=ROLE, kind=AttrKind.STRING, universe=("a", "a"))
    with pytest.raises(ValidationError):
        AttributeDomain(name=ROLE, kind=AttrKind.DOUBLE, universe=("a",))
    with pytest.raises(ValidationError):
        AttributeDomain(name=ROLE, kind=AttrKind.STRING, universe=())


def test_domain_rejects_duplicate_attributes():
    attribute = AttributeDomain(name=ROLE, kind=AttrKind.STRING, universe=("a",))
    with pytest.raises(ValidationError):
        DomainSpec(attributes=(attribute, attribute))


def test_engine_config_closures():
    config = EngineConfig.from_relations([("L1", "L2"), ("L2", "L3")], [("officier", "assistant")], levels=["L0"])
    assert config.leq("L1", "L3") is True
    assert config.leq("L3", "L1") is False
    assert config.leq("L0", "L0") is True
    assert config.leq("L0", "L1") is False
    assert config.leq("L1", "L9") is None
    assert config.is_sub_role("officier", "assistant") is True
    assert config.is_sub_role("assistant", "officier") is False
    assert config.is_sub_role("assistant", "assistant") is True
    assert config.is_sub_role("clerk", "assistant") is None


def test_engine_config_rejects_cycles():
    with pytest.raises(ValidationError):
        EngineConfig.from_relations([("L1", "L2"), ("L2", "L1")])
    with pytest.raises(ValidationError):
        EngineConfig.from_relations(role_edges=[("a", "b"), ("b", "a")])


def _mutually_reachable(nodes, pairs):
    """Pairs of distinct nodes that reach each other, by repeated relational composition"""
    reach = {(a, a) for a in nodes} | set(pairs)
    while True:
        grown = reach | {(a, d) for a, b in reach for c, d in reach if b == c}
        if grown == reach:
            break
        reach = grown
    return reach, {(a, b) for a, b in reach if a != b and (b, a) in reach}


def test_engine_config_validation_on_random_relations():
    rng = random.Random(1234)
    nodes = ["a", "b", "c", "d", "e"]
    for _ in range(300):
        pairs = [(rng.choice(nodes), rng.choice(nodes)) for _ in range(rng.randint(0, 6))]
        reach, cycles = _mutually_reachable(nodes, pairs)

        if cycles:
            with pytest.raises(ValidationError):
                EngineConfig.from_relations(level_pairs=pairs, levels=nodes)
        else:
            config = EngineConfig.from_relations(level_pairs=pairs, levels=nodes)
            assert all(config.leq(a, b) is ((a, b) in reach) for a in nodes for b in nodes)

        if cycles or any(child == parent for child, parent in pairs):
            with pytest.raises(ValidationError):
                EngineConfig.from_relations(role_edges=pairs, roles=nodes)
        else:
            config = EngineConfig.from_relations(role_edges=pairs, roles=nodes)
            assert all(config.is_sub_role(a, b) is ((a, b) in reach) for a in nodes for b in nodes)


def test_failing_report_needs_a_witness():
    with pytest.raises(ValidationError):
        CheckReport(property=Property.COMPLETENESS, holds=False)
    assert CheckReport(property=Property.COMPLETENESS, holds=True).witnesses == ()


def test_names_render_in_canonical_order():
    request = Request(bindings={
        AttrName.parse("subject/id"): "clerk1",
        AttrName.parse("action/id"): "read",
    })
    assert [str(name) for name, _ in request.entries()] == ["action/id", "subject/id"]
    assert str(request) == '(action/id, "read") (subject/id, "clerk1")'


def test_name_expression_is_hashable_by_value():
    assert Name(name=ROLE) == Name(name=AttrName.parse("subject/role"))
