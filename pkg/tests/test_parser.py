"""
Tests for the text formats: parsing, error reporting, printing and fuzzing
"""
import random
from datetime import date

import pytest

from facpl.core.errors import SourceError
from facpl.data.loader import bundled, load_config, request_set_config
from facpl.models import ABSENT, AttrKind, AttrName, Call, CombAlg, Const, Effect, Name, Operator, Pdp, PolicySet, Rule, SetConst
from facpl.parsing import (
    MAX_DEPTH, format_domain, format_expr, format_policy, format_request, parse_config, parse_domain, parse_expr,
    parse_policy, parse_request, parse_request_set,
)
from tests.generators import gen_any, gen_request, gen_subject

ACTION = AttrName.parse("action/id")


# -----------------------------------------------------
# ✅ Policies and expressions
# -----------------------------------------------------
def test_parse_rule():
    rule = parse_policy('(permit target: equal(action/id, "read"))')
    assert rule == Rule(
        effect=Effect.PERMIT,
        target=Call(op=Operator.EQUAL, args=(Name(name=ACTION), Const(value="read"))),
    )


def test_parse_policy_set_with_and_without_target():
    text = """
    { permit-overrides
      target: in(subject/id, {"clerk1", "clerk2"})
      policies:
        (permit target: true)
        { first-applicable policies: (deny target: false) }
    }
    """
    policy = parse_policy(text)
    assert isinstance(policy, PolicySet)
    assert policy.alg is CombAlg.PERMIT_OVERRIDES
    assert policy.target.args[1] == SetConst(values=frozenset({"clerk1", "clerk2"}))
    inner = policy.children[1]
    assert inner.target is None and inner.alg is CombAlg.FIRST_APPLICABLE


def test_parse_pdp():
    pdp = parse_policy("pdp { deny-unless-permit policies: (permit target: true) (deny target: true) }")
    assert isinstance(pdp, Pdp)
    assert [child.effect for child in pdp.policies] == [Effect.PERMIT, Effect.DENY]


def test_parse_literals():
    assert parse_expr("2.5") == Const(value=2.5)
    assert parse_expr("-1e3") == Const(value=-1000.0)
    assert parse_expr("2024-02-29") == Const(value=date(2024, 2, 29))
    assert parse_expr('"a \\"quoted\\" \\\\ word"') == Const(value='a "quoted" \\ word')
    assert parse_expr("false") == Const(value=False)


def test_every_bundled_policy_parses(casestudy_dir):
    for path in sorted(casestudy_dir.glob("*.facpl")):
        parse_policy(path.read_bytes())


@pytest.mark.parametrize(
    "text, message",
    [
        ("(permit target: equal(action/id))", "takes 2 argument(s)"),
        ("(allow target: true)", "expected effect"),
        ("{ best-effort policies: (permit target: true) }", "unknown combining algorithm"),
        ("{ permit-overrides policies: }", "empty policy list"),
        ("(permit target: frob(true))", "unknown function"),
        ("(permit target: equal(action/id, read))", "bare word"),
        ("(permit target: in(subject/id, {}))", "empty set literal"),
        ('(permit target: in(subject/id, {"a", 1.0}))', "mixes values"),
        ("(permit target: 1e999)", "non-finite"),
        ("(permit target: 2024-02-30)", "invalid date"),
        ("(permit target: true) extra", "after end of input"),
        ("(permit target: equal(action/id, \"a\") $)", "unexpected character"),
    ],
)
def test_policy_errors(text, message):
    with pytest.raises(SourceError) as caught:
        parse_policy(text)
    assert message in caught.value.message


def test_error_location_and_snippet():
    text = "{ permit-overrides\n  policies:\n    (permit target: equal(action/id, read))\n}"
    with pytest.raises(SourceError) as caught:
        parse_policy(text)
    error = caught.value
    assert (error.line, error.column) == (3, 38)
    assert "equal(action/id, read)" in error.snippet
    assert str(error).startswith("3:38: bare word")


def test_invalid_utf8_is_a_source_error():
    with pytest.raises(SourceError) as caught:
        parse_policy(b"(permit target: \xff)")
    assert "UTF-8" in caught.value.message


def test_nesting_is_bounded():
    deep = "not(" * (MAX_DEPTH + 5) + "true" + ")" * (MAX_DEPTH + 5)
    with pytest.raises(SourceError) as caught:
        parse_expr(deep)
    assert "nesting deeper" in caught.value.message

    sets = "{ first-applicable policies: " * (MAX_DEPTH + 5) + "(permit target: true)" + "}" * (MAX_DEPTH + 5)
    with pytest.raises(SourceError):
        parse_policy(sets)

    shallow = "not(" * (MAX_DEPTH - 1) + "true" + ")" * (MAX_DEPTH - 1)
    assert isinstance(parse_expr(shallow), Call)


# -----------------------------------------------------
# ✅ Requests, domains, configs and request sets
# -----------------------------------------------------
def test_parse_request_with_bare_words_and_repeats():
    request = parse_request("(subject/role, assistant)\n(subject/role, \"officier\")\n(env/amount, 2.5)")
    assert request.lookup(AttrName.parse("subject/role")) == frozenset({"assistant", "officier"})
    assert request.lookup(AttrName.parse("env/amount")) == 2.5
    assert request.lookup(ACTION) is ABSENT


def test_parse_request_set_literal_and_mixed_kinds():
    request = parse_request("(subject/role, {assistant})")
    assert request.lookup(AttrName.parse("subject/role")) == frozenset({"assistant"})
    with pytest.raises(SourceError) as caught:
        parse_request("(subject/role, assistant) (subject/role, 1.0)")
    assert "different kinds" in caught.value.message


def test_parse_domain(banking_domain):
    roles = banking_domain.get(AttrName.parse("subject/role"))
    assert roles.kind is AttrKind.SET_OF_STRING
    assert roles.universe == ("assistant", "officier")
    assert banking_domain.request_count() == 3 * 4 * 4 * 3 * 4 * 4 * 5

    domain = parse_domain("env/urgent : boolean in {true, false} required\nenv/amount : double in {1.0}")
    assert not domain.attributes[0].allow_absent
    assert domain.attributes[1].universe == (1.0,)


@pytest.mark.parametrize(
    "text, message",
    [
        ("subject/id : string in {a}\nsubject/id : string in {b}", "duplicate declaration"),
        ("subject/id : string in {a, a}", "duplicate value"),
        ("subject/id : integer in {1}", "expected a kind"),
        ("env/amount : double in {a}", "bare word"),
        ("env/amount : double in {\"a\"}", "not of kind double"),
    ],
)
def test_domain_errors(text, message):
    with pytest.raises(SourceError) as caught:
        parse_domain(text)
    assert message in caught.value.message


def test_parse_config(banking_config):
    assert banking_config.leq("L1", "L3") is True
    assert banking_config.is_sub_role("officier", "assistant") is True

    config = parse_config("levels: low, high\nroles: \"a b\" -> c")
    assert config.leq("low", "high") is False
    assert config.levels == frozenset({"low", "high"})
    assert config.is_sub_role("a b", "c") is True


def test_config_errors():
    with pytest.raises(SourceError) as caught:
        parse_config("levels: L1 <= L2\n L2 <= L1")
    assert "not antisymmetric" in caught.value.message
    assert caught.value.line == 2

    with pytest.raises(SourceError) as caught:
        parse_config("roles: a -> b, b -> c, c -> a")
    assert "role cycle" in caught.value.message

    with pytest.raises(SourceError):
        parse_config("colours: red")


def test_parse_request_set():
    parsed = parse_request_set('domain: "banking.dom"\nconstraint: equal(action/id, "read")')
    assert parsed.domain_path == "banking.dom"
    assert parsed.constraint.op is Operator.EQUAL
    assert parse_request_set("constraint: true").domain_path is None
    named = parse_request_set('domain: "banking.dom"\nconfig: "banking.cfg"\nconstraint: true')
    assert (named.domain_path, named.config_path) == ("banking.dom", "banking.cfg")
    assert parse_request_set("constraint: true").config_path is None
    with pytest.raises(SourceError):
        parse_request_set('config: "banking.cfg"\ndomain: "banking.dom"\nconstraint: true')
    with pytest.raises(SourceError):
        parse_request_set('domain: "banking.dom"')


def test_request_set_config_resolves_beside_the_file(tmp_path, banking_config):
    assert load_config(request_set_config(bundled("nru_secure.spec"))) == banking_config
    (tmp_path / "levels.cfg").write_text("levels:\n  L1 <= L2\n")
    spec = tmp_path / "reads.spec"
    spec.write_text('config: "levels.cfg"\nconstraint: true\n')
    assert request_set_config(spec) == (tmp_path / "levels.cfg").resolve()
    spec.write_text("constraint: true\n")
    assert request_set_config(spec) is None


# -----------------------------------------------------
# ✅ Printing
# -----------------------------------------------------
def test_printer_is_canonical():
    policy = parse_policy('{ permit-overrides target: in("b", {"c", "a"}) policies: (permit target: true) }')
    assert format_policy(policy) == (
        '{ permit-overrides target: in("b", {"a", "c"})\n'
        + "  policies:\n"
        + "    (permit target: true)\n"
        + "}\n"
    )
    assert format_expr(parse_expr('equal("tab\\there", "new\\nline")')) == 'equal("tab\\there", "new\\nline")'


def test_domain_round_trip(banking_domain, small_domain):
    for domain in (banking_domain, small_domain):
        assert parse_domain(format_domain(domain)) == domain


def test_random_policies_round_trip(small_domain):
    rng = random.Random(20240611)
    for _ in range(300):
        subject = gen_subject(rng, small_domain)
        assert parse_policy(format_policy(subject)) == subject


def test_random_expressions_and_requests_round_trip(small_domain):
    rng = random.Random(7)
    for _ in range(300):
        expr = gen_any(rng, small_domain, 4)
        assert parse_expr(format_expr(expr)) == expr
        request = gen_request(rng, small_domain)
        assert parse_request(format_request(request)) == request


# -----------------------------------------------------
# ✅ Fuzzing: every input yields an object or a SourceError
# -----------------------------------------------------
_GRAMMAR_BYTES = b'(){},:/<=->"\\ \n\tpermit deny target policies pdp equal in and or not leq 0123456789.-eE L1 subject/id "x"'


def _seeds():
    sources = []
    for name in ("policyA.facpl", "policyC.facpl", "sod.facpl", "loan_doc.req", "banking.dom", "banking.cfg",
                 "nru_secure.spec"):
        sources.append(bundled(name).read_bytes())
    return sources


def _mutate(rng: random.Random, data: bytes) -> bytes:
    data = bytearray(data)
    for _ in range(rng.randint(1, 4)):
        choice = rng.random()
        position = rng.randrange(len(data) + 1)
        if choice < 0.3 and data:
            del data[min(position, len(data) - 1)]
        elif choice < 0.6:
            data.insert(position, rng.choice(_GRAMMAR_BYTES))
        elif choice < 0.8:
            data.insert(position, rng.randrange(256))
        else:
            data = data[:position]
    return bytes(data)


def test_fuzz_parsers_never_crash():
    rng = random.Random(1234)
    seeds = _seeds()
    parsers = (parse_policy, parse_expr, parse_request, parse_domain, parse_config, parse_request_set)
    outcomes = {"parsed": 0, "rejected": 0}
    for index in range(100_000):
        roll = rng.random()
        if roll < 0.5:
            data = _mutate(rng, rng.choice(seeds))
        elif roll < 0.8:
            data = bytes(rng.choice(_GRAMMAR_BYTES) for _ in range(rng.randint(0, 40)))
        else:
            data = bytes(rng.randrange(256) for _ in range(rng.randint(0, 40)))
        parse = parsers[index % len(parsers)]
        try:
            parse(data)
        except SourceError:
            outcomes["rejected"] += 1
        else:
            outcomes["parsed"] += 1
    assert outcomes["parsed"] + outcomes["rejected"] == 100_000
    assert outcomes["rejected"] > 0
