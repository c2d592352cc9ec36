"""
Recursive-descent parsers for the FACPL text formats:

  policies (.facpl)   pdp { alg policies: P+ }  |  { alg [target: E] policies: P+ }  |  ( effect target: E )
  requests (.req)     (cat/att, value) ...
  domains (.dom)      cat/att : kind in {v1, v2, ...} [required]
  configs (.cfg)      levels: a <= b, ...   roles: child -> parent, ...
  request sets (.spec)  [domain: "file.dom"] constraint: E

Every failure is reported as a SourceError pointing into the input.
"""
from __future__ import annotations

import math
from datetime import date
from typing import Callable, Dict, List, Optional, Set, Tuple, TypeVar, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from facpl.core.errors import SourceError
from facpl.models.config import EngineConfig, reflexive_transitive_closure
from facpl.models.domains import AttrKind, AttributeDomain, DomainSpec
from facpl.models.policies import (
    Call, CombAlg, Const, Effect, Expr, Name, Operator, Pdp, Policy, PolicySet, Rule, SetConst,
)
from facpl.models.requests import Request
from facpl.models.values import AttrName, Value, ValueKind, value_kind
from facpl.parsing.lexer import (
    DATE, EOF, IDENT, NAME, NEWLINE, NUMBER, STRING, SourceText, Token, tokenize, unquote,
)

MAX_DEPTH = 64

T = TypeVar("T")
Text = Union[str, bytes]


class RequestSetSource(BaseModel):
    """A parsed `.spec` file; domain and configuration references are resolved by the loader"""
    model_config = ConfigDict(frozen=True)

    domain_path: Optional[str] = None
    config_path: Optional[str] = None
    constraint: Expr


class _Parser:
    def __init__(self, text: Text):
        self.source = SourceText(text)
        self.tokens = [tok for tok in tokenize(self.source) if tok.kind != NEWLINE]
        self.pos = 0
        self.depth = 0

    # -- token helpers ---------------------------------------------------
    def peek(self, offset: int = 0) -> Token:
        index = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def advance(self) -> Token:
        token = self.peek()
        if token.kind != EOF:
            self.pos += 1
        return token

    def error(self, message: str, token: Optional[Token] = None) -> SourceError:
        token = token or self.peek()
        return self.source.error(message, token.line, token.column)

    def expect_punct(self, text: str) -> Token:
        token = self.peek()
        if not token.is_punct(text):
            raise self.error(f"expected '{text}', found {token.describe()}")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        """`word:` as in `target:` / `policies:`"""
        token = self.peek()
        if not token.is_word(word):
            raise self.error(f"expected '{word}:', found {token.describe()}")
        self.advance()
        self.expect_punct(":")
        return token

    def at_keyword(self, word: str) -> bool:
        return self.peek().is_word(word) and self.peek(1).is_punct(":")

    def expect_end(self) -> None:
        token = self.peek()
        if token.kind != EOF:
            raise self.error(f"unexpected {token.describe()} after end of input")

    def nested(self, token: Token, parse: Callable[[], T]) -> T:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.error(f"nesting deeper than {MAX_DEPTH} levels", token)
        try:
            return parse()
        finally:
            self.depth -= 1

    def build(self, token: Token, factory: Callable[..., T], **fields) -> T:
        try:
            return factory(**fields)
        except (ValidationError, ValueError) as exc:
            raise self.error(_first_message(exc), token) from None

    # -- literals --------------------------------------------------------
    def literal(self, token: Token, bare_words: bool) -> Value:
        if token.kind == STRING:
            return unquote(token, self.source)
        if token.kind == NUMBER:
            number = float(token.text)
            if not math.isfinite(number):
                raise self.error(f"non-finite double literal {token.text}", token)
            return number
        if token.kind == DATE:
            try:
                return date.fromisoformat(token.text)
            except ValueError:
                raise self.error(f"invalid date {token.text}", token) from None
        if token.kind == IDENT and token.text in ("true", "false"):
            return token.text == "true"
        if token.kind == IDENT and bare_words:
            return token.text
        if token.kind == IDENT:
            raise self.error(f"bare word {token.text!r}; string literals are double-quoted", token)
        raise self.error(f"expected a value, found {token.describe()}", token)

    def value_set(self, bare_words: bool) -> frozenset:
        """`{v1, v2, ...}`: non-empty, one kind"""
        opening = self.expect_punct("{")
        values: List[Value] = []
        while True:
            token = self.advance()
            value = self.literal(token, bare_words)
            if values and value_kind(value) is not value_kind(values[0]):
                raise self.error("set literal mixes values of different kinds", token)
            values.append(value)
            if self.peek().is_punct(","):
                self.advance()
                continue
            break
        if not values:
            raise self.error("empty set literal", opening)
        self.expect_punct("}")
        return frozenset(values)

    # -- expressions -----------------------------------------------------
    def expr(self) -> Expr:
        token = self.peek()
        if token.kind == NAME:
            self.advance()
            return Name(name=self.attr_name(token))
        if token.is_punct("{"):
            if self.peek(1).is_punct("}"):
                raise self.error("empty set literal")
            return SetConst(values=self.value_set(bare_words=False))
        if token.kind == IDENT and self.peek(1).is_punct("("):
            return self.nested(token, self.call)
        self.advance()
        return Const(value=self.literal(token, bare_words=False))

    def call(self) -> Expr:
        token = self.advance()
        try:
            op = Operator(token.text)
        except ValueError:
            raise self.error(f"unknown function {token.text!r}", token) from None
        self.expect_punct("(")
        args = [self.expr()]
        while self.peek().is_punct(","):
            self.advance()
            args.append(self.expr())
        self.expect_punct(")")
        if len(args) != op.arity:
            raise self.error(f"{op} takes {op.arity} argument(s), got {len(args)}", token)
        return Call(op=op, args=tuple(args))

    def attr_name(self, token: Token) -> AttrName:
        return AttrName.parse(token.text)

    # -- policies --------------------------------------------------------
    def top_level(self) -> Union[Pdp, Policy]:
        if self.peek().is_word("pdp"):
            result: Union[Pdp, Policy] = self.pdp()
        else:
            result = self.policy()
        self.expect_end()
        return result

    def pdp(self) -> Pdp:
        keyword = self.advance()
        self.expect_punct("{")
        alg = self.algorithm()
        self.expect_keyword("policies")
        policies = self.policy_list()
        self.expect_punct("}")
        return self.build(keyword, Pdp, alg=alg, policies=policies)

    def policy(self) -> Policy:
        token = self.peek()
        if token.is_punct("("):
            return self.nested(token, self.rule)
        if token.is_punct("{"):
            return self.nested(token, self.policy_set)
        raise self.error(f"expected a rule '(' or a policy set '{{', found {token.describe()}")

    def rule(self) -> Rule:
        opening = self.expect_punct("(")
        token = self.advance()
        try:
            effect = Effect(token.text) if token.kind == IDENT else None
        except ValueError:
            effect = None
        if effect is None:
            raise self.error(f"expected effect 'permit' or 'deny', found {token.describe()}", token)
        self.expect_keyword("target")
        target = self.expr()
        self.expect_punct(")")
        return self.build(opening, Rule, effect=effect, target=target)

    def policy_set(self) -> PolicySet:
        opening = self.expect_punct("{")
        alg = self.algorithm()
        target = None
        if self.at_keyword("target"):
            self.expect_keyword("target")
            target = self.expr()
        self.expect_keyword("policies")
        children = self.policy_list()
        self.expect_punct("}")
        return self.build(opening, PolicySet, alg=alg, target=target, children=children)

    def policy_list(self) -> Tuple[Policy, ...]:
        children: List[Policy] = []
        while self.peek().is_punct("(") or self.peek().is_punct("{"):
            children.append(self.policy())
        if not children:
            raise self.error("empty policy list")
        return tuple(children)

    def algorithm(self) -> CombAlg:
        token = self.advance()
        if token.kind != IDENT:
            raise self.error(f"expected a combining algorithm, found {token.describe()}", token)
        try:
            return CombAlg(token.text)
        except ValueError:
            raise self.error(f"unknown combining algorithm {token.text!r}", token) from None

    # -- requests --------------------------------------------------------
    def request(self) -> Request:
        entries: List[Tuple[AttrName, Union[Value, frozenset]]] = []
        first_token: Dict[AttrName, Token] = {}
        while self.peek().kind != EOF:
            self.expect_punct("(")
            token = self.advance()
            if token.kind != NAME:
                raise self.error(f"expected an attribute name cat/att, found {token.describe()}", token)
            name = self.attr_name(token)
            self.expect_punct(",")
            if self.peek().is_punct("{"):
                value: Union[Value, frozenset] = self.value_set(bare_words=True)
            else:
                value = self.literal(self.advance(), bare_words=True)
            self.expect_punct(")")
            entries.append((name, value))
            first_token.setdefault(name, token)

        # Repeated names collapse into one set; it must stay of a single kind
        kinds: Dict[AttrName, ValueKind] = {}
        for name, value in entries:
            members = value if isinstance(value, frozenset) else (value,)
            for member in members:
                kind = kinds.setdefault(name, value_kind(member))
                if kind is not value_kind(member):
                    raise self.error(f"attribute {name} is given values of different kinds", first_token[name])
        return Request.from_entries(entries)

    # -- domains ---------------------------------------------------------
    def domain(self) -> DomainSpec:
        attributes: List[AttributeDomain] = []
        seen: Set[AttrName] = set()
        while self.peek().kind != EOF:
            token = self.advance()
            if token.kind != NAME:
                raise self.error(f"expected an attribute name cat/att, found {token.describe()}", token)
            name = self.attr_name(token)
            if name in seen:
                raise self.error(f"duplicate declaration of attribute {name}", token)
            seen.add(name)
            self.expect_punct(":")
            kind_token = self.advance()
            try:
                kind = AttrKind(kind_token.text) if kind_token.kind == IDENT else None
            except ValueError:
                kind = None
            if kind is None:
                raise self.error(
                    "expected a kind (boolean, double, string, date, set-of-string), "
                    f"found {kind_token.describe()}",
                    kind_token,
                )
            if not self.peek().is_word("in"):
                raise self.error(f"expected 'in', found {self.peek().describe()}")
            self.advance()
            universe = self.universe(kind)
            required = False
            if self.peek().is_word("required"):
                self.advance()
                required = True
            attributes.append(self.build(
                token, AttributeDomain, name=name, kind=kind, universe=universe, allow_absent=not required,
            ))
        return DomainSpec(attributes=tuple(attributes))

    def universe(self, kind: AttrKind) -> Tuple[Value, ...]:
        self.expect_punct("{")
        values: List[Value] = []
        while True:
            token = self.advance()
            value = self.literal(token, bare_words=kind.element_kind is ValueKind.STRING)
            if value_kind(value) is not kind.element_kind:
                raise self.error(f"value {token.text} is not of kind {kind.element_kind.value}", token)
            if value in values:
                raise self.error(f"duplicate value {token.text} in universe", token)
            values.append(value)
            if not self.peek().is_punct(","):
                break
            self.advance()
        self.expect_punct("}")
        return tuple(values)

    # -- engine configuration -------------------------------------------
    def config(self) -> EngineConfig:
        level_pairs: List[Tuple[str, str]] = []
        levels: Set[str] = set()
        role_edges: List[Tuple[str, str]] = []
        roles: Set[str] = set()
        while self.peek().kind != EOF:
            header = self.peek()
            if self.at_keyword("levels"):
                self.expect_keyword("levels")
                self.section("<=", levels, level_pairs, self.check_level_pair)
            elif self.at_keyword("roles"):
                self.expect_keyword("roles")
                self.section("->", roles, role_edges, self.check_role_edge)
            else:
                raise self.error(f"expected 'levels:' or 'roles:', found {header.describe()}")
        try:
            return EngineConfig.from_relations(level_pairs, role_edges, levels, roles)
        except (ValidationError, ValueError) as exc:
            raise self.error(_first_message(exc), self.peek()) from None

    def section(self, arrow: str, names: Set[str], pairs: List[Tuple[str, str]], check) -> None:
        while self.peek().kind != EOF and not (self.at_keyword("levels") or self.at_keyword("roles")):
            token = self.advance()
            low = self.config_name(token)
            names.add(low)
            if self.peek().is_punct(arrow):
                self.advance()
                high_token = self.advance()
                high = self.config_name(high_token)
                names.add(high)
                check(pairs, low, high, high_token)
                pairs.append((low, high))
            if self.peek().is_punct(","):
                self.advance()

    def config_name(self, token: Token) -> str:
        if token.kind == IDENT:
            return token.text
        if token.kind == STRING:
            return unquote(token, self.source)
        raise self.error(f"expected a name, found {token.describe()}", token)

    def check_level_pair(self, pairs, low: str, high: str, token: Token) -> None:
        order = reflexive_transitive_closure((), pairs)
        if low != high and (high, low) in order:
            raise self.error(f"level order not antisymmetric: {low} <= {high} <= {low}", token)

    def check_role_edge(self, edges, child: str, parent: str, token: Token) -> None:
        reach = reflexive_transitive_closure((), edges)
        if child == parent or (parent, child) in reach:
            raise self.error(f"role cycle through {child} -> {parent}", token)

    # -- request sets ----------------------------------------------------
    def request_set(self) -> RequestSetSource:
        paths: Dict[str, str] = {}
        for keyword in ("domain", "config"):
            if self.at_keyword(keyword):
                self.expect_keyword(keyword)
                token = self.advance()
                if token.kind != STRING:
                    raise self.error(f"expected a quoted file name, found {token.describe()}", token)
                paths[keyword] = unquote(token, self.source)
        self.expect_keyword("constraint")
        constraint = self.expr()
        self.expect_end()
        return RequestSetSource(domain_path=paths.get("domain"), config_path=paths.get("config"), constraint=constraint)


def _first_message(exc: Exception) -> str:
    if isinstance(exc, ValidationError):
        errors = exc.errors()
        if errors:
            return str(errors[0].get("msg", exc)).removeprefix("Value error, ")
    return str(exc)


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------
def parse_policy(text: Text) -> Union[Pdp, Policy]:
    """Parse a PDP (`pdp { ... }`), a policy set or a rule"""
    return _Parser(text).top_level()


def parse_expr(text: Text) -> Expr:
    parser = _Parser(text)
    expr = parser.expr()
    parser.expect_end()
    return expr


def parse_request(text: Text) -> Request:
    return _Parser(text).request()


def parse_domain(text: Text) -> DomainSpec:
    return _Parser(text).domain()


def parse_config(text: Text) -> EngineConfig:
    return _Parser(text).config()


def parse_request_set(text: Text) -> RequestSetSource:
    return _Parser(text).request_set()
