"""
Decision semantics of rules, policy sets and PDPs.
"""
from __future__ import annotations

from typing import Union

from facpl.evaluation.combining import combine
from facpl.evaluation.expressions import ExprResult, eval_expr
from facpl.models.config import EMPTY_CONFIG, EngineConfig
from facpl.models.policies import Decision, Expr, Pdp, Policy, PolicySet, Rule
from facpl.models.requests import Request
from facpl.models.values import ABSENT


def target_outcome(result: ExprResult) -> str:
    """Classify a target result as 'match', 'no-match' or 'error'"""
    if result is True:
        return "match"
    if result is False or result is ABSENT:
        return "no-match"
    # errors and non-boolean values
    return "error"


def _applies(target: Expr, request: Request, config: EngineConfig) -> str:
    return target_outcome(eval_expr(target, request, config))


def eval_rule(rule: Rule, request: Request, config: EngineConfig = EMPTY_CONFIG) -> Decision:
    outcome = _applies(rule.target, request, config)
    if outcome == "match":
        return rule.effect.decision
    if outcome == "no-match":
        return Decision.NOT_APPLICABLE
    return Decision.INDETERMINATE


def eval_policy(policy: Policy, request: Request, config: EngineConfig = EMPTY_CONFIG) -> Decision:
    if isinstance(policy, Rule):
        return eval_rule(policy, request, config)
    if not isinstance(policy, PolicySet):
        raise TypeError(f"not a policy: {policy!r}")

    outcome = _applies(policy.effective_target, request, config)
    if outcome == "no-match":
        return Decision.NOT_APPLICABLE
    if outcome == "error":
        return Decision.INDETERMINATE
    return combine(policy.alg, (eval_policy(child, request, config) for child in policy.children))


def eval_pdp(pdp: Pdp, request: Request, config: EngineConfig = EMPTY_CONFIG) -> Decision:
    return combine(pdp.alg, (eval_policy(child, request, config) for child in pdp.policies))


def evaluate(subject: Union[Pdp, Policy], request: Request, config: EngineConfig = EMPTY_CONFIG) -> Decision:
    """Decision of a PDP or a policy for one request"""
    if isinstance(subject, Pdp):
        return eval_pdp(subject, request, config)
    return eval_policy(subject, request, config)
