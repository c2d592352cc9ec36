from facpl.evaluation.combining import DECISIONS, FINALISERS, MATRICES, combine, combine_pair, swap
from facpl.evaluation.expressions import ExprResult, apply_operator, eval_expr, is_error
from facpl.evaluation.policies import eval_pdp, eval_policy, eval_rule, evaluate, target_outcome

__all__ = [
    "DECISIONS", "FINALISERS", "MATRICES", "combine", "combine_pair", "swap", "ExprResult",
    "apply_operator", "eval_expr", "is_error", "eval_pdp", "eval_policy", "eval_rule", "evaluate",
    "target_outcome",
]
