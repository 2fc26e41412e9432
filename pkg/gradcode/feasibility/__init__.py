from .bounds import (
    BoundReport,
    ImpossibilityVerdict,
    check_scheme_bound,
    convexity_claim,
    impossibility_predicates,
    lemma_condition,
    lower_bound,
    scheme_bound_report,
    unrecoverable_ratio,
)
from .oracle import FeasibilityVerdict, max_recoverable, oracle_feasible

__all__ = [
    "BoundReport",
    "ImpossibilityVerdict",
    "check_scheme_bound",
    "convexity_claim",
    "impossibility_predicates",
    "lemma_condition",
    "lower_bound",
    "scheme_bound_report",
    "unrecoverable_ratio",
    "FeasibilityVerdict",
    "max_recoverable",
    "oracle_feasible",
]
