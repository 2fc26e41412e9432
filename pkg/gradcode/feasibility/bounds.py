"""
Computation-load lower bounds and impossibility checks.
"""
import logging
from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence

from pydantic import BaseModel, ConfigDict

from gradcode.constructions.cyclic import naive_load_bound
from gradcode.core.loads import load_report
from gradcode.core.models import GcScheme
from gradcode.utils import RationalLike, RationalUtils

logger = logging.getLogger(__name__)


class BoundReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    k: int
    s: int
    alpha: Fraction
    y_min: int
    l_min: Fraction
    naive_load: Fraction
    scheme_y: Optional[int] = None
    satisfied: Optional[bool] = None
    tight: Optional[bool] = None

    def to_dict(self) -> dict:
        fmt = RationalUtils.format
        return {
            "n": self.n,
            "k": self.k,
            "s": self.s,
            "alpha": fmt(self.alpha),
            "y_min": self.y_min,
            "l_min": fmt(self.l_min),
            "naive_load": fmt(self.naive_load),
            "scheme_y": self.scheme_y,
            "satisfied": self.satisfied,
            "tight": self.tight,
        }


def unrecoverable_ratio(n: int, s: int, y: int) -> Fraction:
    """C(s, y) / C(n, y)."""
    return RationalUtils.binom_ratio(s, n, y)


def lower_bound(n: int, k: int, s: int, alpha: RationalLike) -> BoundReport:
    """Smallest replication y with C(s,y)/C(n,y) <= 1 - alpha, by linear scan."""
    alpha = RationalUtils.parse(alpha)
    y_min = next(y for y in range(1, n + 1) if unrecoverable_ratio(n, s, y) <= 1 - alpha)
    return BoundReport(
        n=n, k=k, s=s, alpha=alpha,
        y_min=y_min,
        l_min=Fraction(y_min, n),
        naive_load=naive_load_bound(n, s, alpha),
    )


def scheme_bound_report(scheme: GcScheme) -> BoundReport:
    """Lower bound for the scheme's parameters, checked against its actual load."""
    params = scheme.params
    report = lower_bound(params.n, params.k, params.s, params.alpha)
    y = RationalUtils.ceil_mul(load_report(scheme).l, params.n)
    ratio = unrecoverable_ratio(params.n, params.s, y)
    return report.model_copy(
        update={
            "scheme_y": y,
            "satisfied": ratio <= 1 - params.alpha,
            "tight": ratio == 1 - params.alpha,
        }
    )


def check_scheme_bound(scheme: GcScheme) -> bool:
    return bool(scheme_bound_report(scheme).satisfied)


def lemma_condition(
    y_list: Sequence[int],
    n: int,
    s: int,
    k: int,
    alpha: RationalLike,
) -> bool:
    """sum_j C(n - y_j, n - s) <= C(n, s)·k·(1 - alpha), exactly."""
    alpha = RationalUtils.parse(alpha)
    lhs = sum(comb(n - y, n - s) for y in y_list)
    return lhs <= comb(n, s) * k * (1 - alpha)


def convexity_claim(a_list: Sequence[int], r: int) -> bool:
    """
    sum C(a_i, r) >= t1·C(a, r) + (t - t1)·C(a + 1, r), where a is the
    floor of the mean and t1 = (a + 1)·t - sum(a_i).
    """
    t = len(a_list)
    total = sum(a_list)
    a = total // t
    t1 = (a + 1) * t - total
    lhs = sum(comb(v, r) for v in a_list)
    return lhs >= t1 * comb(a, r) + (t - t1) * comb(a + 1, r)


# ============================================================================
# Impossibility predicates (k = n)
# ============================================================================

class ImpossibilityVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    ruled_out: bool
    reasons: List[str]


def impossibility_predicates(
    n: int,
    alpha: RationalLike,
    s: int,
    m: int,
    l: RationalLike,
    cyclic: bool = False,
) -> ImpossibilityVerdict:
    """
    Check (n, n, m, l) against the known impossibility results for
    (alpha, s)-feasibility.
    """
    alpha, l = RationalUtils.parse(alpha), RationalUtils.parse(l)
    beta = RationalUtils.ceil_mul(alpha, n)
    r = s + 1 + beta - n
    reasons: List[str] = []

    if s == n - beta + 1 and beta % 2 == 1 and beta <= n - 1 and m == 1 and l == Fraction(2, n):
        reasons.append(
            f"s = n-beta+1 = {s} with beta = {beta} odd: no one-message scheme has l = 2/{n}"
        )
    if s > n - beta + 1 and beta <= n - 1 and m == 1 and l <= Fraction(2, n):
        reasons.append(
            f"s = {s} > n-beta+1 = {n - beta + 1}: one-message schemes need l > 2/{n}"
        )
    if cyclic and m == 1 and r > 0 and beta % r != 0 and l <= Fraction(r, n):
        reasons.append(
            f"cyclic lower bound: r = {r} does not divide beta = {beta}, so l = {r}/{n} is unreachable"
        )
    if l == Fraction(1, n) and s > n - beta:
        reasons.append(f"l = 1/{n} tolerates at most s = n-beta = {n - beta} stragglers")

    if reasons:
        logger.debug("(n=%d, alpha=%s, s=%d, m=%d, l=%s) ruled out: %s", n, alpha, s, m, l, reasons)
    return ImpossibilityVerdict(ruled_out=bool(reasons), reasons=reasons)
