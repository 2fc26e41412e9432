"""
Cyclic-style scheme (load d/n, tolerates s1 = n(1-alpha)) against a
pairwise-replication scheme (load 2d/n, tolerates s2 with
s2(s2-1)/(n(n-1)) = 1-alpha) under the four model quadrants.
"""
import logging
import math
from typing import Optional

from pydantic import BaseModel, ConfigDict

from gradcode.delay_models.models import DelayModel
from gradcode.delay_models.order_stats import (
    approximate_order_statistic,
    expected_iteration_delay,
)
from gradcode.errors import ParameterError

logger = logging.getLogger(__name__)


class SchemeComparison(BaseModel):
    model_config = ConfigDict(frozen=True)

    quadrant: str
    s1: float
    s2: float
    s2_floor: int
    points1: float
    points2: float
    delay1: float
    delay2: float
    approx_delay1: float
    approx_delay2: float
    predicate: bool
    predicate_form: str
    derived_predicate: Optional[bool] = None
    alternate_predicate: Optional[bool] = None

    @property
    def exact_favors(self) -> str:
        return "scheme2" if self.delay2 < self.delay1 else "scheme1"


def pairwise_straggler_count(n: int, alpha: float) -> float:
    """Positive root of s(s-1) = n(n-1)(1-alpha)."""
    return (1.0 + math.sqrt(1.0 + 4.0 * n * (n - 1) * (1.0 - alpha))) / 2.0


def scheme1_vs_scheme2(model: DelayModel, n: int, alpha: float, d: int) -> SchemeComparison:
    """
    Expected delays of both schemes and the sufficient condition for the
    second to be faster in the model's quadrant.

    The predicate is True when the second scheme is predicted faster.
    """
    alpha = float(alpha)
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    s1 = n * (1.0 - alpha)
    s2 = pairwise_straggler_count(n, alpha)
    if s2 >= n:
        raise ParameterError(f"s2 = {s2:.3f} is not below n = {n}; alpha is too small")
    points1, points2 = d / n, 2 * d / n
    delta = model.scaling.delta
    tail = 1.0 - alpha

    derived = alternate = None
    if model.scaling.type == "data" and model.family == "pareto":
        q = tail ** (-1.0 / (2.0 * model.rho))
        predicate = model.lam * q * (q - 1.0) > points1 * delta
        form = "lambda·(1-a)^(-1/(2 rho))·((1-a)^(-1/(2 rho)) - 1) > (d/n)·delta"
        alternate = model.lam * q * (tail ** (-1.0 / model.rho) - 1.0) > points1 * delta
    elif model.scaling.type == "data":
        predicate = (model.w / 2.0) * math.log(1.0 / tail) > points1 * delta
        form = "(w/2)·log(1/(1-a)) > (d/n)·delta"
    elif model.family == "pareto":
        predicate = tail ** (-2.0 / model.rho) > 2.0
        form = "(1-a)^(-2/rho) > 2"
        derived = tail ** (-1.0 / (2.0 * model.rho)) > 2.0
    else:
        predicate = False
        form = "never: scheme 1 is faster under server-dependent shifted-exponential delays"

    def approx(s: float, points: float) -> float:
        return float(model.scale(approximate_order_statistic(model, n, s), points))

    result = SchemeComparison(
        quadrant=f"{model.scaling.type}/{model.family}",
        s1=s1,
        s2=s2,
        s2_floor=int(math.floor(s2)),
        points1=points1,
        points2=points2,
        delay1=expected_iteration_delay(model, n, s1, points1),
        delay2=expected_iteration_delay(model, n, s2, points2),
        approx_delay1=approx(s1, points1),
        approx_delay2=approx(s2, points2),
        predicate=predicate,
        predicate_form=form,
        derived_predicate=derived,
        alternate_predicate=alternate,
    )
    logger.debug("scheme comparison %s: %s", result.quadrant, result)
    return result
