"""
Expected and simulated iteration delays.

An iteration ends when the (n-s)-th fastest worker finishes, so its
expected length is the (n-s)-th order statistic of n completion times.
"""
import logging
import math
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from scipy.special import digamma, gammaln

from gradcode.config import get_seed
from gradcode.delay_models.models import DelayModel, WorkerLoadProfile
from gradcode.errors import InfiniteMeanError, ParameterError

logger = logging.getLogger(__name__)

EXACT_HARMONIC_LIMIT = 30
MC_BATCH_CELLS = 2_000_000


def harmonic_number_exact(n: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))


def harmonic_number(n: Union[int, float]) -> float:
    """
    H_n, exact for integers up to 30 and digamma(n+1) + Euler's constant
    otherwise (which also covers real n).
    """
    if float(n).is_integer() and 0 <= n <= EXACT_HARMONIC_LIMIT:
        return float(harmonic_number_exact(int(n)))
    return float(digamma(float(n) + 1.0) + np.euler_gamma)


def expected_order_statistic(model: DelayModel, n: int, s: float) -> float:
    """E of the (n-s)-th smallest of n raw delays X."""
    if not 0 <= s < n:
        raise ParameterError(f"need 0 <= s < n, got s={s}, n={n}")
    if model.family == "pareto":
        if model.rho <= 1:
            raise InfiniteMeanError(f"pareto tail index rho={model.rho} <= 1 has an infinite mean")
        inv = 1.0 / model.rho
        log_ratio = gammaln(n + 1) - gammaln(s + 1) + gammaln(s + 1 - inv) - gammaln(n + 1 - inv)
        return float(model.lam * math.exp(log_ratio))
    return model.gamma_min + model.w * (harmonic_number(n) - harmonic_number(s))


def expected_iteration_delay(model: DelayModel, n: int, s: float, points: float) -> float:
    """
    Closed-form expected iteration time with the model's scaling law.

    Args:
        model: Delay model
        n: Number of workers
        s: Stragglers ignored per iteration (real values allowed)
        points: Gradients computed per worker

    Returns:
        Expected completion time of the (n-s)-th fastest worker

    Raises:
        InfiniteMeanError: If the Pareto tail index is at most 1
    """
    return float(model.scale(expected_order_statistic(model, n, s), points))


def expected_profile_delay(model: DelayModel, profile: WorkerLoadProfile) -> float:
    return expected_iteration_delay(model, profile.n, profile.s, profile.points_per_worker)


def approximate_order_statistic(model: DelayModel, n: int, s: float) -> float:
    """Large-n approximations lambda·(n/s)^(1/rho) and gamma + w·log(n/s)."""
    if s <= 0:
        raise ParameterError("approximation needs s > 0")
    if model.family == "pareto":
        return model.lam * (n / s) ** (1.0 / model.rho)
    return model.gamma_min + model.w * math.log(n / s)


def sample_completion(model: DelayModel, points, rng: np.random.Generator, size=None):
    """One draw (or an array of draws) of a worker's completion time."""
    return model.scale(model.draw(rng, size), points)


def monte_carlo_iteration_delay(
    model: DelayModel,
    n: int,
    s: int,
    points: float,
    trials: int = 100_000,
    seed: Optional[int] = None,
) -> float:
    """Empirical mean of the (n-s)-th order statistic, simulated in batches."""
    if not 0 <= s < n:
        raise ParameterError(f"need 0 <= s < n, got s={s}, n={n}")
    rng = np.random.Generator(np.random.Philox(get_seed(seed)))
    rank = n - s - 1
    batch = max(1, MC_BATCH_CELLS // n)
    total, done = 0.0, 0
    while done < trials:
        rows = min(batch, trials - done)
        times = sample_completion(model, points, rng, size=(rows, n))
        total += float(np.partition(times, rank, axis=1)[:, rank].sum())
        done += rows
    logger.debug("Monte Carlo delay over %d trials: %.6g", trials, total / trials)
    return total / trials
