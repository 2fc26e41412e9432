"""
Cyclic gradient codes.

Worker W_i holds the r consecutive partitions D_i, ..., D_{i+r-1} (indices
mod n), with r = s + 1 + beta - n and beta = ⌈alpha·n⌉.
"""
import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from gradcode.core.models import GcScheme, SchemeParams, make_row
from gradcode.errors import ConstructionInfeasible
from gradcode.utils import RationalLike, RationalUtils

logger = logging.getLogger(__name__)


def cyclic_window(worker: int, width: int, n: int) -> List[int]:
    """Partitions held by a worker, in window order starting at its own index."""
    return [(worker + t) % n for t in range(width)]


def cyclic_all_ones(
    n: int,
    alpha: RationalLike,
    s: int,
    width: Optional[int] = None,
) -> GcScheme:
    """
    Cyclic assignment with one all-ones row per worker.

    No divisibility condition is checked, so this also yields the instances
    that no cyclic single-message scheme can make feasible.
    """
    params = SchemeParams(n=n, k=n, alpha=RationalUtils.parse(alpha), s=s)
    width = params.r if width is None else width
    if not 1 <= width <= n:
        raise ConstructionInfeasible(f"cyclic window width must lie in [1, {n}], got {width}")
    windows = [cyclic_window(i, width, n) for i in range(n)]
    return GcScheme(
        label="cyclic1",
        params=params,
        assignment=tuple(tuple(sorted(w)) for w in windows),
        rows=tuple((make_row(w),) for w in windows),
    )


def _cyclic_parameters(n: int, alpha: RationalLike, s: int) -> Tuple[SchemeParams, int, int]:
    params = SchemeParams(n=n, k=n, alpha=RationalUtils.parse(alpha), s=s)
    beta, r = params.beta, params.r
    if r <= 0:
        raise ConstructionInfeasible(
            f"r = s+1+beta-n = {r} is not positive for n={n}, alpha={params.alpha}, s={s}"
        )
    return params, beta, r


def build_cyclic1(n: int, alpha: RationalLike, s: int) -> GcScheme:
    """
    Single-message cyclic scheme (m=1, l=r/n).

    Raises:
        ConstructionInfeasible: if r does not divide beta; no cyclic scheme
            with one message per worker exists then.
    """
    params, beta, r = _cyclic_parameters(n, alpha, s)
    if beta % r != 0:
        raise ConstructionInfeasible(
            f"cyclic lower bound: r={r} does not divide beta={beta}, so no "
            f"({params.alpha}, {s})-feasible cyclic scheme with one message per worker exists"
        )
    logger.info("Building cyclic1 scheme n=%d beta=%d r=%d", n, beta, r)
    return cyclic_all_ones(n, params.alpha, s, width=r)


def build_cyclic2(n: int, alpha: RationalLike, s: int) -> GcScheme:
    """
    Two-message cyclic scheme (m=2, l=r/n).

    Each worker sends the sum over its whole window and the sum over the
    first x = beta mod r partitions of the window.
    """
    params, beta, r = _cyclic_parameters(n, alpha, s)
    x = beta % r
    if x == 0:
        raise ConstructionInfeasible(
            f"r={r} divides beta={beta}; use the single-message cyclic scheme"
        )
    if r - x > n - beta:
        raise ConstructionInfeasible(
            f"two-message cyclic scheme needs r - (beta mod r) <= n - beta, got {r - x} > {n - beta}"
        )
    logger.info("Building cyclic2 scheme n=%d beta=%d r=%d x=%d", n, beta, r, x)
    windows = [cyclic_window(i, r, n) for i in range(n)]
    return GcScheme(
        label="cyclic2",
        params=params,
        assignment=tuple(tuple(sorted(w)) for w in windows),
        rows=tuple((make_row(w), make_row(w[:x])) for w in windows),
    )


def cyclic_prefix_length(scheme: GcScheme) -> int:
    """x = beta mod r for a two-message cyclic scheme, 0 otherwise."""
    if scheme.label != "cyclic2":
        return 0
    return scheme.params.beta % scheme.params.r


def cyclic_width(scheme: GcScheme) -> int:
    return len(scheme.assignment[0])


def naive_load_bound(n: int, s: int, alpha: RationalLike) -> Fraction:
    """Load alpha·(s+1)/n of running a full-recovery code on an alpha fraction of the data."""
    return RationalUtils.parse(alpha) * (s + 1) / n
