"""
Literature baselines used by the simulator: forget-s, fractional repetition
codes and conventional full-recovery gradient codes.
"""
import logging
from fractions import Fraction
from itertools import combinations
from math import ceil, comb, log
from typing import List, Optional

from gradcode.constructions.cyclic import cyclic_window
from gradcode.core.models import GcScheme, SchemeParams, make_row, row_from_mapping
from gradcode.errors import ConstructionInfeasible
from gradcode.utils import ExactLinalg

logger = logging.getLogger(__name__)

CGC_VERIFY_LIMIT = 5000
CGC_MAX_ATTEMPTS = 8


# ============================================================================
# Forget-s
# ============================================================================

def build_uncoded_forget_s(n: int, s: int) -> GcScheme:
    """One partition per worker; the master keeps whatever the fastest n-s send."""
    if not 0 <= s < n:
        raise ConstructionInfeasible(f"need 0 <= s < n, got s={s}, n={n}")
    return GcScheme(
        label="uncoded",
        params=SchemeParams(n=n, k=n, alpha=Fraction(n - s, n), s=s),
        assignment=tuple((i,) for i in range(n)),
        rows=tuple((make_row([i]),) for i in range(n)),
    )


# ============================================================================
# Fractional repetition
# ============================================================================

def frc_group_count(n: int, s: int) -> int:
    """
    d = max(1, ⌈log(n·log(n/s)) / log(n/s)⌉), rounded up to a divisor of n.
    """
    if s == 0:
        return 1
    ratio = log(n / s)
    raw = 1.0
    if ratio > 0 and n * ratio > 1:
        raw = log(n * ratio) / ratio
    d = max(1, ceil(raw - 1e-12))
    while n % d != 0:
        d += 1
    return d


def frc_alpha(n: int, s: int, d: int) -> Fraction:
    """Mean recovered fraction under uniformly random stragglers."""
    if s < d:
        return Fraction(1)
    return 1 - Fraction(comb(n - d, s - d), comb(n, s))


def build_frc(n: int, s: int, d: Optional[int] = None) -> GcScheme:
    """
    Fractional repetition code with d replica groups.

    Workers are split into n/d slots of d consecutive workers; every worker
    in slot b holds partitions b·d .. b·d+d-1 and sends their sum. The
    replica group g is the set of workers at offset g within their slot.
    """
    if not 0 <= s < n:
        raise ConstructionInfeasible(f"need 0 <= s < n, got s={s}, n={n}")
    d = frc_group_count(n, s) if d is None else d
    if d < 1 or n % d != 0:
        raise ConstructionInfeasible(f"FRC needs d to divide n, got d={d}, n={n}")
    assignment = []
    for worker in range(n):
        slot = worker // d
        assignment.append(tuple(range(slot * d, slot * d + d)))
    alpha = frc_alpha(n, s, d)
    logger.info("Building FRC n=%d s=%d d=%d alpha=%s", n, s, d, alpha)
    return GcScheme(
        label="frc",
        params=SchemeParams(n=n, k=n, alpha=alpha, s=s),
        assignment=tuple(assignment),
        rows=tuple((make_row(a),) for a in assignment),
    )


def frc_slot_size(scheme: GcScheme) -> int:
    return len(scheme.assignment[0])


# ============================================================================
# Conventional full-recovery code
# ============================================================================

def _evaluation_points(n: int, attempt: int) -> List[Fraction]:
    return [Fraction((attempt + 1) * c + attempt * c * c) for c in range(n)]


def _cgc_rows(n: int, s: int, points: List[Fraction]):
    """
    Row i evaluates the polynomial that vanishes on every point outside
    worker i's window and equals 1 at point i.
    """
    rows = []
    for i in range(n):
        window = cyclic_window(i, s + 1, n)
        outside = [z for z in range(n) if z not in set(window)]
        scale = Fraction(1)
        for z in outside:
            scale *= points[i] - points[z]
        entries = {}
        for c in window:
            value = Fraction(1)
            for z in outside:
                value *= points[c] - points[z]
            entries[c] = value / scale
        rows.append((row_from_mapping(entries),))
    return tuple(rows)


def _spans_ones(scheme: GcScheme, survivors) -> bool:
    dense = [scheme.dense_row(i, 0) for i in survivors]
    return ExactLinalg.solve_combination(dense, [Fraction(1)] * scheme.k) is not None


def build_cgc_full(n: int, s: int) -> GcScheme:
    """
    Full-recovery cyclic code: worker i holds the s+1 partitions of its
    window and any n-s workers span the all-ones vector.
    """
    if not 0 <= s < n:
        raise ConstructionInfeasible(f"need 0 <= s < n, got s={s}, n={n}")
    params = SchemeParams(n=n, k=n, alpha=1, s=s)
    assignment = tuple(tuple(sorted(cyclic_window(i, s + 1, n))) for i in range(n))
    if s == 0:
        return GcScheme(
            label="cgc",
            params=params,
            assignment=assignment,
            rows=tuple((make_row([i]),) for i in range(n)),
        )

    exhaustive = comb(n, s) <= CGC_VERIFY_LIMIT
    for attempt in range(CGC_MAX_ATTEMPTS):
        scheme = GcScheme(
            label="cgc",
            params=params,
            assignment=assignment,
            rows=_cgc_rows(n, s, _evaluation_points(n, attempt)),
        )
        if not exhaustive:
            logger.info("Built CGC n=%d s=%d without exhaustive check (C(n,s) > %d)", n, s, CGC_VERIFY_LIMIT)
            return scheme
        bad = next(
            (
                stragglers
                for stragglers in combinations(range(n), s)
                if not _spans_ones(scheme, [i for i in range(n) if i not in stragglers])
            ),
            None,
        )
        if bad is None:
            logger.info("Built CGC n=%d s=%d (attempt %d)", n, s, attempt + 1)
            return scheme
        logger.warning(
            "CGC evaluation points failed for stragglers %s, retrying", [i + 1 for i in bad]
        )
    raise ConstructionInfeasible(f"no full-recovery coefficients found for n={n}, s={s}")
