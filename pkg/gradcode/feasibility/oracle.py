"""
Exact (alpha, s)-feasibility oracle.

For a straggler set, the surviving rows are row-reduced over QQ. A 0/1
vector in their span has a 0/1 coefficient on every reduced basis row
(the coefficient equals the vector's value at that row's pivot), so the
search runs over subsets of basis rows. Basis rows that are unit vectors
only touch their own pivot and are always included.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from gradcode.config import get_seed
from gradcode.core.models import GcScheme
from gradcode.errors import OracleTooLarge
from gradcode.utils import ExactLinalg, RationalLike, RationalUtils

logger = logging.getLogger(__name__)

MAX_STRAGGLER_SETS = 10**6
MAX_PARTITIONS = 22
DEFAULT_SAMPLES = 10**4

OracleMode = Literal["exhaustive", "sampled"]


class FeasibilityVerdict(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    feasible: bool
    alpha: Fraction
    s: int
    required: int
    worst_set: Tuple[int, ...]
    worst_recovered: int
    worst_alpha: Fraction
    sets_checked: int
    sampled: bool = False

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "alpha": RationalUtils.format(self.alpha),
            "s": self.s,
            "required": self.required,
            "worst_set": [i + 1 for i in self.worst_set],
            "worst_recovered": self.worst_recovered,
            "worst_alpha": RationalUtils.format(self.worst_alpha),
            "sets_checked": self.sets_checked,
            "sampled": self.sampled,
        }


def _is_unit(row: Sequence[Fraction], pivot: int) -> bool:
    return row[pivot] == 1 and all(v == 0 for c, v in enumerate(row) if c != pivot)


def max_recoverable(scheme: GcScheme, stragglers: Iterable[int]) -> int:
    """Largest weight of a 0/1 vector in the span of the surviving rows."""
    dead = set(stragglers)
    dense = [
        scheme.dense_row(w, r)
        for w in range(scheme.n) if w not in dead
        for r in range(len(scheme.rows[w]))
    ]
    basis, pivots = ExactLinalg.rref(dense, scheme.k)
    if not basis:
        return 0
    covered = {c for row in basis for c, v in enumerate(row) if v != 0}

    free = 0
    base = [Fraction(0)] * scheme.k
    others: List[List[Fraction]] = []
    for row, pivot in zip(basis, pivots):
        if _is_unit(row, pivot):
            free += 1
            base[pivot] = Fraction(1)
        else:
            others.append(row)

    best = free if not others else 0
    if best == len(covered):
        return best
    # Gray-code walk over subsets of the non-unit rows.
    current = list(base)
    for step in range(1, 2 ** len(others) + 1):
        if RationalUtils.is_unit_indicator(current):
            weight = sum(1 for v in current if v == 1)
            if weight > best:
                best = weight
                if best == len(covered):
                    break
        if step == 2 ** len(others):
            break
        flip = (step & -step).bit_length() - 1
        sign = 1 if (step ^ (step >> 1)) >> flip & 1 else -1
        row = others[flip]
        current = [a + sign * b for a, b in zip(current, row)]
    return best


def _score_chunk(args) -> List[Tuple[int, Tuple[int, ...]]]:
    scheme, chunk = args
    return [(max_recoverable(scheme, stragglers), stragglers) for stragglers in chunk]


def _straggler_sets(n: int, s: int, mode: OracleMode, samples: int, seed: int) -> List[Tuple[int, ...]]:
    if mode == "exhaustive":
        return list(combinations(range(n), s))
    rng = np.random.Generator(np.random.Philox(seed))
    return [tuple(sorted(int(w) for w in rng.choice(n, size=s, replace=False))) for _ in range(samples)]


def oracle_feasible(
    scheme: GcScheme,
    alpha: Optional[RationalLike] = None,
    s: Optional[int] = None,
    mode: OracleMode = "exhaustive",
    samples: int = DEFAULT_SAMPLES,
    seed: Optional[int] = None,
    workers: int = 1,
) -> FeasibilityVerdict:
    """
    Decide (alpha, s)-feasibility by exact span computations.

    Args:
        scheme: Scheme to check
        alpha: Recovery fraction (defaults to the scheme's own)
        s: Straggler count (defaults to the scheme's own)
        mode: "exhaustive" over every s-subset or "sampled"
        samples: Number of random s-subsets in sampled mode
        seed: Seed for sampled mode (defaults to GRADCODE_SEED)
        workers: Process count; the verdict does not depend on it

    Returns:
        FeasibilityVerdict with the worst straggler set found

    Raises:
        OracleTooLarge: If exhaustive limits are exceeded
    """
    alpha = scheme.params.alpha if alpha is None else RationalUtils.parse(alpha)
    s = scheme.params.s if s is None else s
    n, k = scheme.n, scheme.k
    required = RationalUtils.ceil_mul(alpha, k)

    if mode == "exhaustive" and (comb(n, s) > MAX_STRAGGLER_SETS or k > MAX_PARTITIONS):
        raise OracleTooLarge(
            f"exhaustive oracle limited to C(n,s) <= {MAX_STRAGGLER_SETS} and k <= {MAX_PARTITIONS} "
            f"(got C({n},{s}) = {comb(n, s)}, k = {k}); rerun with --mode sampled"
        )

    sets = _straggler_sets(n, s, mode, samples, get_seed(seed))
    logger.info("Checking %s scheme against %d straggler sets (%s)", scheme.label, len(sets), mode)

    if workers > 1 and len(sets) > 1:
        size = max(1, len(sets) // (workers * 4))
        chunks = [(scheme, sets[i:i + size]) for i in range(0, len(sets), size)]
        with ProcessPoolExecutor(max_workers=workers) as executor:
            scored = [item for part in executor.map(_score_chunk, chunks) for item in part]
    else:
        scored = _score_chunk((scheme, sets))

    worst_weight, worst_set = min(scored, key=lambda item: item[0])
    verdict = FeasibilityVerdict(
        feasible=worst_weight >= required,
        alpha=alpha,
        s=s,
        required=required,
        worst_set=worst_set,
        worst_recovered=worst_weight,
        worst_alpha=Fraction(worst_weight, k),
        sets_checked=len(sets),
        sampled=mode == "sampled",
    )
    logger.info(
        "%s: worst recovery %d/%d (need %d) at stragglers %s",
        "feasible" if verdict.feasible else "infeasible",
        worst_weight, k, required, [i + 1 for i in worst_set],
    )
    return verdict
