"""
Combinatorial schemes: one partition per y-subset of workers.

The partition indexed by a y-subset S is replicated on exactly the workers
in S. Partitions are ordered lexicographically by their subsets.
"""
import logging
from itertools import combinations
from math import comb, gcd
from typing import Dict, List, Sequence, Tuple

from gradcode.core.models import GcScheme, SchemeParams, make_row
from gradcode.errors import ConstructionInfeasible
from gradcode.utils import RationalLike, RationalUtils

logger = logging.getLogger(__name__)


def _check_load_inequality(n: int, alpha, s: int, y: int) -> None:
    if not 1 <= y <= n:
        raise ConstructionInfeasible(f"y must lie in [1, {n}], got {y}")
    ratio = RationalUtils.binom_ratio(s, n, y)
    if ratio > 1 - alpha:
        raise ConstructionInfeasible(
            f"C(s,y)/C(n,y) = {RationalUtils.format(ratio)} exceeds 1 - alpha = "
            f"{RationalUtils.format(1 - alpha)} for n={n}, s={s}, y={y}"
        )


def subset_assignment(n: int, y: int) -> Tuple[List[Tuple[int, ...]], List[List[int]]]:
    """
    Return (subsets, per-worker partition lists) for the y-subset layout.
    """
    subsets = list(combinations(range(n), y))
    assignment: List[List[int]] = [[] for _ in range(n)]
    for j, subset in enumerate(subsets):
        for worker in subset:
            assignment[worker].append(j)
    return subsets, assignment


def build_combinatorial(n: int, alpha: RationalLike, s: int, y: int) -> GcScheme:
    """
    Minimum-computation scheme: k = C(n,y), l = y/n, every assigned gradient
    sent on its own (m = C(n-1, y-1)).
    """
    alpha = RationalUtils.parse(alpha)
    _check_load_inequality(n, alpha, s, y)
    subsets, assignment = subset_assignment(n, y)
    logger.info("Building combinatorial scheme n=%d y=%d k=%d", n, y, len(subsets))
    return GcScheme(
        label="combinatorial",
        params=SchemeParams(n=n, k=len(subsets), alpha=alpha, s=s),
        assignment=tuple(tuple(a) for a in assignment),
        rows=tuple(tuple(make_row([j]) for j in a) for a in assignment),
        partition_labels=tuple(subsets),
    )


def _shift(subset: Sequence[int], by: int, n: int) -> Tuple[int, ...]:
    return tuple(sorted((v + by) % n for v in subset))


def designated_representatives(n: int, y: int) -> List[Tuple[int, ...]]:
    """
    Lexicographically first y-subsets containing worker 0, no two of which
    are cyclic shifts of one another. There are C(n-1, y-1)/y of them when
    gcd(n, y) = 1.
    """
    wanted = comb(n - 1, y - 1) // y
    chosen: List[Tuple[int, ...]] = []
    seen = set()
    for rest in combinations(range(1, n), y - 1):
        subset = (0,) + rest
        if subset in seen:
            continue
        chosen.append(subset)
        for by in range(n):
            seen.add(_shift(subset, by, n))
        if len(chosen) == wanted:
            break
    return chosen


def build_balanced(n: int, alpha: RationalLike, s: int, y: int) -> GcScheme:
    """
    Combinatorial assignment with a balanced designated worker per partition.

    Worker W_x is designated for every partition whose subset is a
    representative shifted by x. Each worker sends the sum over its whole
    assignment plus the individual gradients of the partitions it is not
    designated for, so m = 1 + ((y-1)/y)·C(n-1, y-1).
    """
    alpha = RationalUtils.parse(alpha)
    if gcd(n, y) != 1:
        raise ConstructionInfeasible(
            f"balanced designation needs gcd(n, y) = 1, got gcd({n}, {y}) = {gcd(n, y)}"
        )
    _check_load_inequality(n, alpha, s, y)
    subsets, assignment = subset_assignment(n, y)
    index_of: Dict[Tuple[int, ...], int] = {subset: j for j, subset in enumerate(subsets)}

    representatives = designated_representatives(n, y)
    designated: List[List[int]] = [[] for _ in range(n)]
    for x in range(n):
        for subset in representatives:
            designated[x].append(index_of[_shift(subset, x, n)])
    for x in range(n):
        designated[x].sort()

    rows = []
    for i in range(n):
        mine = set(designated[i])
        worker_rows = [make_row(assignment[i])]
        worker_rows.extend(make_row([j]) for j in assignment[i] if j not in mine)
        rows.append(tuple(worker_rows))

    logger.info(
        "Building balanced scheme n=%d y=%d, %d designated partitions per worker",
        n, y, len(representatives),
    )
    return GcScheme(
        label="balanced",
        params=SchemeParams(n=n, k=len(subsets), alpha=alpha, s=s),
        assignment=tuple(tuple(a) for a in assignment),
        rows=tuple(rows),
        designated=tuple(tuple(d) for d in designated),
        partition_labels=tuple(subsets),
    )
