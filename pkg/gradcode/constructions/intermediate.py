"""
Intermediate schemes between the cyclic and combinatorial families.

Partitions are named by length-y lists [c_1..c_y] of worker indices whose
cyclic gaps c_{i+1} - c_i (mod n) are at least gamma_i. The partition goes
to every worker within gamma_i - 1 steps after some c_i, so each partition
is held by exactly delta = sum(gamma) workers.
"""
import logging
from fractions import Fraction
from math import comb, gcd
from typing import Dict, Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from gradcode.core.models import GcScheme, SchemeParams, make_row
from gradcode.errors import ConstructionInfeasible, ParameterError
from gradcode.utils import RationalLike, RationalUtils

logger = logging.getLogger(__name__)


class IntermediateParams(BaseModel):
    """List length y, total gap delta and the per-position gaps gamma."""

    model_config = ConfigDict(frozen=True)

    y: int = Field(ge=1)
    delta: int = Field(ge=1)
    gammas: Tuple[int, ...]

    @property
    def t(self) -> int:
        return gcd(self.delta, self.y)

    @model_validator(mode="after")
    def _check_gammas(self):
        if len(self.gammas) != self.y:
            raise ParameterError(f"need {self.y} gammas, got {len(self.gammas)}")
        if any(g < 1 for g in self.gammas):
            raise ParameterError(f"gammas must be positive, got {list(self.gammas)}")
        if sum(self.gammas) != self.delta:
            raise ParameterError(
                f"gammas {list(self.gammas)} sum to {sum(self.gammas)}, expected delta={self.delta}"
            )
        period = self.y // self.t
        if self.t > 1 and any(
            self.gammas[i] != self.gammas[i % period] for i in range(self.y)
        ):
            raise ParameterError(
                f"gammas {list(self.gammas)} must repeat with period y/t = {period} (t={self.t})"
            )
        return self


def default_gammas(delta: int, y: int) -> Tuple[int, ...]:
    """
    Balanced split of delta/t over y/t positions, larger values last,
    repeated t = gcd(delta, y) times.
    """
    if not 1 <= y <= delta:
        raise ParameterError(f"need 1 <= y <= delta, got y={y}, delta={delta}")
    t = gcd(delta, y)
    base, extra = divmod(delta // t, y // t)
    block = [base] * (y // t - extra) + [base + 1] * extra
    return tuple(block * t)


def intermediate_unrecovered_fraction(n: int, s: int, delta: int, y: int) -> Fraction:
    """Left side y·C(s-delta+y, y) / (n·C(n-delta+y-1, y-1)) of the feasibility inequality."""
    top = comb(s - delta + y, y) if s - delta + y >= 0 else 0
    return Fraction(y * top, n * comb(n - delta + y - 1, y - 1))


def intermediate_loads(n: int, delta: int, y: int) -> Dict[str, object]:
    """Advertised (k, m, l) for given n, delta, y."""
    t = gcd(delta, y)
    return {
        "k": n * comb(n - delta + y - 1, y - 1) // t,
        "m": delta // t * comb(n - 1 - delta + y, y - 1),
        "l": Fraction(delta, n),
    }


def delta_star(n: int, s: int, alpha: RationalLike, y: int) -> Optional[int]:
    """Smallest delta in [y, s] satisfying the feasibility inequality, or None."""
    alpha = RationalUtils.parse(alpha)
    if y < 1:
        raise ParameterError(f"y must be positive, got {y}")
    for delta in range(y, s + 1):
        if intermediate_unrecovered_fraction(n, s, delta, y) <= 1 - alpha:
            return delta
    return None


def _gap_tuples(n: int, gammas: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
    """Gap tuples g with g_i >= gamma_i and sum n, in lexicographic order."""
    y = len(gammas)

    def extend(prefix: List[int], remaining: int, i: int):
        if i == y - 1:
            if remaining >= gammas[i]:
                yield tuple(prefix + [remaining])
            return
        floor_rest = sum(gammas[i + 1:])
        for g in range(gammas[i], remaining - floor_rest + 1):
            yield from extend(prefix + [g], remaining - g, i + 1)

    yield from extend([], n, 0)


def enumerate_lists(n: int, gammas: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    """All 0-based lists ordered by first element, then by gap tuple."""
    lists = []
    for c1 in range(n):
        for gaps in _gap_tuples(n, gammas):
            entries = [c1]
            for g in gaps[:-1]:
                entries.append((entries[-1] + g) % n)
            lists.append(tuple(entries))
    return lists


def _canonical(entries: Tuple[int, ...], step: int) -> Tuple[int, ...]:
    rotations = [entries[i:] + entries[:i] for i in range(0, len(entries), step)]
    return min(rotations)


def _workers_for(entries: Tuple[int, ...], gammas: Tuple[int, ...], n: int) -> List[int]:
    holders = set()
    for c, g in zip(entries, gammas):
        holders.update((c + off) % n for off in range(g))
    return sorted(holders)


def build_intermediate(
    n: int,
    alpha: RationalLike,
    s: int,
    ip: IntermediateParams,
) -> GcScheme:
    alpha = RationalUtils.parse(alpha)
    if ip.delta > s:
        raise ConstructionInfeasible(f"delta={ip.delta} exceeds s={s}")
    if ip.delta >= n:
        raise ConstructionInfeasible(f"delta={ip.delta} must be smaller than n={n}")
    lhs = intermediate_unrecovered_fraction(n, s, ip.delta, ip.y)
    if lhs > 1 - alpha:
        raise ConstructionInfeasible(
            f"y·C(s-delta+y,y)/(n·C(n-delta+y-1,y-1)) = {RationalUtils.format(lhs)} exceeds "
            f"1 - alpha = {RationalUtils.format(1 - alpha)} for n={n}, s={s}, y={ip.y}, delta={ip.delta}"
        )

    step = ip.y // ip.t
    labels: List[Tuple[int, ...]] = []
    seen = set()
    for entries in enumerate_lists(n, ip.gammas):
        name = _canonical(entries, step) if ip.t > 1 else entries
        if name in seen:
            continue
        seen.add(name)
        labels.append(name)

    assignment: List[List[int]] = [[] for _ in range(n)]
    for j, entries in enumerate(labels):
        for worker in _workers_for(entries, ip.gammas, n):
            assignment[worker].append(j)

    logger.info(
        "Building intermediate scheme n=%d y=%d delta=%d gammas=%s: k=%d",
        n, ip.y, ip.delta, list(ip.gammas), len(labels),
    )
    return GcScheme(
        label="intermediate",
        params=SchemeParams(n=n, k=len(labels), alpha=alpha, s=s),
        assignment=tuple(tuple(a) for a in assignment),
        rows=tuple(tuple(make_row([j]) for j in a) for a in assignment),
        partition_labels=tuple(labels),
    )
