"""
Schemes from t-(v, p, lambda) designs.

Points are workers and blocks are partitions: the partition for block B is
assigned to the workers in B and every gradient is sent individually.
"""
import logging
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path
from typing import List, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from gradcode.core.models import GcScheme, SchemeParams, make_row
from gradcode.errors import DesignError

logger = logging.getLogger(__name__)


# Blocks of the Hadamard 3-(8,4,1) design, 1-based, in the order that
# numbers the partitions D_1..D_14.
HADAMARD_3_8_4_1_BLOCKS = [
    (1, 2, 5, 6), (3, 4, 7, 8), (1, 3, 5, 7), (2, 4, 6, 8),
    (1, 4, 5, 8), (2, 3, 6, 7), (1, 2, 3, 4), (5, 6, 7, 8),
    (1, 2, 7, 8), (3, 4, 5, 6), (1, 3, 6, 8), (2, 4, 5, 7),
    (1, 4, 6, 7), (2, 3, 5, 8),
]

BUILTIN_DESIGNS = {
    "hadamard-3-8-4-1": (3, 8, 4, 1, HADAMARD_3_8_4_1_BLOCKS),
}


class TDesign(BaseModel):
    """A t-(v, p, lambda) design; blocks are stored 0-based."""

    model_config = ConfigDict(frozen=True)

    t: int = Field(ge=1)
    v: int = Field(ge=1)
    p: int = Field(ge=1)
    lam: int = Field(ge=1)
    blocks: Tuple[Tuple[int, ...], ...]

    def violations(self) -> List[str]:
        found: List[str] = []
        for b, block in enumerate(self.blocks):
            if len(set(block)) != self.p:
                found.append(f"block {b + 1} does not have {self.p} distinct points")
            if any(not 0 <= x < self.v for x in block):
                found.append(f"block {b + 1} has points outside [1, {self.v}]")
        if Fraction(len(self.blocks) * comb(self.p, self.t), comb(self.v, self.t)) != self.lam:
            found.append(
                f"lambda={self.lam} inconsistent with |B|·C(p,t)/C(v,t) for |B|={len(self.blocks)}"
            )
        return found

    def uncovered_t_subset(self):
        """First t-subset whose block count differs from lambda, or None."""
        block_sets = [frozenset(b) for b in self.blocks]
        for subset in combinations(range(self.v), self.t):
            count = sum(1 for b in block_sets if b.issuperset(subset))
            if count != self.lam:
                return subset, count
        return None

    def check(self) -> None:
        problems = self.violations()
        if problems:
            raise DesignError(f"invalid design: {problems[0]}")
        bad = self.uncovered_t_subset()
        if bad is not None:
            subset, count = bad
            raise DesignError(
                f"t-subset {[x + 1 for x in subset]} lies in {count} blocks, expected {self.lam}",
                witness=[x + 1 for x in subset],
            )


def design_from_blocks(t: int, v: int, p: int, lam: int, blocks) -> TDesign:
    """Build a design from 1-based blocks."""
    return TDesign(
        t=t, v=v, p=p, lam=lam,
        blocks=tuple(tuple(x - 1 for x in block) for block in blocks),
    )


def hadamard_design() -> TDesign:
    t, v, p, lam, blocks = BUILTIN_DESIGNS["hadamard-3-8-4-1"]
    return design_from_blocks(t, v, p, lam, blocks)


def load_design(source: Union[str, Path]) -> TDesign:
    """
    Load a design by built-in name or from a file.

    File format: header line "t v p lambda", then one block per line as
    space-separated 1-based point indices. Blank lines and lines starting
    with '#' are ignored.
    """
    if str(source) in BUILTIN_DESIGNS:
        t, v, p, lam, blocks = BUILTIN_DESIGNS[str(source)]
        return design_from_blocks(t, v, p, lam, blocks)
    lines = [
        line.strip()
        for line in Path(source).read_text().splitlines()
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise DesignError(f"design file {source} is empty")
    try:
        t, v, p, lam = (int(x) for x in lines[0].split())
        blocks = [tuple(int(x) for x in line.split()) for line in lines[1:]]
    except ValueError as exc:
        raise DesignError(f"could not parse design file {source}: {exc}") from exc
    return design_from_blocks(t, v, p, lam, blocks)


def dump_design(design: TDesign) -> str:
    lines = [f"{design.t} {design.v} {design.p} {design.lam}"]
    lines.extend(" ".join(str(x + 1) for x in block) for block in design.blocks)
    return "\n".join(lines) + "\n"


def tdesign_alpha(design: TDesign) -> Fraction:
    """Recovery fraction 1 - C(v-t, p)/C(v, p) guaranteed against s = v-t stragglers."""
    return 1 - Fraction(comb(design.v - design.t, design.p), comb(design.v, design.p))


def build_from_tdesign(design: TDesign) -> GcScheme:
    design.check()
    n, k = design.v, len(design.blocks)
    assignment: List[List[int]] = [[] for _ in range(n)]
    for j, block in enumerate(design.blocks):
        for worker in block:
            assignment[worker].append(j)
    alpha = tdesign_alpha(design)
    logger.info(
        "Building t-design scheme from %d-(%d,%d,%d): k=%d alpha=%s",
        design.t, design.v, design.p, design.lam, k, alpha,
    )
    return GcScheme(
        label="tdesign",
        params=SchemeParams(n=n, k=k, alpha=alpha, s=design.v - design.t),
        assignment=tuple(tuple(a) for a in assignment),
        rows=tuple(tuple(make_row([j]) for j in a) for a in assignment),
        partition_labels=tuple(tuple(sorted(block)) for block in design.blocks),
    )
