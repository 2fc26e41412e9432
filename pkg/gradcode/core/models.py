from fractions import Fraction
from typing import Dict, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from gradcode.utils import RationalUtils


SchemeLabel = Literal[
    "cyclic1",
    "cyclic2",
    "combinatorial",
    "balanced",
    "tdesign",
    "intermediate",
    "uncoded",
    "frc",
    "cgc",
]

# A transmission row: sorted (partition index, nonzero coefficient) pairs.
Row = Tuple[Tuple[int, Fraction], ...]


def make_row(indices, coef=1) -> Row:
    """Row with the same coefficient on every listed partition."""
    value = Fraction(coef)
    return tuple((int(j), value) for j in sorted(set(indices)))


def row_from_mapping(entries: Dict[int, Fraction]) -> Row:
    return tuple((int(j), Fraction(c)) for j, c in sorted(entries.items()) if c != 0)


# ============================================================================
# Parameters
# ============================================================================

class SchemeParams(BaseModel):
    """(n, k) of a scheme plus its recovery target (alpha, s)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(gt=0)
    k: int = Field(gt=0)
    alpha: Fraction
    s: int = Field(ge=0)

    @field_validator("alpha", mode="before")
    @classmethod
    def _parse_alpha(cls, value):
        return RationalUtils.parse(value)

    @model_validator(mode="after")
    def _check_ranges(self):
        if not (0 < self.alpha <= 1):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.s >= self.n:
            raise ValueError(f"s must be smaller than n (s={self.s}, n={self.n})")
        return self

    @property
    def beta(self) -> int:
        return RationalUtils.ceil_mul(self.alpha, self.n)

    @property
    def r(self) -> int:
        return self.s + 1 + self.beta - self.n

    @property
    def required(self) -> int:
        """Number of partitions the master must recover, ⌈alpha·k⌉."""
        return RationalUtils.ceil_mul(self.alpha, self.k)


# ============================================================================
# Schemes
# ============================================================================

class GcScheme(BaseModel):
    """
    Full description of a gradient code.

    Worker and partition indices are 0-based here; serialized and rendered
    forms are 1-based.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: SchemeLabel
    params: SchemeParams
    assignment: Tuple[Tuple[int, ...], ...]
    rows: Tuple[Tuple[Row, ...], ...]
    designated: Optional[Tuple[Tuple[int, ...], ...]] = None
    partition_labels: Optional[Tuple[Tuple[int, ...], ...]] = None

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def m(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def row_vector(self, worker: int, row: int) -> Dict[int, Fraction]:
        return dict(self.rows[worker][row])

    def dense_row(self, worker: int, row: int) -> list:
        vector = [Fraction(0)] * self.k
        for j, c in self.rows[worker][row]:
            vector[j] = c
        return vector

    def support(self, worker: int, row: int) -> frozenset:
        return frozenset(j for j, c in self.rows[worker][row] if c != 0)

    def singleton_rows(self, worker: int) -> Dict[int, int]:
        """Map partition -> row index for this worker's single-partition rows."""
        found: Dict[int, int] = {}
        for idx, row in enumerate(self.rows[worker]):
            if len(row) == 1 and row[0][1] == 1:
                found.setdefault(row[0][0], idx)
        return found


class LoadReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int
    l: Fraction
    y_per_partition: Tuple[int, ...]
