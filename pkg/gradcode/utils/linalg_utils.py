"""
Exact row reduction over the rationals, backed by sympy's DomainMatrix.
"""
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

DenseRow = List[Fraction]


def _to_qq(value: Fraction):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


class ExactLinalg:
    """Helper class for exact span computations on small rational matrices."""

    @staticmethod
    def to_domain(rows: Sequence[Sequence[Fraction]], width: int) -> DomainMatrix:
        return DomainMatrix(
            [[_to_qq(v) for v in row] for row in rows],
            (len(rows), width),
            QQ,
        )

    @staticmethod
    def rref(rows: Sequence[Sequence[Fraction]], width: int) -> Tuple[List[DenseRow], Tuple[int, ...]]:
        """
        Reduced row echelon form of the given rows.

        Args:
            rows: Dense rows, each of length width
            width: Number of columns

        Returns:
            Tuple of (nonzero reduced rows, pivot columns)
        """
        if not rows:
            return [], ()
        reduced, pivots = ExactLinalg.to_domain(rows, width).rref()
        dense = [[_from_qq(v) for v in row] for row in reduced.to_list()]
        return dense[: len(pivots)], tuple(pivots)

    @staticmethod
    def solve_combination(
        rows: Sequence[Sequence[Fraction]],
        target: Sequence[Fraction],
    ) -> Optional[List[Fraction]]:
        """
        Find coefficients c with sum_i c_i·rows[i] == target.

        Free variables are set to zero. Returns None when target is not in
        the row span.
        """
        width = len(target)
        if not rows:
            return [] if all(v == 0 for v in target) else None
        count = len(rows)
        # Columns of the system are the given rows; the last column is the target.
        system = [
            [rows[i][c] for i in range(count)] + [target[c]]
            for c in range(width)
        ]
        reduced, pivots = ExactLinalg.rref(system, count + 1)
        if count in pivots:
            return None
        coefs = [Fraction(0)] * count
        for row, pivot in zip(reduced, pivots):
            coefs[pivot] = row[count]
        return coefs
