"""
Exact-arithmetic helpers used across constructions, decoders and bounds.
"""
from fractions import Fraction
from math import comb
from typing import Any, Iterable, Union

RationalLike = Union[Fraction, int, float, str]


class RationalUtils:
    """Helper class for parsing, formatting and comparing exact rationals."""

    @staticmethod
    def parse(value: RationalLike) -> Fraction:
        """
        Parse a rational from "p/q", an integer, a decimal string or a number.

        Args:
            value: The value to parse. Floats are converted through their
                shortest decimal representation, so 0.87 becomes 87/100.

        Returns:
            The exact Fraction

        Raises:
            ValueError: If the value cannot be parsed
        """
        if isinstance(value, Fraction):
            return value
        if isinstance(value, bool):
            raise ValueError(f"Not a rational: {value!r}")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(repr(value))
        text = str(value).strip()
        if not text:
            raise ValueError("Empty rational")
        return Fraction(text)

    @staticmethod
    def format(value: Fraction) -> str:
        """Format as "p/q" (or "p" when integral)."""
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    @staticmethod
    def ceil_mul(alpha: Fraction, count: int) -> int:
        """Return ⌈alpha·count⌉ exactly."""
        product = Fraction(alpha) * count
        return -((-product.numerator) // product.denominator)

    @staticmethod
    def binom_ratio(top_n: int, bottom_n: int, y: int) -> Fraction:
        """
        Return C(top_n, y) / C(bottom_n, y) as an exact Fraction.

        C(a, y) is zero whenever y > a.
        """
        return Fraction(comb(top_n, y), comb(bottom_n, y))

    @staticmethod
    def coef_to_json(value: Fraction) -> Any:
        """Integral coefficients serialize as ints, others as "p/q" strings."""
        value = Fraction(value)
        if value.denominator == 1:
            return value.numerator
        return RationalUtils.format(value)

    @staticmethod
    def coef_from_json(value: Any) -> Fraction:
        return RationalUtils.parse(value)

    @staticmethod
    def is_unit_indicator(values: Iterable[Fraction]) -> bool:
        """True when every value is exactly 0 or 1."""
        return all(v == 0 or v == 1 for v in values)
