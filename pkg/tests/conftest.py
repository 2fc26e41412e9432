from fractions import Fraction

import pytest

from gradcode.constructions import (
    IntermediateParams,
    build_balanced,
    build_cgc_full,
    build_combinatorial,
    build_cyclic1,
    build_cyclic2,
    build_from_tdesign,
    build_intermediate,
    build_uncoded_forget_s,
    hadamard_design,
)


@pytest.fixture
def cyclic1_7():
    return build_cyclic1(7, Fraction(6, 7), 3)


@pytest.fixture
def cyclic2_9():
    return build_cyclic2(9, Fraction(7, 9), 4)


@pytest.fixture
def combinatorial_7():
    return build_combinatorial(7, Fraction(6, 7), 3, 2)


@pytest.fixture
def balanced_5():
    return build_balanced(5, Fraction(7, 10), 3, 2)


@pytest.fixture
def tdesign_8():
    return build_from_tdesign(hadamard_design())


@pytest.fixture
def intermediate_5():
    return build_intermediate(5, Fraction(13, 15), 3, IntermediateParams(y=2, delta=3, gammas=(1, 2)))


def acceptance_schemes():
    """The small schemes every family is checked against exhaustively."""
    return [
        build_cyclic1(7, Fraction(6, 7), 3),
        build_cyclic2(9, Fraction(7, 9), 4),
        build_combinatorial(7, Fraction(6, 7), 3, 2),
        build_balanced(5, Fraction(7, 10), 3, 2),
        build_from_tdesign(hadamard_design()),
        build_intermediate(5, Fraction(13, 15), 3, IntermediateParams(y=2, delta=3, gammas=(1, 2))),
        build_uncoded_forget_s(5, 2),
        build_cgc_full(7, 3),
    ]
