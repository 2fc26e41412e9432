from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradcode.constructions import (
    build_combinatorial,
    build_frc,
    build_uncoded_forget_s,
    cyclic_all_ones,
)
from gradcode.errors import OracleTooLarge
from gradcode.feasibility import (
    check_scheme_bound,
    convexity_claim,
    impossibility_predicates,
    lemma_condition,
    lower_bound,
    max_recoverable,
    oracle_feasible,
    scheme_bound_report,
)

from .conftest import acceptance_schemes


# ============================================================================
# Oracle
# ============================================================================

def test_oracle_on_cyclic1(cyclic1_7):
    verdict = oracle_feasible(cyclic1_7)
    assert verdict.feasible
    assert verdict.worst_alpha == Fraction(6, 7)
    assert verdict.sets_checked == 35
    assert not verdict.sampled


@pytest.mark.parametrize("scheme", acceptance_schemes(), ids=lambda s: s.label)
def test_constructed_schemes_are_feasible(scheme):
    assert oracle_feasible(scheme).feasible


def test_cyclic_windows_fail_when_width_does_not_divide():
    verdict = oracle_feasible(cyclic_all_ones(9, Fraction(7, 9), 4))
    assert not verdict.feasible
    assert verdict.worst_recovered < 7


def test_cyclic_width_two_is_infeasible():
    assert not oracle_feasible(cyclic_all_ones(9, Fraction(7, 9), 3)).feasible


def test_uncoded_alpha_threshold():
    scheme = build_uncoded_forget_s(5, 2)
    assert oracle_feasible(scheme, alpha="3/5").feasible
    verdict = oracle_feasible(scheme, alpha="4/5")
    assert not verdict.feasible
    assert verdict.worst_recovered == 3
    assert verdict.to_dict()["worst_alpha"] == "3/5"


def test_max_recoverable_uses_differences(cyclic2_9):
    # W1 sends D1+D2+D3 and D1; their difference is D2+D3.
    assert max_recoverable(cyclic2_9, range(1, 5)) >= 7


def test_oracle_refuses_large_instances():
    with pytest.raises(OracleTooLarge, match="sampled"):
        oracle_feasible(build_uncoded_forget_s(30, 3))


def test_sampled_mode():
    scheme = build_combinatorial(9, Fraction(7, 9), 4, 2)
    verdict = oracle_feasible(scheme, mode="sampled", samples=40, seed=5)
    assert verdict.sampled
    assert verdict.sets_checked == 40
    assert verdict.feasible
    again = oracle_feasible(scheme, mode="sampled", samples=40, seed=5)
    assert again == verdict


def test_worker_count_does_not_change_verdict(cyclic2_9):
    assert oracle_feasible(cyclic2_9, workers=2) == oracle_feasible(cyclic2_9)


# ============================================================================
# Load bounds
# ============================================================================

def test_lower_bound_linear_scan():
    report = lower_bound(7, 21, 3, Fraction(6, 7))
    assert report.y_min == 2
    assert report.l_min == Fraction(2, 7)
    assert report.naive_load == Fraction(24, 49)


def test_full_recovery_needs_s_plus_one_copies():
    assert lower_bound(7, 7, 3, 1).y_min == 4


@pytest.mark.parametrize(
    "scheme",
    [
        build_combinatorial(7, Fraction(6, 7), 3, 2),
        build_uncoded_forget_s(5, 2),
        build_frc(8, 2),
    ],
    ids=lambda s: s.label,
)
def test_bound_is_tight(scheme):
    report = scheme_bound_report(scheme)
    assert report.satisfied
    assert report.tight


def test_bound_is_tight_for_designs(tdesign_8, balanced_5):
    assert scheme_bound_report(tdesign_8).tight
    assert scheme_bound_report(balanced_5).tight


@pytest.mark.parametrize("scheme", acceptance_schemes(), ids=lambda s: s.label)
def test_constructed_schemes_respect_bound(scheme):
    assert check_scheme_bound(scheme)


def test_lemma_condition():
    assert lemma_condition([2] * 21, 7, 3, 21, Fraction(6, 7))
    assert not lemma_condition([1] * 7, 7, 3, 7, Fraction(6, 7))


def test_convexity_claim_example():
    assert convexity_claim([1, 2, 3, 6], 2)
    assert convexity_claim([4, 4, 4], 3)


@given(
    st.lists(st.integers(min_value=0, max_value=40), min_size=1, max_size=12),
    st.integers(min_value=0, max_value=6),
)
def test_convexity_claim_always_holds(a_list, r):
    assert convexity_claim(a_list, r)


# ============================================================================
# Impossibility
# ============================================================================

def test_odd_beta_rules_out_load_two():
    verdict = impossibility_predicates(7, "5/7", 3, 1, "2/7")
    assert verdict.ruled_out
    assert len(verdict.reasons) == 1


def test_more_stragglers_need_more_than_two():
    assert impossibility_predicates(7, "5/7", 4, 1, "2/7").ruled_out
    assert not impossibility_predicates(7, "5/7", 4, 2, "2/7").ruled_out


def test_cyclic_divisibility():
    assert impossibility_predicates(9, "7/9", 4, 1, "3/9", cyclic=True).ruled_out
    assert not impossibility_predicates(9, "7/9", 4, 1, "3/9").ruled_out


def test_unit_load_tolerates_only_lost_fraction():
    verdict = impossibility_predicates(5, "4/5", 2, 1, "1/5")
    assert verdict.ruled_out
    assert "1/5" in verdict.reasons[0]
    assert not impossibility_predicates(5, "4/5", 1, 1, "1/5").ruled_out
