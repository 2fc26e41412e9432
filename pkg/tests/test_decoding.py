from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradcode.constructions import build_cgc_full, build_cyclic1, build_frc, build_uncoded_forget_s
from gradcode.decoding import (
    apply_certificate,
    certificate_from_dict,
    certificate_to_dict,
    decode,
    decode_cyclic1,
    decode_cyclic2,
    pack_arcs,
    stopping_straggler_1,
    stopping_straggler_literal,
    verify_certificate,
)
from gradcode.decoding.cyclic import clean_groups
from gradcode.errors import DecodingError, ParameterError


def _assert_sound(scheme, stragglers):
    cert = decode(scheme, stragglers)
    assert verify_certificate(scheme, stragglers, cert) == []
    assert not set(cert.workers_used) & set(stragglers)
    return cert


# ============================================================================
# Straggler walks
# ============================================================================

WALK_STRAGGLERS = {4, 8, 10, 11, 12, 13, 15}


def test_stopping_straggler_walk():
    assert stopping_straggler_1(18, 15, 5, WALK_STRAGGLERS) == 12
    assert stopping_straggler_literal(18, 15, 5, WALK_STRAGGLERS) == 12


def test_stopping_straggler_walk_revisits_group():
    stragglers = {5, 6, 7, 8, 9, 13, 14}
    assert clean_groups(15, 5, stragglers) == []
    assert stopping_straggler_1(18, 15, 5, stragglers) == 8


def test_walk_stops_when_a_group_is_clean():
    assert clean_groups(15, 5, {4, 8}) == [1, 2, 5]
    assert stopping_straggler_1(18, 15, 5, {4, 8}) is None


# ============================================================================
# Cyclic decoders
# ============================================================================

def test_cyclic1_certificate_from_walk():
    scheme = build_cyclic1(18, Fraction(15, 18), 7)
    stragglers = [w - 1 for w in WALK_STRAGGLERS]
    cert = _assert_sound(scheme, stragglers)
    assert cert.workers_used == (1, 6, 13)
    assert cert.recovered_count == 15
    assert not cert.fallback


def test_cyclic1_certificate_after_revisited_group():
    scheme = build_cyclic1(18, Fraction(15, 18), 7)
    cert = _assert_sound(scheme, [w - 1 for w in (5, 6, 7, 8, 9, 13, 14)])
    assert cert.workers_used == (2, 9, 14)
    assert cert.recovered_count == 15
    assert not cert.fallback


def test_cyclic1_small(cyclic1_7):
    cert = _assert_sound(cyclic1_7, [1, 4, 5])
    assert cert.recovered_count >= 6


def test_cyclic1_exhaustive(cyclic1_7):
    for stragglers in combinations(range(7), 3):
        assert _assert_sound(cyclic1_7, stragglers).recovered_count >= 6


@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(min_value=0, max_value=17), max_size=7))
def test_cyclic1_certificates_are_sound(stragglers):
    scheme = build_cyclic1(18, Fraction(15, 18), 7)
    cert = _assert_sound(scheme, sorted(stragglers))
    assert cert.recovered_count >= 15
    assert not cert.fallback


@pytest.mark.parametrize("stragglers", [(1, 3, 4), (1, 3, 4, 8), (0, 1, 2, 3), (5, 6, 7, 8)])
def test_cyclic2_examples(cyclic2_9, stragglers):
    cert = _assert_sound(cyclic2_9, stragglers)
    assert cert.recovered_count >= 7


def test_cyclic2_prefix_row_certificate(cyclic2_9):
    # W1 prefix row plus the full rows of W3 and W6.
    cert = decode_cyclic2(cyclic2_9, [1, 3, 4, 8], fallback=False)
    assert cert.combo == ((0, 1, Fraction(1)), (2, 0, Fraction(1)), (5, 0, Fraction(1)))
    assert cert.recovered_count == 7
    assert verify_certificate(cyclic2_9, [1, 3, 4, 8], cert) == []


# Four-straggler sets of cyclic2(9, 7/9, 4) the two-case rule does not cover.
CASE_RULE_GAPS = {
    (0, 1, 3, 8),
    (0, 1, 4, 8),
    (0, 1, 6, 8),
    (0, 1, 7, 8),
    (0, 2, 7, 8),
    (0, 5, 7, 8),
}


def test_cyclic2_exhaustive(cyclic2_9):
    sets = list(combinations(range(9), 4))
    assert len(sets) == 126
    fallbacks = set()
    for stragglers in sets:
        cert = _assert_sound(cyclic2_9, stragglers)
        assert cert.recovered_count >= 7
        if cert.fallback:
            fallbacks.add(stragglers)
    assert fallbacks == CASE_RULE_GAPS


def test_cyclic2_case_rule_without_fallback(cyclic2_9):
    for stragglers in combinations(range(9), 4):
        if stragglers in CASE_RULE_GAPS:
            with pytest.raises(DecodingError, match="case rule"):
                decode_cyclic2(cyclic2_9, stragglers, fallback=False)
        else:
            cert = decode_cyclic2(cyclic2_9, stragglers, fallback=False)
            assert verify_certificate(cyclic2_9, stragglers, cert) == []
            assert not cert.fallback


def test_fallback_is_logged(cyclic2_9, caplog):
    cert = decode_cyclic2(cyclic2_9, [0, 1, 3, 8])
    assert cert.fallback
    assert "falling back to arc packing" in caplog.text
    assert "[1, 2, 4, 9]" in caplog.text


def test_cyclic1_decoder_rejects_other_family(cyclic2_9):
    with pytest.raises(DecodingError):
        decode_cyclic1(cyclic2_9, [])


def test_pack_arcs_picks_disjoint_pieces():
    pieces = [(0, 3, {"a": 1}), (3, 3, {"b": 1}), (1, 2, {"c": 1})]
    total, chosen = pack_arcs(6, pieces)
    assert total == 6
    assert sorted(p[0] for p in chosen) == [0, 3]


def test_pack_arcs_wraps_around():
    pieces = [(5, 2, {}), (1, 3, {}), (2, 2, {})]
    total, chosen = pack_arcs(6, pieces)
    assert total == 5
    assert sorted(p[0] for p in chosen) == [1, 5]


# ============================================================================
# Individual and balanced decoders
# ============================================================================

def test_combinatorial_recovers_outside_straggler_pairs(combinatorial_7):
    for stragglers in combinations(range(7), 3):
        assert _assert_sound(combinatorial_7, stragglers).recovered_count == 18


def test_no_stragglers_recovers_everything(combinatorial_7):
    assert decode(combinatorial_7, []).recovered_count == 21


def test_tdesign_exhaustive(tdesign_8):
    for stragglers in combinations(range(8), 5):
        assert _assert_sound(tdesign_8, stragglers).recovered_count == 13


def test_intermediate_exhaustive(intermediate_5):
    for stragglers in combinations(range(5), 3):
        assert _assert_sound(intermediate_5, stragglers).recovered_count >= 13


def test_uncoded_keeps_live_workers():
    scheme = build_uncoded_forget_s(5, 2)
    cert = _assert_sound(scheme, [0, 4])
    assert cert.recovered == (1, 2, 3)


def test_balanced_example(balanced_5):
    cert = _assert_sound(balanced_5, [2, 3, 4])
    assert cert.recovered_count == 7
    # Sum rows of the live workers, corrected by individually sent gradients.
    assert {(w, r) for w, r, _ in cert.combo if r == 0} == {(0, 0), (1, 0)}


@pytest.mark.parametrize("size", [0, 1, 2, 3])
def test_balanced_exhaustive(balanced_5, size):
    lost = {0: 0, 1: 0, 2: 1, 3: 3}[size]
    for stragglers in combinations(range(5), size):
        assert _assert_sound(balanced_5, stragglers).recovered_count == 10 - lost


# ============================================================================
# Baselines
# ============================================================================

def test_frc_reports_shortfall():
    scheme = build_frc(8, 2)
    cert = decode(scheme, [0, 1])
    assert cert.recovered_count == 6
    assert cert.shortfall == 2
    assert verify_certificate(scheme, [0, 1], cert, check_required=False) == []
    assert len(verify_certificate(scheme, [0, 1], cert)) == 1


def test_frc_uses_one_replica_per_slot():
    scheme = build_frc(8, 2)
    cert = _assert_sound(scheme, [0, 3])
    assert cert.workers_used == (1, 2, 4, 6)


def test_cgc_exhaustive():
    scheme = build_cgc_full(7, 3)
    for stragglers in combinations(range(7), 3):
        assert _assert_sound(scheme, stragglers).recovered_count == 7


# ============================================================================
# Validation and certificates
# ============================================================================

def test_decode_rejects_bad_straggler_sets(cyclic1_7):
    with pytest.raises(ParameterError, match="tolerance"):
        decode(cyclic1_7, [0, 1, 2, 3])
    with pytest.raises(ParameterError, match="outside"):
        decode(cyclic1_7, [7])


def test_decode_ignores_repeated_indices(cyclic1_7):
    assert decode(cyclic1_7, [2, 2, 5]).stragglers == (2, 5)


def test_certificate_dict_round_trip():
    scheme = build_cgc_full(7, 3)
    cert = decode(scheme, [1, 2, 6])
    payload = certificate_to_dict(cert)
    assert payload["stragglers"] == [2, 3, 7]
    assert certificate_from_dict(payload) == cert


def test_unsound_certificate_is_reported(cyclic1_7):
    cert = decode(cyclic1_7, [0])
    problems = verify_certificate(cyclic1_7, [cert.workers_used[0]], cert)
    assert any("straggler" in p for p in problems)


def test_apply_certificate_matches_direct_sum(combinatorial_7):
    rng = np.random.default_rng(7)
    partials = rng.standard_normal((combinatorial_7.k, 4))
    cert = decode(combinatorial_7, [0, 1, 2])
    expected = partials[list(cert.recovered)].sum(axis=0)
    np.testing.assert_allclose(apply_certificate(combinatorial_7, cert, partials), expected)


def test_apply_certificate_with_rational_coefficients():
    scheme = build_cgc_full(7, 3)
    rng = np.random.default_rng(3)
    partials = rng.standard_normal((7, 3))
    cert = decode(scheme, [0, 3, 5])
    np.testing.assert_allclose(apply_certificate(scheme, cert, partials), partials.sum(axis=0))
