from fractions import Fraction

import pytest

from gradcode.constructions import build_frc, build_uncoded_forget_s
from gradcode.core import (
    GcScheme,
    SchemeParams,
    assignment_frame,
    load_report,
    make_row,
    render_table,
    scheme_from_json,
    scheme_to_dict,
    scheme_to_json,
    validate,
)
from gradcode.errors import StructuralError

from .conftest import acceptance_schemes


def _two_worker_scheme(assignment, rows):
    return GcScheme(
        label="uncoded",
        params=SchemeParams(n=2, k=2, alpha=1, s=0),
        assignment=assignment,
        rows=rows,
    )


# ============================================================================
# Parameters
# ============================================================================

def test_params_derive_beta_and_r():
    params = SchemeParams(n=9, k=9, alpha="7/9", s=4)
    assert params.alpha == Fraction(7, 9)
    assert params.beta == 7
    assert params.r == 3
    assert params.required == 7


def test_params_reject_alpha_out_of_range():
    with pytest.raises(ValueError):
        SchemeParams(n=5, k=5, alpha="6/5", s=1)
    with pytest.raises(ValueError):
        SchemeParams(n=5, k=5, alpha=0, s=1)


def test_params_reject_s_not_below_n():
    with pytest.raises(ValueError):
        SchemeParams(n=5, k=5, alpha=1, s=5)


# ============================================================================
# Loads
# ============================================================================

def test_cyclic1_loads(cyclic1_7):
    report = load_report(cyclic1_7)
    assert report.m == 1
    assert report.l == Fraction(3, 7)
    assert report.y_per_partition == (3,) * 7


def test_combinatorial_loads(combinatorial_7):
    report = load_report(combinatorial_7)
    assert (report.m, report.l) == (6, Fraction(2, 7))
    assert sum(report.y_per_partition) == sum(len(a) for a in combinatorial_7.assignment)


def test_uncoded_loads():
    report = load_report(build_uncoded_forget_s(5, 2))
    assert (report.m, report.l) == (1, Fraction(1, 5))


def test_advertised_loads(intermediate_5, tdesign_8):
    assert load_report(intermediate_5).l == Fraction(3, 5)
    assert load_report(tdesign_8).l == Fraction(1, 2)


# ============================================================================
# Validation
# ============================================================================

@pytest.mark.parametrize("scheme", acceptance_schemes(), ids=lambda s: s.label)
def test_constructed_schemes_validate(scheme):
    assert validate(scheme) == []


def test_row_outside_assignment_is_reported():
    scheme = _two_worker_scheme(((0,), (1,)), ((make_row([0, 1]),), (make_row([1]),)))
    violations = validate(scheme)
    assert len(violations) == 1
    assert "W1" in violations[0] and "row 1" in violations[0]


def test_partition_in_no_row_is_reported():
    scheme = _two_worker_scheme(((0, 1), (1,)), ((make_row([0]),), (make_row([1]),)))
    violations = validate(scheme)
    assert len(violations) == 1
    assert "D2" in violations[0]


def test_non_uniform_rows_are_reported():
    scheme = _two_worker_scheme(((0,), (1,)), ((make_row([0]), make_row([0])), (make_row([1]),)))
    assert any("non-uniform" in v for v in validate(scheme))


def test_load_report_rejects_malformed_scheme():
    scheme = _two_worker_scheme(((0,), (1,)), ((make_row([0, 1]),), (make_row([1]),)))
    with pytest.raises(StructuralError) as info:
        load_report(scheme)
    assert info.value.violations


# ============================================================================
# Serialization
# ============================================================================

@pytest.mark.parametrize(
    "scheme", acceptance_schemes() + [build_frc(8, 2)], ids=lambda s: s.label
)
def test_json_round_trip(scheme):
    assert scheme_from_json(scheme_to_json(scheme)) == scheme


def test_json_is_one_based(cyclic2_9):
    payload = scheme_to_dict(cyclic2_9)
    assert payload["alpha"] == "7/9"
    assert payload["assignment"][0] == [1, 2, 3]
    assert payload["rows"][0][1] == [{"idx": 1, "coef": 1}]


def test_cgc_coefficients_serialize_as_fractions():
    scheme = acceptance_schemes()[-1]
    coefs = [
        entry["coef"]
        for worker_rows in scheme_to_dict(scheme)["rows"]
        for row in worker_rows
        for entry in row
    ]
    assert any(isinstance(c, str) and "/" in c for c in coefs)
    assert all(isinstance(c, (int, str)) for c in coefs)


def test_balanced_table_marks_designated_cells(balanced_5):
    frame = assignment_frame(balanced_5)
    assert frame.loc["W1", "D1"] == "1x"
    assert frame.loc["W2", "D1"] == "1v"
    assert frame.loc["W3", "D1"] == ""
    assert (frame.isin(["1x"]).sum(axis=1) == 2).all()


def test_render_table_layout(cyclic1_7):
    text = render_table(cyclic1_7)
    lines = text.splitlines()
    assert lines[0].split() == [f"D{j}" for j in range(1, 8)]
    assert lines[1].split() == ["W1", "1", "1", "1"]
    assert len(lines) == 8
