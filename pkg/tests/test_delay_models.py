import json
import math
from fractions import Fraction

import numpy as np
import pytest

from gradcode.delay_models import (
    DelayModel,
    WorkerLoadProfile,
    approximate_order_statistic,
    expected_iteration_delay,
    expected_order_statistic,
    expected_profile_delay,
    harmonic_number,
    harmonic_number_exact,
    load_delay_model,
    monte_carlo_iteration_delay,
    pairwise_straggler_count,
    scheme1_vs_scheme2,
)
from gradcode.errors import ConfigError, InfiniteMeanError, ParameterError


@pytest.fixture
def sexp():
    return DelayModel.shifted_exp(gamma_min=0.5, w=2.0)


# ============================================================================
# Distributions
# ============================================================================

def test_draws_respect_support(sexp):
    rng = np.random.default_rng(0)
    pareto = DelayModel.pareto(lam=0.3, rho=2.0)
    assert pareto.draw(rng, 10_000).min() >= 0.3
    assert sexp.draw(rng, 10_000).min() >= 0.5


def test_scaling_laws():
    data = DelayModel.pareto(lam=1.0, rho=2.0, scaling="data", delta=0.1)
    server = DelayModel.pareto(lam=1.0, rho=2.0, scaling="server", delta=0.1)
    assert data.scale(2.0, 10) == pytest.approx(3.0)
    assert server.scale(2.0, 10) == pytest.approx(20.0)


def test_server_offset_needs_shifted_scaling():
    plain = DelayModel.pareto(lam=1.0, rho=2.0, scaling="server", delta=0.1)
    shifted = DelayModel.pareto(lam=1.0, rho=2.0, scaling="server-shifted", delta=0.1)
    assert plain.scale(2.0, 10) == pytest.approx(plain.with_delta(0.0).scale(2.0, 10))
    assert shifted.scale(2.0, 10) == pytest.approx(20.1)
    assert expected_iteration_delay(shifted, 10, 2, 4) == pytest.approx(
        expected_iteration_delay(plain, 10, 2, 4) + 0.1
    )


def test_pareto_mean():
    model = DelayModel.pareto(lam=2.0, rho=3.0)
    assert expected_order_statistic(model, 1, 0) == pytest.approx(3.0)


def test_shifted_exponential_closed_form(sexp):
    expected = 0.5 + 2.0 * (1 / 3 + 1 / 4 + 1 / 5)
    assert expected_order_statistic(sexp, 5, 2) == pytest.approx(expected)


def test_infinite_mean():
    with pytest.raises(InfiniteMeanError):
        expected_order_statistic(DelayModel.pareto(lam=1.0, rho=1.0), 10, 2)


def test_order_statistic_parameter_range(sexp):
    with pytest.raises(ParameterError):
        expected_order_statistic(sexp, 5, 5)
    with pytest.raises(ParameterError):
        approximate_order_statistic(sexp, 5, 0)


def test_delay_decreases_with_more_stragglers():
    model = DelayModel.pareto(lam=0.001, rho=1.1, delta=5e-7)
    delays = [expected_iteration_delay(model, 100, s, 50) for s in range(0, 40, 5)]
    assert all(a > b for a, b in zip(delays, delays[1:]))


def test_profile_delay(sexp):
    profile = WorkerLoadProfile(n=5, points_per_worker=4, wait_rank=3)
    assert profile.s == 2
    assert expected_profile_delay(sexp, profile) == expected_iteration_delay(sexp, 5, 2, 4)


def test_real_valued_stragglers(sexp):
    low = expected_iteration_delay(sexp, 20, 3, 0)
    high = expected_iteration_delay(sexp, 20, 4, 0)
    assert high < expected_iteration_delay(sexp, 20, 3.5, 0) < low


# ============================================================================
# Harmonic numbers
# ============================================================================

def test_harmonic_number_exact_range():
    assert harmonic_number_exact(4) == Fraction(25, 12)
    assert harmonic_number(30) == float(harmonic_number_exact(30))


def test_harmonic_number_digamma_branch():
    assert harmonic_number(31) == pytest.approx(float(harmonic_number_exact(31)), rel=1e-12)
    assert harmonic_number(2) < harmonic_number(2.5) < harmonic_number(3)
    assert harmonic_number(2.5) == pytest.approx(1.6804, abs=1e-4)


# ============================================================================
# Monte Carlo
# ============================================================================

@pytest.mark.parametrize("n, s", [(50, 10), (100, 19)])
def test_monte_carlo_matches_shifted_exponential(sexp, n, s):
    closed = expected_iteration_delay(sexp, n, s, 0)
    estimate = monte_carlo_iteration_delay(sexp, n, s, 0, trials=100_000, seed=11)
    assert abs(estimate - closed) / closed < 0.01


def test_monte_carlo_matches_pareto():
    model = DelayModel.pareto(lam=1.0, rho=1.5)
    closed = expected_iteration_delay(model, 20, 4, 0)
    estimate = monte_carlo_iteration_delay(model, 20, 4, 0, trials=200_000, seed=3)
    assert abs(estimate - closed) / closed < 0.02


def test_monte_carlo_is_seeded(sexp):
    first = monte_carlo_iteration_delay(sexp, 10, 2, 1.0, trials=1000, seed=4)
    assert first == monte_carlo_iteration_delay(sexp, 10, 2, 1.0, trials=1000, seed=4)


# ============================================================================
# Scheme comparison
# ============================================================================

def test_pairwise_straggler_count():
    assert pairwise_straggler_count(10, 1 - 2 / 90) == pytest.approx(2.0)


@pytest.mark.parametrize(
    "model, quadrant",
    [
        (DelayModel.pareto(lam=0.001, rho=1.5, scaling="data", delta=5e-7), "data/pareto"),
        (DelayModel.shifted_exp(gamma_min=0.01, w=0.01, scaling="data", delta=5e-7), "data/sexp"),
        (DelayModel.pareto(lam=0.001, rho=1.5, scaling="server", delta=0.01), "server/pareto"),
        (DelayModel.shifted_exp(gamma_min=0.01, w=0.01, scaling="server", delta=0.01), "server/sexp"),
    ],
)
def test_comparison_quadrants(model, quadrant):
    result = scheme1_vs_scheme2(model, 100, 0.9, 10_000)
    assert result.quadrant == quadrant
    assert result.s1 == pytest.approx(10.0)
    assert result.points2 == 2 * result.points1
    assert result.s2_floor == math.floor(result.s2)
    assert (result.alternate_predicate is not None) == (quadrant == "data/pareto")
    assert (result.derived_predicate is not None) == (quadrant == "server/pareto")


def test_server_exponential_never_favors_pairs():
    model = DelayModel.shifted_exp(gamma_min=0.01, w=0.01, scaling="server", delta=0.01)
    result = scheme1_vs_scheme2(model, 100, 0.9, 10_000)
    assert result.predicate is False
    assert result.exact_favors == "scheme1"


def test_comparison_rejects_alpha_one(sexp):
    with pytest.raises(ParameterError):
        scheme1_vs_scheme2(sexp, 100, 1.0, 100)


# ============================================================================
# Loading
# ============================================================================

def test_load_delay_model_aliases(tmp_path):
    payload = {"family": "pareto", "lambda": 0.001, "rho": 1.1, "scaling": {"type": "data", "delta": 5e-7}}
    model = load_delay_model(payload)
    assert model.lam == 0.001
    assert model.to_dict()["lambda"] == 0.001
    path = tmp_path / "model.json"
    path.write_text(json.dumps(payload))
    assert load_delay_model(path) == model
    assert load_delay_model(json.dumps(payload)) == model


@pytest.mark.parametrize(
    "source",
    [{"family": "pareto", "rho": 1.5}, {"family": "sexp", "gamma": 1.0}, {"family": "gamma"}, "missing.json"],
)
def test_load_delay_model_errors(source):
    with pytest.raises(ConfigError):
        load_delay_model(source)
