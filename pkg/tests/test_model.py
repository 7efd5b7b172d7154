import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ewagg.families import build_tikhonov, custom_family, polynomial_spectrum
from ewagg.model import (
    DimensionError,
    InvalidParameterError,
    Observation,
    argmin_tiebreak,
    exact_risk,
    generate_observation,
    linear_estimate,
    oracle_risk,
    replication_rng,
    ure,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
unit = st.floats(0.0, 1.0, allow_nan=False)
sigmas = st.floats(1e-3, 1e2, allow_nan=False)


def _pairs(draw_len=st.integers(1, 30)):
    return draw_len.flatmap(lambda n: st.tuples(arrays(np.float64, n, elements=finite),
                                                arrays(np.float64, n, elements=unit)))


# -- generation ---------------------------------------------------------------

def test_vanishing_noise_returns_mean():
    y = generate_observation([1.0, 2.0], 1e-12, 3)
    np.testing.assert_allclose(y.values, [1.0, 2.0], atol=1e-9)


def test_generation_moments():
    n = 100_000
    y = generate_observation(np.zeros(n), 1.0, replication_rng(11, 0))
    assert abs(y.values.mean()) <= 3.0 / math.sqrt(n)
    assert abs(y.values.var(ddof=1) - 1.0) <= 0.05


def test_generation_deterministic():
    a = generate_observation(np.arange(5.0), 0.7, replication_rng(5, 2))
    b = generate_observation(np.arange(5.0), 0.7, replication_rng(5, 2))
    assert a.values.tobytes() == b.values.tobytes()
    c = generate_observation(np.arange(5.0), 0.7, replication_rng(5, 3))
    assert a.values.tobytes() != c.values.tobytes()


@pytest.mark.parametrize("sigma", [0.0, -1.0, math.nan, math.inf])
def test_bad_sigma(sigma):
    with pytest.raises(InvalidParameterError):
        generate_observation([1.0], sigma, 0)


def test_empty_mean_rejected():
    with pytest.raises((InvalidParameterError, DimensionError)):
        generate_observation([], 1.0, 0)


def test_observation_is_read_only():
    y = Observation([1.0, 2.0], 1.0)
    with pytest.raises(ValueError):
        y.values[0] = 5.0


# -- linear estimate, risk, URE -----------------------------------------------

def test_linear_estimate_examples():
    y = Observation([2.0, 4.0], 1.0)
    np.testing.assert_array_equal(linear_estimate(y, [1.0, 1.0]), [2.0, 4.0])
    np.testing.assert_array_equal(linear_estimate(y, [0.0, 0.0]), [0.0, 0.0])
    np.testing.assert_array_equal(linear_estimate(y, [0.5, 0.25]), [1.0, 1.0])


def test_linear_estimate_dimension():
    with pytest.raises(DimensionError):
        linear_estimate(Observation([1.0, 2.0], 1.0), [1.0])


def test_exact_risk_examples():
    mu, sigma = np.array([2.0, 1.0]), 1.0
    # hand evaluation: (0.5*2)^2 + (0.75*1)^2 + 0.25 + 0.0625
    assert exact_risk([0.5, 0.25], mu, sigma) == pytest.approx(1.875, rel=1e-15)
    assert exact_risk([1.0, 1.0], mu, 0.3) == pytest.approx(0.09 * 2)
    assert exact_risk([0.0, 0.0], mu, 0.3) == pytest.approx(5.0)
    assert exact_risk([0.0, 0.0], [0.0, 0.0], 1.0) == 0.0


def test_exact_risk_dimension():
    with pytest.raises(DimensionError):
        exact_risk([0.5], [1.0, 2.0], 1.0)


def test_ure_examples():
    assert ure(Observation([2.0], 1.0), [0.5]) == pytest.approx(1.0)
    y = Observation([3.0, -1.0, 0.5], 0.8)
    assert ure(y, np.ones(3)) == pytest.approx(0.64 * 3)
    assert ure(y, np.zeros(3)) == pytest.approx(9.0 + 1.0 + 0.25 - 0.64 * 3)


@given(_pairs(), sigmas)
def test_risk_matches_direct_formula(pair, sigma):
    mu, h = pair
    direct = np.sum((1 - h) ** 2 * mu**2) + sigma**2 * np.sum(h**2)
    assert exact_risk(h, mu, sigma) == pytest.approx(direct, rel=1e-12, abs=1e-300)
    assert exact_risk(h, mu, sigma) >= 0.0


@given(_pairs(), sigmas)
def test_ure_matches_direct_formula(pair, sigma):
    y, h = pair
    direct = np.sum((y - h * y) ** 2) + 2 * sigma**2 * np.sum(h) - sigma**2 * y.size
    assert ure(Observation(y, sigma), h) == pytest.approx(direct, rel=1e-9, abs=1e-9 * sigma**2 * y.size)


@given(_pairs(), st.floats(-100, 100, allow_nan=False))
def test_linear_estimate_homogeneous(pair, c):
    y, h = pair
    a = linear_estimate(Observation(c * y, 1.0), h)
    b = c * linear_estimate(Observation(y, 1.0), h)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-300)


def test_ure_unbiased_small_scale():
    mu = np.array([1.0, -0.5, 0.2, 0.0])
    h = np.array([0.9, 0.6, 0.3, 0.1])
    sigma = 0.5
    vals = np.array([ure(generate_observation(mu, sigma, replication_rng(1, r)), h) for r in range(4000)])
    se = vals.std(ddof=1) / math.sqrt(vals.size)
    assert abs(vals.mean() - exact_risk(h, mu, sigma)) <= 4 * se


# -- argmin and oracle --------------------------------------------------------

def test_tiebreak_prefers_small_l1_then_index():
    assert argmin_tiebreak([1.0, 1.0, 2.0], [3.0, 1.0, 0.0]) == 1
    assert argmin_tiebreak([1.0, 1.0], [2.0, 2.0]) == 0


def test_oracle_two_point_family():
    fam = custom_family([np.zeros(4), np.ones(4)])
    assert oracle_risk(fam, np.zeros(4), 1.0) == (0.0, 0)
    risk, idx = oracle_risk(fam, np.full(4, 3.0), 1.0)
    assert idx == 1 and risk == pytest.approx(4.0)


def test_oracle_matches_exhaustive_scan():
    n = 100
    fam = build_tikhonov(polynomial_spectrum(n, 2.0), np.geomspace(1e2, 1e-6, 50))
    mu = 1.0 / np.arange(1, n + 1)
    risks = [exact_risk(h, mu, 0.1) for h in fam.members]
    risk, idx = oracle_risk(fam, mu, 0.1)
    assert idx == int(np.argmin(risks)) and risk == risks[idx]
