import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ewagg.families import (
    DuplicateMemberError,
    Spectrum,
    StabilityError,
    UnorderedFamilyError,
    band_prior_mass,
    build_cutoff,
    build_landweber,
    build_pinsker,
    build_tikhonov,
    check_condition,
    check_prior_identity,
    custom_family,
    polynomial_spectrum,
    prior_sum_bound,
    prior_weights,
    validate_ordered,
)
from ewagg.model import InvalidParameterError


def spec(*lam):
    return Spectrum(np.array(lam, dtype=float), "explicit")


@st.composite
def tikhonov_families(draw, max_n=30, max_size=20):
    n = draw(st.integers(1, max_n))
    power = draw(st.sampled_from([2.0, 4.0]))
    size = draw(st.integers(1, max_size))
    lo = draw(st.floats(-8, 0))
    hi = draw(st.floats(lo + 0.5, 3))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return build_tikhonov(polynomial_spectrum(n, power), np.geomspace(10**hi, 10**lo, size))


@st.composite
def cutoff_families(draw, max_n=40):
    n = draw(st.integers(1, max_n))
    cuts = sorted(draw(st.sets(st.integers(0, n), min_size=1, max_size=n + 1)))
    return build_cutoff(n, cuts)


any_family = st.one_of(tikhonov_families(), cutoff_families())
betas = st.floats(0.5, 50.0)


# -- spectra and builders -----------------------------------------------------

def test_spectrum_must_be_ascending_and_nonnegative():
    with pytest.raises(InvalidParameterError):
        spec(2.0, 1.0)
    with pytest.raises(InvalidParameterError):
        spec(-1.0, 1.0)


def test_polynomial_spectrum():
    np.testing.assert_array_equal(polynomial_spectrum(4, 2.0).eigenvalues, [1, 4, 9, 16])


def test_tikhonov_examples():
    np.testing.assert_allclose(build_tikhonov(spec(1, 2), [1.0]).members[0], [0.5, 1 / 3], rtol=1e-15)
    fam = build_tikhonov(polynomial_spectrum(10, 3.0), [1e-12])
    assert np.all(fam.members >= 1 - 1e-8)


def test_tikhonov_degenerate_spectrum_is_duplicate():
    with pytest.raises(DuplicateMemberError):
        build_tikhonov(spec(0, 0, 0), [2.0, 1.0])


def test_tikhonov_orders_members_from_large_alpha():
    fam = build_tikhonov(spec(1, 2, 3), [0.1, 1.0, 10.0])
    np.testing.assert_array_equal(fam.params, [10.0, 1.0, 0.1])
    assert np.all(np.diff(fam.l1) > 0)


@pytest.mark.parametrize("grid", [[1.0, 2.0, 1.5], [1.0, -1.0], [1.0, 1.0], []])
def test_bad_alpha_grid(grid):
    with pytest.raises(InvalidParameterError):
        build_tikhonov(spec(1, 2), grid)


def test_pinsker_examples():
    fam = build_pinsker(spec(1, 2), [0.6, 0.4])
    np.testing.assert_allclose(fam.members, [[0.4, 0.0], [0.6, 0.2]], rtol=1e-15)
    zero = build_pinsker(spec(1, 2), [1.0])
    np.testing.assert_array_equal(zero.members[0], [0.0, 0.0])


def test_cutoff_examples():
    fam = build_cutoff(4, [0, 2, 4])
    np.testing.assert_array_equal(fam.members, [[0, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 1]])


@pytest.mark.parametrize("cuts", [[5], [-1], [2, 2], [3, 1], [1.5]])
def test_cutoff_bad_cuts(cuts):
    with pytest.raises(InvalidParameterError):
        build_cutoff(4, cuts)


def test_landweber_examples():
    np.testing.assert_allclose(build_landweber(spec(0.5), 1.0, [2]).members[0], [0.75])
    assert build_landweber(spec(1.0), 1.0, [1]).members[0, 0] == 1.0
    fam = build_landweber(spec(0.0, 0.5, 1.0), 1.0, [1, 2, 3])
    # zero eigenvalue never moves; it sits in the last coordinate
    assert np.all(fam.members[:, -1] == 0.0)
    assert validate_ordered(fam).valid


def test_landweber_stability():
    with pytest.raises(StabilityError):
        build_landweber(spec(0.5, 3.0), 1.0, [2])


# -- ordering -----------------------------------------------------------------

def test_crossing_members_witness():
    verdict = validate_ordered(np.array([[1.0, 0.0], [0.5, 0.5]]))
    assert not verdict.valid and verdict.rule == "total_order"
    assert verdict.members == (0, 1) and 1 in verdict.coordinates
    with pytest.raises(UnorderedFamilyError):
        custom_family([[1.0, 0.0], [0.5, 0.5]])


def test_range_violation():
    verdict = validate_ordered(np.array([[1.2, 0.0]]))
    assert not verdict.valid and verdict.rule == "range"
    with pytest.raises(UnorderedFamilyError):
        custom_family([[1.2, 0.0]])


def test_monotone_violation():
    verdict = validate_ordered(np.array([[0.2, 0.5]]))
    assert not verdict.valid and verdict.rule == "monotone"


def test_near_duplicates_merged_with_warning():
    with pytest.warns(RuntimeWarning):
        fam = custom_family([[0.5, 0.5], [0.5 + 1e-12, 0.5], [1.0, 1.0]])
    assert len(fam) == 2 and fam.notes


@given(any_family)
def test_generated_families_are_ordered(fam):
    assert validate_ordered(fam).valid
    m = fam.members
    assert np.all(m[1:] >= m[:-1])


# -- priors -------------------------------------------------------------------

def test_prior_examples():
    fam = custom_family([[0.0, 0.0], [1.0, 1.0]])
    pw = prior_weights(fam, 2.0)
    assert pw.weights[-1] == 1.0
    assert pw.weights[0] == pytest.approx(1 - math.exp(-1), rel=1e-15)
    assert pw.weights[0] == pytest.approx(0.632120558, abs=1e-9)


def test_prior_rejects_bad_beta():
    fam = custom_family([[0.0, 0.0], [1.0, 1.0]])
    with pytest.raises(InvalidParameterError):
        prior_weights(fam, 0.0)


def test_single_member_identity_exact():
    fam = custom_family([[0.3, 0.1]])
    assert check_prior_identity(prior_weights(fam, 4.0), fam) == 0.0


def test_tikhonov_identity_50_members():
    fam = build_tikhonov(polynomial_spectrum(100, 2.0), np.geomspace(1e2, 1e-6, 50))
    assert check_prior_identity(prior_weights(fam, 4.0), fam) <= 1e-12


@given(any_family, betas)
def test_prior_identity_property(fam, beta):
    pw = prior_weights(fam, beta)
    assert check_prior_identity(pw, fam) <= 1e-12
    assert pw.weights[-1] == 1.0
    assert np.all((pw.weights > 0) | (np.diff(np.append(fam.l1, np.inf)) == 0))
    assert np.all(pw.weights <= 1.0)


@given(any_family, betas)
def test_prior_depends_only_on_l1_gaps(fam, beta):
    # a zero coordinate appended to every member changes nothing
    padded = custom_family(np.hstack([fam.members, np.zeros((len(fam), 1))]))
    # the norms differ only by summation order; a prior's relative error is at most
    # the gap's absolute error over the gap itself
    gaps = np.diff(fam.l1)
    rtol = 16 * np.finfo(float).eps * (1 + fam.l1.max()) / max(gaps[gaps > 0].min(initial=np.inf), 1e-300)
    np.testing.assert_allclose(prior_weights(padded, beta).weights, prior_weights(fam, beta).weights,
                               rtol=max(rtol, 1e-15))


def test_identity_oracle_direct():
    # independent evaluation without the shift: sum_{g>=h} pi^g e^{-|g|/beta} = e^{-|h|/beta}
    fam = build_cutoff(6, [0, 1, 3, 6])
    beta = 3.0
    pw = prior_weights(fam, beta)
    l1 = fam.l1
    for j in range(len(fam)):
        lhs = sum(pw.weights[k] * math.exp(-l1[k] / beta) for k in range(j, len(fam)))
        assert lhs == pytest.approx(math.exp(-l1[j] / beta), rel=1e-14)


# -- condition constants -------------------------------------------------------

def test_cutoff_condition_constants():
    n = 8
    rep = check_condition(build_cutoff(n, range(1, n + 1)))
    assert rep.k_lower == 1.0 and rep.k_upper == 2.0 and rep.upper_witness == 0
    with_zero = check_condition(build_cutoff(n, range(0, n + 1)))
    assert with_zero.excluded == (0,) and with_zero.k_upper == 2.0 and with_zero.satisfied


def test_singleton_condition():
    rep = check_condition(custom_family([[1.0, 0.5]]))
    assert rep.satisfied


def _brute_lower(m):
    best = math.inf
    for a in range(len(m)):
        for b in range(a + 1, len(m)):
            best = min(best, np.sum(m[b] ** 2 - m[a] ** 2) / np.sum(m[b] - m[a]))
    return best


@settings(max_examples=60)
@given(tikhonov_families(max_n=20, max_size=10))
def test_condition_consecutive_equals_all_pairs(fam):
    assume(len(fam) >= 2)
    fast = check_condition(fam)
    slow = check_condition(fam, all_pairs=True)
    assert fast.k_lower == pytest.approx(slow.k_lower, rel=1e-12)
    assert fast.k_lower == pytest.approx(_brute_lower(fam.members), rel=1e-10)


@given(any_family, betas)
def test_prior_sum_bound_shape(fam, beta):
    assume(len(fam) >= 2)
    rep = check_condition(fam)
    partial, bound = prior_sum_bound(fam, prior_weights(fam, beta), rep)
    assert np.all(partial <= bound * (1 + 1e-12) + 1e-12)


@given(any_family, betas)
def test_band_mass_positive(fam, beta):
    assert np.all(band_prior_mass(fam, prior_weights(fam, beta)) > 0)
