"""URE minimizer, exponentially weighted aggregate and related diagnostics."""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .families import MultiplierFamily, PriorWeights
from .model import DimensionError, InvalidParameterError, Observation, argmin_tiebreak

# smallest temperature covered by the oracle inequalities
THEORY_BETA = 4.0


class TheoryCoverageWarning(UserWarning):
    """Temperature below the range where the risk bounds are proved."""


class StaleProfileError(ValueError):
    """A weight profile is used with data it was not computed from."""


def _fingerprint(y: Observation, family: MultiplierFamily) -> str:
    d = hashlib.blake2b(digest_size=16)
    d.update(np.float64(y.sigma).tobytes())
    d.update(y.values.tobytes())
    d.update(family.members.tobytes())
    return d.hexdigest()


def _check_family(y: Observation, family: MultiplierFamily) -> None:
    if len(family) == 0:
        raise InvalidParameterError("empty family")
    if family.n != y.n:
        raise DimensionError(f"family dimension {family.n} does not match observation length {y.n}")


def ure_values(y: Observation, family: MultiplierFamily) -> np.ndarray:
    """URE of every member, vectorized over the family."""
    _check_family(y, family)
    s2 = y.sigma**2
    resid = ((1.0 - family.members) * y.values[None, :]) ** 2
    return resid.sum(axis=1) + 2.0 * s2 * family.l1 - s2 * y.n


def ure_minimizer(y: Observation, family: MultiplierFamily) -> tuple[np.ndarray, int]:
    """Plug-in estimate at the URE argmin (ties go to the smaller l1 norm)."""
    r = ure_values(y, family)
    idx = argmin_tiebreak(r, family.l1)
    return family.members[idx] * y.values, idx


# -- exponential weights ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WeightProfile:
    log_weights: np.ndarray  # shifted so the largest entry is 0
    weights: np.ndarray
    beta: float
    sigma: float
    ure_values: np.ndarray
    argmin_index: int
    fingerprint: str = ""


def weights_from_ure(ure, log_priors, beta: float, sigma: float) -> tuple[np.ndarray, np.ndarray]:
    """Normalized weights ``pi exp(-ure / (2 beta sigma^2))`` and shifted logs.

    Works in the log domain with a max-shift, so URE spreads far beyond the
    exponent range of doubles are harmless. Members with zero prior get
    log-weight ``-inf`` and weight 0.
    """
    ure = np.asarray(ure, dtype=np.float64)
    log_priors = np.asarray(log_priors, dtype=np.float64)
    if ure.shape != log_priors.shape:
        raise DimensionError("URE values and priors differ in length")
    beta = float(beta)
    if not beta > 0:
        raise InvalidParameterError("beta must be positive")
    if not sigma > 0:
        raise InvalidParameterError("sigma must be positive")
    scale = 2.0 * beta * sigma * sigma
    logits = log_priors - (ure - ure.min()) / scale
    logits = logits - logits.max()
    w = np.exp(logits)
    w /= w.sum()
    return w, logits


def exp_weights(y: Observation, family: MultiplierFamily, priors: PriorWeights,
                beta: float | None = None) -> WeightProfile:
    """Posterior weights of the members given ``y``; ``beta`` defaults to ``priors.beta``."""
    _check_family(y, family)
    if len(priors) != len(family):
        raise DimensionError("priors do not match family")
    beta = priors.beta if beta is None else float(beta)
    if beta < THEORY_BETA:
        warnings.warn(f"beta={beta:g} is below {THEORY_BETA:g}; risk bounds not covered",
                      TheoryCoverageWarning, stacklevel=2)
    r = ure_values(y, family)
    w, logits = weights_from_ure(r, priors.log_weights, beta, y.sigma)
    return WeightProfile(
        log_weights=logits,
        weights=w,
        beta=beta,
        sigma=y.sigma,
        ure_values=r,
        argmin_index=argmin_tiebreak(r, family.l1),
        fingerprint=_fingerprint(y, family),
    )


@dataclass(frozen=True, eq=False)
class AggregateResult:
    estimate: np.ndarray
    profile: WeightProfile
    divergence: float
    weighted_ure: float


def _check_profile(y: Observation, family: MultiplierFamily, profile: WeightProfile) -> None:
    if profile.fingerprint != _fingerprint(y, family):
        raise StaleProfileError("weight profile was computed from different data or family")


def aggregate(y: Observation, family: MultiplierFamily, profile: WeightProfile) -> AggregateResult:
    """Weighted average of the member estimates, with its divergence and weighted URE."""
    _check_profile(y, family, profile)
    h_bar = profile.weights @ family.members
    return AggregateResult(
        estimate=h_bar * y.values,
        profile=profile,
        divergence=aggregate_divergence(y, family, profile),
        weighted_ure=float(profile.weights @ profile.ure_values),
    )


def aggregate_divergence(y: Observation, family: MultiplierFamily, profile: WeightProfile) -> float:
    """``sum_i d mu_bar_i / d Y_i`` in closed form.

    Differentiating the weights gives
    ``d mu_bar_i/dY_i = h_bar_i - Y_i^2 / (beta sigma^2) * Cov_w((1 - h_i)^2, h_i)``.
    """
    _check_profile(y, family, profile)
    w = profile.weights
    h = family.members
    one_minus_sq = (1.0 - h) ** 2
    h_bar = w @ h
    cov = w @ (one_minus_sq * h) - (w @ one_minus_sq) * h_bar
    scale = profile.beta * profile.sigma**2
    return float(np.sum(h_bar - y.values**2 * cov / scale))


def log_normalizer_excess(ure, log_priors, beta: float, sigma: float) -> float:
    """``log sum_g pi^g exp(-(ure_g - min ure) / (2 beta sigma^2))``; nonnegative for the ordered priors."""
    ure = np.asarray(ure, dtype=np.float64)
    return float(logsumexp(np.asarray(log_priors) - (ure - ure.min()) / (2.0 * beta * sigma * sigma)))


# -- diagnostics ----------------------------------------------------------------

def h_eps_index(ure, sq_norms, beta: float, sigma: float, eps: float,
                hat: int | None = None) -> int:
    """Largest member whose URE excess stays within the ``eps`` slack.

    Qualifying members satisfy
    ``ure_h - min ure <= 2 beta eps sigma^2 (|h|^2 - |h_hat|^2) + 2 beta sigma^2``;
    the URE minimizer always qualifies.
    """
    if not (0.0 < eps < 1.0 / (5.0 * beta)):
        raise InvalidParameterError(f"eps must lie in (0, 1/(5 beta)) = (0, {1 / (5 * beta):g})")
    ure = np.asarray(ure, dtype=np.float64)
    sq_norms = np.asarray(sq_norms, dtype=np.float64)
    if hat is None:
        hat = int(np.argmin(ure))
    s2 = sigma * sigma
    for j in range(ure.shape[0] - 1, hat - 1, -1):
        slack = 2.0 * beta * eps * s2 * (sq_norms[j] - sq_norms[hat]) + 2.0 * beta * s2
        if ure[j] - ure[hat] <= slack:
            return j
    return hat


def h_eps_hat(y: Observation, family: MultiplierFamily, beta: float, eps: float) -> int:
    r = ure_values(y, family)
    hat = argmin_tiebreak(r, family.l1)
    return h_eps_index(r, family.sq_norms, beta, y.sigma, eps, hat=hat)


def entropy_term(profile: WeightProfile, priors: PriorWeights) -> float:
    """``sum_h w^h log(pi^h / w^h)`` with zero weights contributing nothing."""
    w = profile.weights
    if w.shape != priors.weights.shape:
        raise DimensionError("profile and priors differ in length")
    mask = w > 0
    return float(np.sum(w[mask] * (priors.log_weights[mask] - np.log(w[mask]))))


def kl_divergence(lambda_weights, priors: PriorWeights) -> float:
    """Kullback-Leibler divergence of a simplex vector from the priors (unnormalized)."""
    lam = np.asarray(lambda_weights, dtype=np.float64)
    if lam.shape != priors.weights.shape:
        raise DimensionError("lambda and priors differ in length")
    if np.any(lam < 0) or not math.isclose(lam.sum(), 1.0, rel_tol=0, abs_tol=1e-9):
        raise InvalidParameterError("lambda must lie on the probability simplex")
    mask = lam > 0
    if np.any(priors.weights[mask] == 0):
        return math.inf
    return float(np.sum(lam[mask] * (np.log(lam[mask]) - priors.log_weights[mask])))
