"""Gaussian sequence model: data generation, linear estimates, risk and URE.

Observations follow ``Y_i = mu_i + sigma * xi_i`` with ``xi`` standard normal
and a known noise level. A linear estimate is the componentwise product
``h * Y`` for a multiplier vector ``h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class InvalidParameterError(ValueError):
    """A scalar parameter is outside its admissible range."""


class DimensionError(ValueError):
    """Vector lengths do not agree."""


def as_vector(values, name: str = "vector") -> np.ndarray:
    """Return a read-only 1-D float64 copy of ``values`` with finite entries."""
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"{name} must be a non-empty 1-D sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


def check_sigma(sigma: float) -> float:
    sigma = float(sigma)
    if not (sigma > 0.0) or not math.isfinite(sigma):
        raise InvalidParameterError(f"noise level sigma must be positive and finite, got {sigma}")
    return sigma


def _same_length(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"{what}: length mismatch {a.shape[0]} vs {b.shape[0]}")


@dataclass(frozen=True)
class Observation:
    """Noisy observation ``Y`` together with its known noise level."""

    values: np.ndarray
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "values", as_vector(self.values, "observation"))
        object.__setattr__(self, "sigma", check_sigma(self.sigma))

    @property
    def n(self) -> int:
        return self.values.shape[0]


def as_multiplier(h) -> np.ndarray:
    """Validate a single multiplier: entries in [0, 1], nonincreasing."""
    h = as_vector(h, "multiplier")
    if np.any(h < 0.0) or np.any(h > 1.0):
        raise InvalidParameterError("multiplier entries must lie in [0, 1]")
    if np.any(np.diff(h) > 0.0):
        raise InvalidParameterError("multiplier entries must be nonincreasing")
    return h


# -- random streams ---------------------------------------------------------

def replication_rng(seed: int, replication: int) -> np.random.Generator:
    """Philox stream keyed by ``(seed, replication)``.

    The stream for a replication does not depend on which other replications
    were drawn, or in what order, so parallel schedules reproduce serial runs.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(replication),))
    return np.random.Generator(np.random.Philox(ss))


def generate_observation(mu, sigma: float, rng) -> Observation:
    """Draw ``Y = mu + sigma * xi``.

    ``rng`` is a ``numpy.random.Generator`` or an integer seed (used as
    replication 0 of that seed).
    """
    sigma = check_sigma(sigma)
    mu = as_vector(mu, "mean vector")
    if not isinstance(rng, np.random.Generator):
        rng = replication_rng(int(rng), 0)
    xi = rng.standard_normal(mu.shape[0])
    return Observation(mu + sigma * xi, sigma)


# -- estimates and risks ----------------------------------------------------

def linear_estimate(y: Observation, h) -> np.ndarray:
    h = np.asarray(h, dtype=np.float64)
    _same_length(y.values, h, "linear_estimate")
    return h * y.values


def exact_risk(h, mu, sigma: float) -> float:
    """Mean square risk ``||(1-h) mu||^2 + sigma^2 ||h||^2``."""
    sigma = check_sigma(sigma)
    h = np.asarray(h, dtype=np.float64)
    mu = np.asarray(mu, dtype=np.float64)
    _same_length(h, mu, "exact_risk")
    bias = ((1.0 - h) * mu) ** 2
    return math.fsum(bias) + sigma * sigma * math.fsum(h * h)


def ure(y: Observation, h) -> float:
    """Unbiased risk estimate ``||Y - hY||^2 + 2 sigma^2 sum(h) - sigma^2 n``."""
    h = np.asarray(h, dtype=np.float64)
    _same_length(y.values, h, "ure")
    s2 = y.sigma * y.sigma
    resid = ((1.0 - h) * y.values) ** 2
    return math.fsum(resid) + 2.0 * s2 * math.fsum(h) - s2 * y.n


def argmin_tiebreak(values, l1_norms) -> int:
    """Index of the smallest value; ties go to the smaller l1 norm, then index."""
    values = np.asarray(values, dtype=np.float64)
    l1_norms = np.asarray(l1_norms, dtype=np.float64)
    if values.size == 0:
        raise InvalidParameterError("empty candidate set")
    best = values.min()
    tied = np.flatnonzero(values == best)
    if tied.size == 1:
        return int(tied[0])
    return int(tied[np.lexsort((tied, l1_norms[tied]))[0]])


def _members(family) -> np.ndarray:
    members = getattr(family, "members", family)
    members = np.asarray(members, dtype=np.float64)
    if members.ndim != 2 or members.shape[0] == 0:
        raise InvalidParameterError("family must contain at least one multiplier")
    return members


def risk_profile(family, mu, sigma: float) -> np.ndarray:
    """Exact risk of every member, as an array aligned with the family."""
    members = _members(family)
    return np.array([exact_risk(h, mu, sigma) for h in members])


def oracle_risk(family, mu, sigma: float) -> tuple[float, int]:
    """Smallest exact risk over the family and the index attaining it."""
    members = _members(family)
    risks = risk_profile(members, mu, sigma)
    idx = argmin_tiebreak(risks, members.sum(axis=1))
    return float(risks[idx]), idx
