"""Ordered multiplier families, prior weights and family regularity checks.

A family is stored as a ``(|H|, n)`` array whose rows increase componentwise,
so ``members[0]`` is ``h_min`` and ``members[-1]`` is ``h_max``; the successor
``h+`` of a member is simply the next row.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .model import DimensionError, InvalidParameterError

KINDS = ("tikhonov", "pinsker", "cutoff", "landweber", "custom")

# l1 gaps below this are treated as the same member
MERGE_GAP = 1e-10


class UnorderedFamilyError(ValueError):
    """The family violates the ordered-multiplier definition."""


class DuplicateMemberError(ValueError):
    """Two members of a family coincide."""


class StabilityError(ValueError):
    """Landweber step too large for the spectrum."""


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    generator_tag: str = "explicit"

    def __post_init__(self):
        lam = np.array(self.eigenvalues, dtype=np.float64)
        if lam.ndim != 1 or lam.size == 0:
            raise DimensionError("spectrum must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(lam)) or np.any(lam < 0):
            raise InvalidParameterError("eigenvalues must be finite and nonnegative")
        if np.any(np.diff(lam) < 0):
            raise InvalidParameterError("eigenvalues must be sorted ascending")
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


def polynomial_spectrum(n: int, power: float) -> Spectrum:
    """``lambda_k = k**power``, k = 1..n (``power = 2m`` mimics order-m splines)."""
    if n < 1:
        raise InvalidParameterError("n must be positive")
    k = np.arange(1, n + 1, dtype=np.float64)
    return Spectrum(k**power, generator_tag=f"polynomial(power={power:g})")


@dataclass(frozen=True, eq=False)
class MultiplierFamily:
    """A finite family of multipliers in ascending family order.

    ``params`` holds the smoothing parameter attached to each member (alpha,
    cut point or iteration count), aligned with ``members``.
    """

    members: np.ndarray
    kind: str = "custom"
    spectrum: Spectrum | None = None
    params: np.ndarray | None = None
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        m = np.array(self.members, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
            raise DimensionError(f"members must be a non-empty 2-D array, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidParameterError("members have non-finite entries")
        if self.kind not in KINDS:
            raise InvalidParameterError(f"unknown family kind {self.kind!r}")
        m.setflags(write=False)
        object.__setattr__(self, "members", m)
        if self.params is not None:
            p = np.array(self.params, dtype=np.float64)
            if p.shape != (m.shape[0],):
                raise DimensionError("params must align with members")
            p.setflags(write=False)
            object.__setattr__(self, "params", p)

    def __len__(self) -> int:
        return self.members.shape[0]

    @property
    def n(self) -> int:
        return self.members.shape[1]

    @property
    def l1(self) -> np.ndarray:
        return self.members.sum(axis=1)

    @property
    def sq_norms(self) -> np.ndarray:
        return (self.members**2).sum(axis=1)


def _finalize(members, kind, spectrum=None, params=None, notes=()) -> MultiplierFamily:
    """Sort by l1 mass, reject duplicates, merge near-duplicates, validate."""
    members = np.asarray(members, dtype=np.float64)
    order = np.argsort(members.sum(axis=1), kind="stable")
    members = members[order]
    if params is not None:
        params = np.asarray(params, dtype=np.float64)[order]

    for j in range(members.shape[0] - 1):
        if np.array_equal(members[j], members[j + 1]):
            raise DuplicateMemberError(f"members {j} and {j + 1} are identical")

    # for ordered neighbours ||h+ - h||_1 is the l1 gap; crossing members with
    # equal mass stay apart here and are rejected by validation below
    gaps = np.abs(np.diff(members, axis=0)).sum(axis=1)
    close = np.flatnonzero(gaps < MERGE_GAP)
    if close.size:
        # keep the upper member of each near-duplicate pair
        warnings.warn(
            f"merging {close.size} member(s) with l1 gap below {MERGE_GAP:g}",
            RuntimeWarning,
            stacklevel=3,
        )
        keep = np.ones(members.shape[0], dtype=bool)
        keep[close] = False
        members = members[keep]
        if params is not None:
            params = params[keep]
        notes = tuple(notes) + (f"merged {close.size} near-duplicate member(s)",)

    family = MultiplierFamily(members, kind=kind, spectrum=spectrum, params=params, notes=tuple(notes))
    verdict = validate_ordered(family)
    if not verdict.valid:
        raise UnorderedFamilyError(verdict.message)
    return family


def _check_grid(grid, name: str) -> np.ndarray:
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidParameterError(f"{name} must be a non-empty 1-D sequence")
    if np.any(grid <= 0) or not np.all(np.isfinite(grid)):
        raise InvalidParameterError(f"{name} entries must be positive and finite")
    d = np.diff(grid)
    if not (np.all(d > 0) or np.all(d < 0)):
        raise InvalidParameterError(f"{name} must be strictly monotone")
    return grid


def build_tikhonov(spectrum: Spectrum, alpha_grid) -> MultiplierFamily:
    """Members ``h_k = 1 / (1 + alpha * lambda_k)``, one per alpha."""
    alphas = _check_grid(alpha_grid, "alpha grid")
    lam = spectrum.eigenvalues
    members = 1.0 / (1.0 + alphas[:, None] * lam[None, :])
    return _finalize(members, "tikhonov", spectrum, alphas)


def build_pinsker(spectrum: Spectrum, alpha_grid) -> MultiplierFamily:
    """Members ``h_k = max(1 - alpha * lambda_k, 0)``, one per alpha."""
    alphas = _check_grid(alpha_grid, "alpha grid")
    lam = spectrum.eigenvalues
    members = np.maximum(1.0 - alphas[:, None] * lam[None, :], 0.0)
    return _finalize(members, "pinsker", spectrum, alphas)


def build_cutoff(n: int, cut_points) -> MultiplierFamily:
    """Projection family: the member for cut m keeps the first m coordinates."""
    cuts = np.asarray(cut_points)
    if cuts.ndim != 1 or cuts.size == 0:
        raise InvalidParameterError("cut points must be a non-empty 1-D sequence")
    if not np.all(cuts == np.round(cuts)):
        raise InvalidParameterError("cut points must be integers")
    cuts = cuts.astype(np.int64)
    if np.any(cuts < 0) or np.any(cuts > n):
        raise InvalidParameterError(f"cut points must lie in [0, {n}]")
    if np.any(np.diff(cuts) <= 0):
        raise InvalidParameterError("cut points must be strictly increasing")
    members = (np.arange(n)[None, :] < cuts[:, None]).astype(np.float64)
    return _finalize(members, "cutoff", None, cuts)


def build_landweber(spectrum: Spectrum, step: float, iteration_counts) -> MultiplierFamily:
    """Landweber filters ``1 - (1 - step * lambda)^m`` after m iterations.

    The eigenvalues here are those of the design Gram matrix. Coordinates are
    indexed by decreasing eigenvalue, so coordinate k uses the k-th largest
    entry of the (ascending) spectrum; this keeps each member nonincreasing.
    """
    step = float(step)
    if not step > 0:
        raise InvalidParameterError("Landweber step must be positive")
    lam = spectrum.eigenvalues[::-1]
    if step * lam[0] > 1.0:
        raise StabilityError(f"step * lambda_max = {step * lam[0]:g} exceeds 1")
    counts = np.asarray(iteration_counts)
    if counts.ndim != 1 or counts.size == 0 or not np.all(counts == np.round(counts)):
        raise InvalidParameterError("iteration counts must be a non-empty sequence of integers")
    if np.any(counts < 1) or np.any(np.diff(counts) <= 0):
        raise InvalidParameterError("iteration counts must be positive and strictly increasing")
    base = 1.0 - step * lam
    members = 1.0 - base[None, :] ** counts[:, None].astype(np.float64)
    return _finalize(members, "landweber", spectrum, counts)


def custom_family(members) -> MultiplierFamily:
    """Hand-built family; members are sorted by l1 mass and validated."""
    return _finalize(members, "custom")


# -- ordering -------------------------------------------------------------

@dataclass(frozen=True)
class OrderingVerdict:
    valid: bool
    rule: str = ""
    members: tuple[int, ...] = ()
    coordinates: tuple[int, ...] = ()
    message: str = "family is ordered"

    def __bool__(self) -> bool:
        return self.valid


def validate_ordered(family) -> OrderingVerdict:
    """Check range, per-member monotonicity and total componentwise order.

    Members are compared in stored order; if every consecutive pair is ordered
    the whole family is (transitivity), and a crossing pair anywhere shows up
    as a crossing consecutive pair once members are sorted by l1 mass.
    Coordinates in the returned witness are 0-based.
    """
    m = np.asarray(getattr(family, "members", family), dtype=np.float64)
    bad = np.argwhere((m < 0.0) | (m > 1.0))
    if bad.size:
        j, i = (int(v) for v in bad[0])
        return OrderingVerdict(
            False, "range", (j,), (i,),
            f"member {j} has entry {m[j, i]:g} outside [0, 1] at coordinate {i + 1}",
        )
    inc = np.argwhere(np.diff(m, axis=1) > 0.0)
    if inc.size:
        j, i = (int(v) for v in inc[0])
        return OrderingVerdict(
            False, "monotone", (j,), (i, i + 1),
            f"member {j} increases from coordinate {i + 1} to {i + 2}",
        )
    for j in range(m.shape[0] - 1):
        g, h = m[j], m[j + 1]
        above = np.flatnonzero(g > h)
        if above.size == 0:
            continue
        below = np.flatnonzero(g < h)
        coords = tuple(int(c) for c in (above[0],) + ((below[0],) if below.size else ()))
        shown = " and ".join(str(c + 1) for c in sorted(coords))
        return OrderingVerdict(
            False, "total_order", (j, j + 1), tuple(sorted(coords)),
            f"members {j} and {j + 1} cross (coordinates {shown}, 1-based)",
        )
    return OrderingVerdict(True)


# -- prior weights --------------------------------------------------------

@dataclass(frozen=True)
class PriorWeights:
    weights: np.ndarray
    beta: float
    log_weights: np.ndarray
    degenerate: tuple[int, ...] = ()

    def __len__(self) -> int:
        return self.weights.shape[0]


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not beta > 0 or not math.isfinite(beta):
        raise InvalidParameterError(f"beta must be positive and finite, got {beta}")
    return beta


def prior_weights(family: MultiplierFamily, beta: float) -> PriorWeights:
    """``pi^h = 1 - exp(-(||h+||_1 - ||h||_1) / beta)`` and ``pi^{h_max} = 1``."""
    beta = _check_beta(beta)
    verdict = validate_ordered(family)
    if not verdict.valid:
        raise UnorderedFamilyError(verdict.message)
    gaps = np.diff(family.l1)
    log_pi = np.zeros(len(family))
    pi = np.ones(len(family))
    with np.errstate(divide="ignore"):
        # -expm1 keeps full precision when the gap is tiny relative to beta
        pi[:-1] = -np.expm1(-gaps / beta)
        log_pi[:-1] = np.log(pi[:-1])
    degenerate = tuple(int(j) for j in np.flatnonzero(pi == 0.0))
    for arr in (pi, log_pi):
        arr.setflags(write=False)
    return PriorWeights(pi, beta, log_pi, degenerate)


def check_prior_identity(priors: PriorWeights, family: MultiplierFamily) -> float:
    """Largest relative residual of ``sum_{g>=h} pi^g e^{-|g|_1/beta} = e^{-|h|_1/beta}``.

    Each side is divided by ``e^{-|h|_1/beta}`` so the sum is evaluated as
    ``sum_{g>=h} pi^g exp(-(|g|_1 - |h|_1)/beta)`` against 1.
    """
    if len(priors) != len(family):
        raise DimensionError("priors do not match family")
    l1 = family.l1
    beta = priors.beta
    worst = 0.0
    for j in range(len(family)):
        terms = priors.weights[j:] * np.exp(-(l1[j:] - l1[j]) / beta)
        worst = max(worst, abs(math.fsum(terms) - 1.0))
    return worst


# -- regularity ------------------------------------------------------------

@dataclass(frozen=True)
class ConditionReport:
    k_lower: float
    k_upper: float
    lower_satisfied: bool
    upper_satisfied: bool
    lower_witness: tuple[int, int]
    upper_witness: int | None
    excluded: tuple[int, ...] = ()

    @property
    def satisfied(self) -> bool:
        return self.lower_satisfied and self.upper_satisfied


def _lower_ratio(m: np.ndarray, lo: int, hi: int) -> float:
    num = math.fsum(m[hi] ** 2 - m[lo] ** 2)
    den = math.fsum(m[hi] - m[lo])
    return num / den


def check_condition(family: MultiplierFamily, all_pairs: bool = False) -> ConditionReport:
    """Empirical constants of the l2-vs-l1 gap and successor-norm conditions.

    ``k_lower`` is the smallest ratio ``sum(h^2 - g^2) / (|h|_1 - |g|_1)``
    over ordered pairs; a ratio of sums is at least the smallest of the
    summand ratios, so consecutive pairs suffice. ``all_pairs=True`` scans
    every pair instead (quadratic, for cross-checks).

    ``k_upper`` is the largest ``||h+||^2 / ||h||^2``; a zero member has no
    finite ratio and is listed in ``excluded``.
    """
    m = family.members
    size = m.shape[0]
    if size < 2:
        return ConditionReport(math.inf, 1.0, True, True, (0, 0), None)
    if all_pairs:
        pairs = ((lo, hi) for lo in range(size) for hi in range(lo + 1, size))
    else:
        pairs = ((j, j + 1) for j in range(size - 1))
    k_lower, lower_witness = math.inf, (0, 1)
    for lo, hi in pairs:
        r = _lower_ratio(m, lo, hi)
        if r < k_lower:
            k_lower, lower_witness = r, (lo, hi)

    sq = family.sq_norms
    excluded = tuple(int(j) for j in np.flatnonzero(sq[:-1] == 0.0))
    k_upper, upper_witness = 0.0, None
    for j in range(size - 1):
        if sq[j] == 0.0:
            continue
        r = sq[j + 1] / sq[j]
        if r > k_upper:
            k_upper, upper_witness = r, j
    return ConditionReport(
        k_lower=k_lower,
        k_upper=float(k_upper),
        lower_satisfied=bool(k_lower > 0),
        upper_satisfied=bool(math.isfinite(k_upper)),
        lower_witness=lower_witness,
        upper_witness=upper_witness,
        excluded=excluded,
    )


def prior_sum_bound(family: MultiplierFamily, priors: PriorWeights, report: ConditionReport):
    """Partial prior sums ``sum_{g<=h} pi^g`` next to ``(K^o |h|^2 - |h_min|^2) / (K_o beta)``.

    Returned for every member except ``h_max``, whose own unit prior is not
    covered by the l1-gap argument. Members excluded from ``K^o`` (zero norm)
    use ``|h+|^2`` in place of ``K^o |h|^2``, the step before the successor
    ratio enters.
    """
    partial = np.cumsum(priors.weights)[:-1]
    sq = family.sq_norms
    top = report.k_upper * sq[:-1]
    if report.excluded:
        idx = np.asarray(report.excluded)
        top[idx] = sq[idx + 1]
    bound = (top - sq[0]) / (report.k_lower * priors.beta)
    return partial, bound


def band_prior_mass(family: MultiplierFamily, priors: PriorWeights) -> np.ndarray:
    """For each member h, the prior mass of ``{g : |h|^2 <= |g|^2 <= |h|^2 + 1}``."""
    sq = family.sq_norms
    lo = sq[:, None] <= sq[None, :]
    hi = sq[None, :] <= sq[:, None] + 1.0
    return ((lo & hi) * priors.weights[None, :]).sum(axis=1)
