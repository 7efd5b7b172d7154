"""Experiment descriptions: mean generators, family specs and scenarios.

Everything here round-trips through plain dicts (``to_dict`` / ``from_dict``),
which is what the TOML config and the JSON reports use. Unknown keys are
rejected with a :class:`ConfigError` naming the offending field.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from . import families as fam


class ConfigError(ValueError):
    """Malformed or incomplete experiment description."""


MEAN_KINDS = {
    "sobolev": ("A", "s"),
    "analytic": ("A", "c"),
    "sparse": ("A", "support"),
    "zero": (),
    "constant": ("A",),
}


def _reject_unknown(data: dict, allowed, where: str) -> None:
    extra = sorted(set(data) - set(allowed))
    if extra:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(extra)}")


def _require(data: dict, key: str, where: str):
    if key not in data:
        raise ConfigError(f"{where}: missing required field '{key}'")
    return data[key]


@dataclass(frozen=True)
class MeanSpec:
    """Mean vector generator; ``scale`` multiplies the generated vector."""

    kind: str = "zero"
    params: dict = field(default_factory=dict)
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in MEAN_KINDS:
            raise ConfigError(f"mu: unknown kind {self.kind!r} (expected one of {', '.join(MEAN_KINDS)})")
        _reject_unknown(self.params, MEAN_KINDS[self.kind], f"mu ({self.kind})")
        for key in MEAN_KINDS[self.kind]:
            _require(self.params, key, f"mu ({self.kind})")
        if not math.isfinite(self.scale):
            raise ConfigError("mu: scale must be finite")

    def vector(self, n: int) -> np.ndarray:
        k = np.arange(1, n + 1, dtype=np.float64)
        p = self.params
        if self.kind == "zero":
            mu = np.zeros(n)
        elif self.kind == "constant":
            mu = np.full(n, float(p["A"]))
        elif self.kind == "sobolev":
            mu = float(p["A"]) * k ** (-float(p["s"]))
        elif self.kind == "analytic":
            mu = float(p["A"]) * np.exp(-float(p["c"]) * k)
        else:
            support = np.asarray(p["support"], dtype=np.int64)
            if np.any(support < 1) or np.any(support > n):
                raise ConfigError(f"mu (sparse): support indices must lie in [1, {n}]")
            mu = np.zeros(n)
            mu[support - 1] = float(p["A"])
        return self.scale * mu

    def scaled(self, c: float) -> MeanSpec:
        return dataclasses.replace(self, scale=self.scale * float(c))

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params, "scale": self.scale}

    @classmethod
    def from_dict(cls, data: dict) -> MeanSpec:
        data = dict(data)
        kind = _require(data, "kind", "mu")
        scale = float(data.pop("scale", 1.0))
        data.pop("kind")
        if kind == "sparse" and "support" in data:
            data["support"] = [int(v) for v in data["support"]]
        return cls(kind=kind, params=data, scale=scale)


@dataclass(frozen=True)
class GridSpec:
    min: float
    max: float
    count: int
    spacing: str = "geometric"

    def __post_init__(self):
        if self.spacing not in ("geometric", "linear"):
            raise ConfigError(f"alpha: spacing must be 'geometric' or 'linear', got {self.spacing!r}")
        if self.count < 1 or not (0 < self.min <= self.max):
            raise ConfigError("alpha: need 0 < min <= max and count >= 1")

    def values(self) -> np.ndarray:
        if self.spacing == "geometric":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class FamilySpec:
    """Recipe for a multiplier family of dimension ``n``.

    ``spectrum`` is either ``{"power": p}`` (``lambda_k = k^p``) or
    ``{"values": [...]}``; ``cuts`` is an explicit list or
    ``{"min", "max", "count"}`` for roughly geometric integer cut points.
    """

    kind: str
    spectrum: dict | None = None
    alpha: GridSpec | None = None
    cuts: list | dict | None = None
    step: float | None = None
    counts: list | None = None
    members: list | None = None

    def __post_init__(self):
        if self.kind not in fam.KINDS:
            raise ConfigError(f"family: unknown kind {self.kind!r} (expected one of {', '.join(fam.KINDS)})")
        needs = {
            "tikhonov": ("spectrum", "alpha"),
            "pinsker": ("spectrum", "alpha"),
            "cutoff": ("cuts",),
            "landweber": ("spectrum", "step", "counts"),
            "custom": ("members",),
        }[self.kind]
        for key in needs:
            if getattr(self, key) is None:
                raise ConfigError(f"family ({self.kind}): missing required field '{key}'")
        if self.spectrum is not None:
            _reject_unknown(self.spectrum, ("power", "values"), "family.spectrum")
            if len(self.spectrum) != 1:
                raise ConfigError("family.spectrum: give exactly one of 'power' or 'values'")

    def build_spectrum(self, n: int) -> fam.Spectrum:
        if "power" in self.spectrum:
            return fam.polynomial_spectrum(n, float(self.spectrum["power"]))
        values = np.asarray(self.spectrum["values"], dtype=np.float64)
        if values.shape != (n,):
            raise ConfigError(f"family.spectrum: expected {n} values, got {values.size}")
        return fam.Spectrum(values, "explicit")

    def cut_points(self, n: int) -> np.ndarray:
        if isinstance(self.cuts, dict):
            _reject_unknown(self.cuts, ("min", "max", "count"), "family.cuts")
            lo = int(self.cuts.get("min", 0))
            hi = int(self.cuts.get("max", n))
            count = int(_require(self.cuts, "count", "family.cuts"))
            pts = np.unique(np.round(np.geomspace(max(lo, 1), hi, count)).astype(np.int64))
            if lo == 0:
                pts = np.concatenate([[0], pts])
            return pts
        return np.asarray(self.cuts, dtype=np.int64)

    def build(self, n: int) -> fam.MultiplierFamily:
        if self.kind == "tikhonov":
            return fam.build_tikhonov(self.build_spectrum(n), self.alpha.values())
        if self.kind == "pinsker":
            return fam.build_pinsker(self.build_spectrum(n), self.alpha.values())
        if self.kind == "cutoff":
            return fam.build_cutoff(n, self.cut_points(n))
        if self.kind == "landweber":
            return fam.build_landweber(self.build_spectrum(n), self.step, self.counts)
        members = np.asarray(self.members, dtype=np.float64)
        if members.ndim != 2 or members.shape[1] != n:
            raise ConfigError(f"family.members: expected rows of length {n}")
        return fam.custom_family(members)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name == "kind" or value is None:
                continue
            out[f.name] = dataclasses.asdict(value) if isinstance(value, GridSpec) else value
        return out

    @classmethod
    def from_dict(cls, data: dict) -> FamilySpec:
        allowed = [f.name for f in dataclasses.fields(cls)]
        _reject_unknown(data, allowed, "family")
        kind = _require(data, "kind", "family")
        alpha = data.get("alpha")
        if alpha is not None:
            _reject_unknown(alpha, ("min", "max", "count", "spacing"), "family.alpha")
            for key in ("min", "max", "count"):
                _require(alpha, key, "family.alpha")
            alpha = GridSpec(float(alpha["min"]), float(alpha["max"]), int(alpha["count"]),
                             alpha.get("spacing", "geometric"))
        return cls(
            kind=kind,
            spectrum=dict(data["spectrum"]) if data.get("spectrum") is not None else None,
            alpha=alpha,
            cuts=data.get("cuts"),
            step=float(data["step"]) if data.get("step") is not None else None,
            counts=[int(c) for c in data["counts"]] if data.get("counts") is not None else None,
            members=[[float(v) for v in row] for row in data["members"]] if data.get("members") is not None else None,
        )


@dataclass(frozen=True)
class Scenario:
    n: int
    sigma: float
    mu: MeanSpec
    family: FamilySpec
    beta: float = 4.0
    replications: int = 10_000
    seed: int = 0
    name: str = "scenario"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError(f"{self.name}: n must be a positive integer")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ConfigError(f"{self.name}: sigma must be positive")
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ConfigError(f"{self.name}: beta must be positive")
        if int(self.replications) != self.replications or self.replications < 2:
            raise ConfigError(f"{self.name}: replications must be an integer >= 2")
        if not (0 <= int(self.seed) < 2**64):
            raise ConfigError(f"{self.name}: seed must be a 64-bit unsigned integer")

    def mean_vector(self) -> np.ndarray:
        return self.mu.vector(self.n)

    def build_family(self) -> fam.MultiplierFamily:
        return self.family.build(self.n)

    def with_signal_scale(self, c: float) -> Scenario:
        return dataclasses.replace(self, mu=self.mu.scaled(c))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "sigma": self.sigma,
            "beta": self.beta,
            "replications": self.replications,
            "seed": self.seed,
            "mu": self.mu.to_dict(),
            "family": self.family.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict, where: str = "scenario") -> Scenario:
        allowed = ("name", "n", "sigma", "beta", "replications", "seed", "mu", "family")
        _reject_unknown(data, allowed, where)
        where = f"{where} '{data.get('name', '?')}'"
        try:
            return cls(
                n=int(_require(data, "n", where)),
                sigma=float(_require(data, "sigma", where)),
                mu=MeanSpec.from_dict(_require(data, "mu", where)),
                family=FamilySpec.from_dict(_require(data, "family", where)),
                beta=float(data.get("beta", 4.0)),
                replications=int(data.get("replications", 10_000)),
                seed=int(data.get("seed", 0)),
                name=str(data.get("name", "scenario")),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{where}: {exc}") from exc
