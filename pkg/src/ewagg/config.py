"""TOML run configuration.

Layout::

    [run]                 # optional
    out = "results"
    formats = ["csv", "json"]
    checks = ["calibration", "weighted_ure_bound", "oracle_inequality"]
    threads = 1
    psi_c = 1.0
    eps = 0.025           # slack for the h_eps diagnostic
    sampled_lambdas = 100

    [sweep]               # optional, used by `ewagg sweep`
    scenario = "name"     # base scenario (default: the first one)
    scales = [0.1, 1.0, 10.0]     # or: ratios = [1, 10, 100]

    [[scenario]]
    name = "..."
    n = 500
    sigma = 0.05
    beta = 4.0
    replications = 10000
    seed = 1
    mu = { kind = "sobolev", A = 1.0, s = 1.0 }
    [scenario.family]
    kind = "tikhonov"
    spectrum = { power = 2 }
    alpha = { min = 1e-6, max = 1e2, count = 50, spacing = "geometric" }
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .experiments import CHECKS, DEFAULT_CHECKS
from .scenario import ConfigError, Scenario, _reject_unknown

OUT_ENV = "EWAGG_OUT_DIR"
FORMATS = ("csv", "json")


@dataclass
class SweepSpec:
    scenario: str | None = None
    scales: list[float] | None = None
    ratios: list[float] | None = None


@dataclass
class RunConfig:
    scenarios: list[Scenario]
    out_dir: str = field(default_factory=lambda: os.environ.get(OUT_ENV, "results"))
    formats: tuple[str, ...] = FORMATS
    checks: tuple[str, ...] = DEFAULT_CHECKS
    threads: int = 1
    verbosity: int = 1
    psi_c: float = 1.0
    eps: float | None = None
    sampled_lambdas: int = 100
    sweep: SweepSpec | None = None

    def sweep_base(self) -> Scenario:
        name = self.sweep.scenario if self.sweep else None
        if name is None:
            return self.scenarios[0]
        for s in self.scenarios:
            if s.name == name:
                return s
        raise ConfigError(f"sweep: no scenario named {name!r}")


def parse_formats(value) -> tuple[str, ...]:
    items = value.split(",") if isinstance(value, str) else list(value)
    items = tuple(v.strip() for v in items if v.strip())
    bad = [v for v in items if v not in FORMATS]
    if bad or not items:
        raise ConfigError(f"formats: expected a subset of {', '.join(FORMATS)}, got {', '.join(items) or 'nothing'}")
    return items


def parse_checks(value) -> tuple[str, ...]:
    items = value.split(",") if isinstance(value, str) else list(value)
    items = tuple(v.strip() for v in items if v.strip())
    bad = [v for v in items if v not in CHECKS]
    if bad:
        raise ConfigError(f"checks: unknown check(s) {', '.join(bad)} (known: {', '.join(CHECKS)})")
    return items


def config_from_dict(data: dict) -> RunConfig:
    _reject_unknown(data, ("run", "sweep", "scenario"), "config")
    raw = data.get("scenario")
    if not raw:
        raise ConfigError("config: at least one [[scenario]] block is required")
    if isinstance(raw, dict):
        raw = [raw]
    scenarios = [Scenario.from_dict(block, where=f"scenario[{i}]") for i, block in enumerate(raw)]
    names = [s.name for s in scenarios]
    if len(set(names)) != len(names):
        raise ConfigError("config: scenario names must be unique")

    cfg = RunConfig(scenarios=scenarios)
    run = data.get("run", {})
    _reject_unknown(run, ("out", "formats", "checks", "threads", "verbosity", "psi_c", "eps",
                          "sampled_lambdas"), "run")
    if "out" in run:
        cfg.out_dir = str(run["out"])
    if "formats" in run:
        cfg.formats = parse_formats(run["formats"])
    if "checks" in run:
        cfg.checks = parse_checks(run["checks"])
    for key, cast in (("threads", int), ("verbosity", int), ("psi_c", float), ("eps", float),
                      ("sampled_lambdas", int)):
        if key in run:
            setattr(cfg, key, cast(run[key]))
    if cfg.threads < 1:
        raise ConfigError("run: threads must be >= 1")

    sweep = data.get("sweep")
    if sweep is not None:
        _reject_unknown(sweep, ("scenario", "scales", "ratios"), "sweep")
        if ("scales" in sweep) == ("ratios" in sweep):
            raise ConfigError("sweep: give exactly one of 'scales' or 'ratios'")
        cfg.sweep = SweepSpec(
            scenario=sweep.get("scenario"),
            scales=[float(v) for v in sweep["scales"]] if "scales" in sweep else None,
            ratios=[float(v) for v in sweep["ratios"]] if "ratios" in sweep else None,
        )
        cfg.sweep_base()
    return cfg


def load_config(path) -> RunConfig:
    """Parse a TOML config; syntax errors carry the line and column."""
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    return config_from_dict(data)
