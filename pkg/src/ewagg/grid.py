"""Default scenario grid used by the acceptance suite and the experiment scripts."""

from __future__ import annotations

from .scenario import FamilySpec, GridSpec, MeanSpec, Scenario

SIGNAL = MeanSpec("sobolev", {"A": 1.0, "s": 1.0})


def family_specs(power: float = 2.0) -> dict[str, FamilySpec]:
    """Tikhonov, Pinsker and cut-off families; the spectrum is ``k**power``."""
    spectrum = {"power": power}
    return {
        "tikhonov": FamilySpec("tikhonov", spectrum=spectrum, alpha=GridSpec(1e-6, 1e2, 50)),
        # alpha >= 1 would zero every coordinate, so the grid stays below it
        "pinsker": FamilySpec("pinsker", spectrum=spectrum, alpha=GridSpec(1e-6 ** (power / 2), 0.9, 50)),
        "cutoff": FamilySpec("cutoff", cuts={"min": 0, "count": 50}),
    }


def acceptance_grid(betas=(4.0, 1.0), replications: int = 10_000, seed: int = 20240601) -> list[Scenario]:
    out = []
    for beta in betas:
        for n in (100, 500):
            for sigma in (0.05, 1.0):
                for kind, spec in family_specs(2.0).items():
                    name = f"{kind}_n{n}_s{sigma:g}_b{beta:g}"
                    out.append(Scenario(n, sigma, SIGNAL, spec, beta, replications, seed, name))
    return out


def sweep_base(replications: int = 2_000, seed: int = 7) -> Scenario:
    """Tikhonov family with room for oracle ratios from 1 up to about 10^4."""
    spec = FamilySpec("tikhonov", spectrum={"power": 2.0}, alpha=GridSpec(1e-10, 1e2, 60))
    return Scenario(20_000, 1.0, SIGNAL, spec, 4.0, replications, seed, "sweep_tikhonov")


SWEEP_RATIOS = (1.0, 10.0, 100.0, 1_000.0, 10_000.0)
