"""The remainder-correction function Psi and the two remainder shapes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GRID_POINTS = 200
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PsiFunction:
    """``Psi(x) = C min_{0 < eps <= 1/(5 beta)} [eps x + 1/eps + exp(C/eps)]``."""

    c_constant: float = 1.0
    beta: float = 4.0

    def __post_init__(self):
        if not (self.c_constant > 0 and self.beta > 0):
            raise ValueError("Psi needs positive C and beta")

    @property
    def eps_max(self) -> float:
        return 1.0 / (5.0 * self.beta)

    def __call__(self, x: float) -> float:
        return evaluate_psi(self, x)


def _log_objective(log_eps: float, x: float, c: float) -> float:
    eps = math.exp(log_eps)
    return float(np.logaddexp(math.log(eps * x + 1.0 / eps), c / eps))


def _golden(f, a: float, b: float, tol: float = 1e-12, max_iter: int = 200) -> tuple[float, float]:
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * (1.0 + abs(a) + abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def log_psi(psi: PsiFunction, x: float) -> float:
    """``log Psi(x)``, evaluated in the log domain so large ``C/eps`` never overflows.

    The objective is convex in eps, hence unimodal in log eps: a log-spaced
    grid brackets the minimizer and golden-section search refines it.
    """
    x = float(x)
    if x < 0 or not math.isfinite(x):
        raise ValueError(f"Psi is defined for finite x >= 0, got {x}")
    c = psi.c_constant
    hi = math.log(psi.eps_max)
    lo = math.log(min(psi.eps_max * 1e-4, c / 1000.0))
    grid = np.linspace(lo, hi, GRID_POINTS)
    values = np.array([_log_objective(t, x, c) for t in grid])
    j = int(np.argmin(values))
    best = float(values[j])
    a, b = grid[max(j - 1, 0)], grid[min(j + 1, GRID_POINTS - 1)]
    if b > a:
        _, refined = _golden(lambda t: _log_objective(t, x, c), a, b)
        best = min(best, refined)
    return math.log(c) + best


def evaluate_psi(psi: PsiFunction, x: float) -> float:
    return math.exp(log_psi(psi, x))


def bound_log(ratio: float, sigma: float, beta: float, psi: PsiFunction) -> float:
    """``2 beta sigma^2 log(x + Psi(x))`` at ``x = r^H / sigma^2``."""
    lp = log_psi(psi, ratio)
    inner = lp if ratio <= 0 else float(np.logaddexp(math.log(ratio), lp))
    return 2.0 * beta * sigma * sigma * inner


def bound_sqrt_shape(ratio: float, sigma: float) -> float:
    """``sigma^2 sqrt(1 + x)``: the square-root remainder shape without its constant."""
    return sigma * sigma * math.sqrt(1.0 + ratio)
