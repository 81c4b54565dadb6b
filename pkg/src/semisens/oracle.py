"""Finite-difference oracle for theta-sensitivities.

Evaluates ``f(theta) = <U_theta(t) xi | pi_0>`` with the exponential engine
and differentiates numerically.  It deliberately shares nothing with
:mod:`semisens.sensitivity`: no ``nu``, no ``V_0``.

Negative ``theta`` is used as a formal matrix parameter for central
differences.  For Wright-Fisher that is not a probability model, but the
matrix family is affine in ``theta`` so the two-sided limit exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .functionals import MomentFunctional, adjoint_apply, pair
from .operators import ParametricGeneratorFamily, matrix
from .polynomial import Polynomial
from .semigroup import apply_u

# Tighter than the engine default: rounding in f(theta) is amplified by 1/theta.
ORACLE_ENGINE_TOL = 1e-15


@dataclass(frozen=True)
class OracleConfig:
    thetas: tuple = (1e-2, 1e-3, 1e-4)
    richardson_levels: int = 1
    tol_report: float = 1e-6
    engine_tol: float = ORACLE_ENGINE_TOL

    def __post_init__(self):
        thetas = tuple(float(h) for h in self.thetas)
        object.__setattr__(self, "thetas", thetas)
        if not thetas or any(h <= 0 for h in thetas):
            raise ValueError("oracle steps must be positive")
        if any(b >= a for a, b in zip(thetas, thetas[1:])):
            raise ValueError("oracle steps must be strictly decreasing")
        if self.richardson_levels < 0 or self.richardson_levels >= len(thetas):
            raise ValueError(
                f"{self.richardson_levels} Richardson levels need more than "
                f"{len(thetas)} step sizes"
            )


@dataclass(frozen=True)
class OracleResult:
    value: float
    error_estimate: float
    differences: tuple  # raw central differences, one per step
    warning: bool = False
    table: tuple = field(default=(), repr=False)


def evolved_pairing(
    family: ParametricGeneratorFamily,
    pi0: MomentFunctional,
    xi: Polynomial,
    theta,
    t: float,
    n: int,
    tol: float | None = None,
) -> float:
    """``<xi | U_theta(t)* pi_0> = <U_theta(t) xi | pi_0>``."""
    evolved = apply_u(family, theta, xi, t, n, tol)
    return float(pair(evolved, pi0.restrict(n)))


def richardson_table(steps, values, levels: int, order: int = 2) -> list[list[float]]:
    """Neville extrapolation to ``h = 0`` of ``values[i] = D(steps[i])``.

    The error is assumed to be a series in ``h^order``; row ``l`` removes the
    ``h^{order*l}`` term and ``table[l][i]`` combines steps ``i .. i + l``.
    """
    table = [list(values)]
    for level in range(1, levels + 1):
        prev = table[-1]
        row = []
        for i in range(len(prev) - 1):
            ratio = (steps[i] / steps[i + level]) ** order
            row.append(prev[i + 1] + (prev[i + 1] - prev[i]) / (ratio - 1))
        table.append(row)
    return table


def central_difference_sensitivity(
    family: ParametricGeneratorFamily,
    pi0: MomentFunctional,
    xi: Polynomial,
    t: float,
    n: int,
    config: OracleConfig | None = None,
) -> OracleResult:
    """Richardson-extrapolated ``[f(h) - f(-h)] / 2h`` at the configured steps."""
    config = config or OracleConfig()
    diffs = []
    for h in config.thetas:
        plus = evolved_pairing(family, pi0, xi, h, t, n, config.engine_tol)
        minus = evolved_pairing(family, pi0, xi, -h, t, n, config.engine_tol)
        diffs.append((plus - minus) / (2 * h))
    table = richardson_table(config.thetas, diffs, config.richardson_levels)
    last = table[-1]
    value = last[-1]
    if len(last) >= 2:
        error = abs(last[-1] - last[-2])
    else:
        error = abs(value - table[-2][-1]) if len(table) > 1 else 0.0
    residuals = [abs(b - a) for a, b in zip(diffs, diffs[1:])]
    warning = any(b >= a and a > 0 for a, b in zip(residuals, residuals[1:]))
    return OracleResult(value, error, tuple(diffs), warning, tuple(tuple(r) for r in table))


def stationarity_residual(family: ParametricGeneratorFamily, theta, mu: MomentFunctional, n: int):
    """``max_{j<=n} |<x^j | A_theta* mu>|``; exact for exact inputs."""
    image = adjoint_apply(matrix(family, theta, n), mu.restrict(n))
    return max(abs(v) for v in image.moments)
