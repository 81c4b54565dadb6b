"""theta-sensitivities of stationary functionals and of the adjoint semigroup.

For an affine family ``A_theta`` and a functional ``pi_0`` with
``A_0* pi_0 = 0`` the derivative of ``theta -> <xi | U_theta(t)* pi_0>`` at 0
is ``<V_0(t) xi | nu>`` where ``nu = (dA_theta/dtheta)* pi_0`` and
``V_0(t) = int_0^t e^{s A_0} ds``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError, StationarityError
from .functionals import MomentFunctional, adjoint_apply, pair
from .operators import ParametricGeneratorFamily, apply, derivative_family_at_zero, matrix
from .oracle import OracleConfig, central_difference_sensitivity, stationarity_residual
from .polynomial import Polynomial, format_scalar
from .semigroup import apply_u, apply_v0, default_tol, propagator_pair


def nu_functional(family: ParametricGeneratorFamily, pi0: MomentFunctional, n: int) -> MomentFunctional:
    """``nu = A_0'* pi_0``; exact because the theta-dependence is affine."""
    return adjoint_apply(matrix(derivative_family_at_zero(family), 0, n), pi0.restrict(n))


def stationary_derivative_check(
    family: ParametricGeneratorFamily,
    pi0_prime: MomentFunctional,
    nu: MomentFunctional,
    n: int,
):
    """Max residual of ``A_0* pi_0' + nu`` over the monomials ``x^0 .. x^n``."""
    if pi0_prime.n < n or nu.n < n:
        raise DimensionError(f"functionals must be known up to degree {n}")
    lhs = adjoint_apply(matrix(family, 0, n), pi0_prime.restrict(n))
    return max(abs(a + b) for a, b in zip(lhs.moments, nu.restrict(n).moments))


def product_condition_check(
    family: ParametricGeneratorFamily,
    pi_theta_provider: Callable[[float], MomentFunctional],
    pi0: MomentFunctional,
    thetas: Sequence,
    n: int,
) -> list:
    """``max_j |theta^-1 <(A_theta - A_0) x^j | pi_theta - pi_0>|`` for each theta."""
    thetas = list(thetas)
    if any(h <= 0 for h in thetas) or any(b >= a for a, b in zip(thetas, thetas[1:])):
        raise ValueError("thetas must be positive and strictly decreasing")
    base = pi0.restrict(n)
    out = []
    for theta in thetas:
        diff = pi_theta_provider(theta).restrict(n) - base
        worst = 0
        for j in range(n + 1):
            mono = Polynomial.monomial(j)
            delta = apply(family, theta, mono) - apply(family, 0, mono)
            worst = max(worst, abs(pair(delta, diff) / theta))
        out.append(worst)
    return out


def check_stationary(family, pi0: MomentFunctional, n: int, tol: float):
    residual = stationarity_residual(family, 0, pi0, n)
    if residual > tol:
        raise StationarityError(residual, tol)
    return residual


def semigroup_sensitivity(
    family: ParametricGeneratorFamily,
    pi0: MomentFunctional,
    xi: Polynomial,
    t: float,
    n: int,
    tol: float | None = None,
) -> float:
    """``d/dtheta <xi | U_theta(t)* pi_0>`` at 0, as ``<V_0(t) xi | nu>``."""
    tol = default_tol() if tol is None else tol
    check_stationary(family, pi0, n, tol)
    nu = nu_functional(family, pi0, n)
    return float(pair(apply_v0(family, xi, t, n, tol), nu))


def first_order_prediction(
    family: ParametricGeneratorFamily,
    pi0: MomentFunctional,
    xi: Polynomial,
    t: float,
    theta: float,
    n: int,
    tol: float | None = None,
) -> float:
    """``<xi | U_0(t)* pi_0> + theta * sensitivity``."""
    tol = default_tol() if tol is None else tol
    slope = semigroup_sensitivity(family, pi0, xi, t, n, tol)
    base = float(pair(apply_u(family, 0, xi, t, n, tol), pi0.restrict(n)))
    return base + theta * slope


@dataclass
class SensitivityReport:
    """Sensitivity grid (rows: test functions, columns: times)."""

    labels: list
    test_functions: list
    times: list
    values: list
    oracle_values: list | None = None
    oracle_errors: list | None = None
    max_abs_discrepancy: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def rows(self):
        for i, label in enumerate(self.labels):
            for j, t in enumerate(self.times):
                oracle = self.oracle_values[i][j] if self.oracle_values else None
                diff = abs(self.values[i][j] - oracle) if oracle is not None else None
                yield label, t, self.values[i][j], oracle, diff

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["xi_label", "t", "value", "oracle", "abs_diff"])
        for label, t, value, oracle, diff in self.rows():
            writer.writerow(
                [label, repr(float(t)), repr(value), "" if oracle is None else repr(oracle),
                 "" if diff is None else repr(diff)]
            )
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "xi_labels": list(self.labels),
            "xi_coeffs": [[format_scalar(c) for c in p.coeffs] for p in self.test_functions],
            "times": [float(t) for t in self.times],
            "values": self.values,
            "oracle_values": self.oracle_values,
            "oracle_errors": self.oracle_errors,
            "max_abs_discrepancy": self.max_abs_discrepancy,
            "rows": [
                {"xi_label": label, "t": float(t), "value": v, "oracle": o, "abs_diff": d}
                for label, t, v, o, d in self.rows()
            ],
            "diagnostics": self.diagnostics,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def sensitivity_report(
    family: ParametricGeneratorFamily,
    pi0: MomentFunctional,
    xis: Sequence[Polynomial],
    times: Sequence[float],
    n: int,
    tol: float | None = None,
    labels: Sequence[str] | None = None,
    oracle: OracleConfig | None = None,
) -> SensitivityReport:
    """Evaluate :func:`semigroup_sensitivity` on a grid, optionally against the oracle."""
    tol = default_tol() if tol is None else tol
    xis = list(xis)
    times = [float(t) for t in times]
    labels = list(labels) if labels is not None else [repr(p) for p in xis]
    residual = check_stationary(family, pi0, n, tol)
    nu = nu_functional(family, pi0, n)
    base = matrix(family, 0, n).as_float()
    values = []
    diagnostics = {"family": family.name, "degree": n, "tol": tol,
                   "stationarity_residual": float(residual), "engine": []}
    for xi in xis:
        row = []
        vec = np.array([float(c) for c in xi.padded(n)])
        for t in times:
            run = propagator_pair(base, t, tol)
            row.append(float(pair(Polynomial([float(c) for c in run.v.entries @ vec]), nu)))
            if len(diagnostics["engine"]) < len(times):
                diagnostics["engine"].append(
                    {"t": t, "terms_used": run.terms_used, "squarings": run.squarings}
                )
        values.append(row)
    report = SensitivityReport(labels, xis, times, values, diagnostics=diagnostics)
    if oracle is not None:
        results = [
            [central_difference_sensitivity(family, pi0, xi, t, n, oracle) for t in times]
            for xi in xis
        ]
        report.oracle_values = [[r.value for r in row] for row in results]
        report.oracle_errors = [[r.error_estimate for r in row] for row in results]
        report.max_abs_discrepancy = max(
            (abs(v - o) for vrow, orow in zip(values, report.oracle_values) for v, o in zip(vrow, orow)),
            default=0.0,
        )
    return report
