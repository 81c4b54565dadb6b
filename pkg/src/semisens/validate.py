"""Named validation suites driven by ``semisens validate``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errata import errata_report
from .functionals import (
    adjoint_apply,
    beta_moments,
    derivative_at_zero,
    dirac,
    gaussian_moments,
    pair,
    wf_stationary_derivative,
)
from .models import (
    ou_family,
    ou_moment_sensitivity_closed_form,
    wf_basis,
    wf_b_sequence,
    wf_family,
    wf_xi_sensitivity,
)
from .operators import matrix
from .oracle import OracleConfig, central_difference_sensitivity, stationarity_residual
from .polynomial import Polynomial, X
from .semigroup import apply_v0
from .sensitivity import nu_functional, product_condition_check, stationary_derivative_check

KAPPAS = (Fraction(1, 2), Fraction(1), Fraction(2))
TIMES = (0.1, 0.5, 1.0, 2.0)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _check(name, value, bound, strict_zero=False):
    passed = value == 0 if strict_zero else value <= bound
    return Check(name, bool(passed), f"value={float(value):.3e} bound={'0 (exact)' if strict_zero else f'{bound:.1e}'}")


def stationarity_suite():
    out = []
    for kappa in KAPPAS:
        for theta in (Fraction(1, 10), Fraction(1), Fraction(3)):
            r = stationarity_residual(wf_family(kappa), theta, beta_moments(theta, kappa, 16), 16)
            out.append(_check(f"wf beta stationary kappa={kappa} theta={theta}", r, 0, strict_zero=True))
        r = stationarity_residual(wf_family(kappa), 0, dirac(0, 16), 16)
        out.append(_check(f"wf dirac(0) stationary kappa={kappa}", r, 0, strict_zero=True))
    for theta in (0.0, 0.1, 1.0, 3.0):
        r = stationarity_residual(ou_family(), theta, gaussian_moments(theta, 0.5, 12), 12)
        out.append(_check(f"ou gaussian stationary theta={theta}", r, 1e-12))
    return out


def lemma_suite():
    out = []
    for kappa in KAPPAS + (Fraction(7, 3),):
        wf = wf_family(kappa)
        r = stationary_derivative_check(wf, wf_stationary_derivative(kappa, 16), nu_functional(wf, dirac(0, 16), 16), 16)
        out.append(_check(f"A0* pi0' = -nu kappa={kappa}", r, 0, strict_zero=True))
    wf = wf_family(1)
    seq = product_condition_check(wf, lambda h: beta_moments(h, 1.0, 6), dirac(0, 6), [1e-2, 1e-3, 1e-4, 1e-5], 6)
    monotone = all(b < a for a, b in zip(seq, seq[1:]))
    out.append(Check("product condition decreasing", monotone, f"sequence={[f'{v:.2e}' for v in seq]}"))
    out.append(_check("product condition final value", seq[-1], 1e-4))
    return out


def theorem_suite():
    out = []
    cases = [("wf", k) for k in KAPPAS] + [("ou", None)]
    worst = 0.0
    for model, kappa in cases:
        family = wf_family(kappa) if model == "wf" else ou_family()
        pi0 = dirac(0, 16) if model == "wf" else gaussian_moments(0, Fraction(1, 2), 16)
        nu = nu_functional(family, pi0, 16)
        for j in range(4):
            xi = Polynomial.monomial(j)
            for t in TIMES:
                value = float(pair(apply_v0(family, xi, t, 16), nu))
                oracle = central_difference_sensitivity(family, pi0, xi, t, 16, OracleConfig()).value
                worst = max(worst, abs(value - oracle))
    out.append(_check("<V0(t) xi | nu> vs central differences", worst, 1e-6))
    worst = 0.0
    for kappa in KAPPAS:
        wf = wf_family(kappa)
        nu = nu_functional(wf, dirac(0, 8), 8)
        for t in TIMES:
            expected = -math.expm1(-float(kappa) * t) / float(kappa)
            worst = max(worst, abs(float(pair(apply_v0(wf, X, t, 8), nu)) - expected))
    out.append(_check("wf first moment closed form", worst, 1e-10))
    worst = 0.0
    for t in (0.1, 1.0, 5.0):
        v = apply_v0(wf_family(1), Polynomial.monomial(0), t, 8)
        worst = max(worst, abs(float(v.coefficient(0)) - t), max((abs(float(c)) for c in v.coeffs[1:]), default=0.0))
    out.append(_check("V0(t) 1 = t", worst, 1e-14))
    worst = 0.0
    ou = ou_family()
    g = gaussian_moments(0, Fraction(1, 2), 16)
    nu = nu_functional(ou, g, 16)
    for n in range(9):
        for t in (0.1, 1.0, 2.0):
            value = float(pair(apply_v0(ou, Polynomial.monomial(n), t, 16), nu))
            worst = max(worst, abs(value - ou_moment_sensitivity_closed_form(n, t)))
    out.append(_check("ou moment sensitivity closed form", worst, 1e-9))
    return out


def recursion_suite():
    out = []
    bad = []
    for kappa in KAPPAS + (Fraction(7, 3),):
        a0 = matrix(wf_family(kappa), 0, 10)
        nu = derivative_at_zero(10)
        for n in range(2, 11):
            basis = wf_basis(n, kappa)
            for b0 in (Fraction(0), Fraction(1)):
                bs = wf_b_sequence(n, kappa, b0, 10).bs
                for a in (Fraction(0), Fraction(1)):
                    vec = np.array((basis.xi_n + Polynomial((a, b0))).padded(10), dtype=object)
                    for k in range(1, 11):
                        vec = a0.entries @ vec
                        expected = (basis.lambda_n ** k * basis.xi_n + Polynomial((0, bs[k]))).padded(10)
                        if list(vec) != expected or pair(Polynomial(list(vec)), nu) != bs[k]:
                            bad.append((kappa, n, b0, a, k))
    out.append(Check("quasi-eigen identity (exact)", not bad, f"failures={bad[:3]}"))
    worst_engine = worst_oracle = 0.0
    wf = wf_family(1)
    pi0 = dirac(0, 6)
    nu = nu_functional(wf, pi0, 6)
    for n in range(2, 7):
        xi = wf_basis(n, 1).xi_n
        for t in TIMES:
            rec = wf_xi_sensitivity(n, 1, t).value
            engine = float(pair(apply_v0(wf, xi, t, 6), nu))
            oracle = central_difference_sensitivity(wf, pi0, xi, t, 6, OracleConfig()).value
            worst_engine = max(worst_engine, abs(rec - engine))
            worst_oracle = max(worst_oracle, abs(rec - oracle))
    out.append(_check("recursion sum vs engine", worst_engine, 1e-8))
    out.append(_check("recursion sum vs oracle", worst_oracle, 1e-6))
    return out


def errata_suite(entries=None):
    entries = errata_report() if entries is None else entries
    return [
        Check(f"errata {e['id']}", e["verdict"] == "implemented convention confirmed",
              f"paper_margin={e['paper_margin']} implemented_agrees={e['implemented_agrees']}")
        for e in entries
    ]


SUITES = {
    "stationarity": stationarity_suite,
    "lemma": lemma_suite,
    "theorem": theorem_suite,
    "recursion": recursion_suite,
    "errata": errata_suite,
}


def run(scope: str) -> list[Check]:
    if scope == "all":
        return [c for name in SUITES for c in SUITES[name]()]
    if scope not in SUITES:
        raise KeyError(f"unknown validation scope {scope!r}")
    return SUITES[scope]()
