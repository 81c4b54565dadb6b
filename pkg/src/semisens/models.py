"""Built-in Wright-Fisher and Ornstein-Uhlenbeck families.

Wright-Fisher (mutation, no selection), for ``theta >= 0`` and fixed ``kappa > 0``::

    A_theta = theta (1 - x) d/dx - kappa x d/dx + x (1 - x) d^2/dx^2

with stationary law Beta(theta, kappa) and the Dirac mass at 0 when
``theta = 0``.  Ornstein-Uhlenbeck with unit diffusion::

    A_theta = (theta - x) d/dx + 1/2 d^2/dx^2

with stationary law N(theta, 1/2).

The second half of the module is the quasi-eigenbasis recursion for the
unperturbed Wright-Fisher generator ``A_0``: polynomials ``xi_n`` with
``A_0 xi_n = lambda_n xi_n + b_{n,1} x`` and ``lambda_n = n(-kappa - n + 1)``,
which turn the theta-sensitivity of ``<xi_n | U_theta(t)* pi_0>`` into the
scalar series ``sum_k t^k/k! b_{n,k-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import TailBoundError
from .functionals import gaussian_moments
from .operators import GeneratorTerm, ParametricGeneratorFamily
from .polynomial import Polynomial, Scalar, as_scalar, to_exact

HALF = Fraction(1, 2)


def wf_family(kappa, half_diffusion: bool = False) -> ParametricGeneratorFamily:
    """Wright-Fisher generator family with back-mutation rate ``theta``.

    ``half_diffusion=True`` puts the population-genetics factor 1/2 on the
    diffusion term.  Every closed form in this package assumes the default.
    """
    kappa = as_scalar(kappa)
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    one = Fraction(1)
    diffusion = HALF if half_diffusion else one
    terms = (
        GeneratorTerm(Polynomial((one, -one)), 1, q0=Fraction(0), dq0=one),
        GeneratorTerm(Polynomial((Fraction(0), one)), 1, q0=-kappa, dq0=Fraction(0)),
        GeneratorTerm(Polynomial((Fraction(0), one, -one)), 2, q0=diffusion, dq0=Fraction(0)),
    )
    name = f"wf(kappa={kappa}{', half' if half_diffusion else ''})"
    return ParametricGeneratorFamily(terms, name=name)


def ou_family() -> ParametricGeneratorFamily:
    """Ornstein-Uhlenbeck generator family with location parameter ``theta``."""
    one, zero = Fraction(1), Fraction(0)
    terms = (
        GeneratorTerm(Polynomial((one,)), 1, q0=zero, dq0=one),
        GeneratorTerm(Polynomial((zero, one)), 1, q0=-one, dq0=zero),
        GeneratorTerm(Polynomial((one,)), 2, q0=HALF, dq0=zero),
    )
    return ParametricGeneratorFamily(terms, name="ou")


def wf_eigenvalue(n: int, kappa) -> Scalar:
    return n * (-kappa - n + 1)


@dataclass(frozen=True)
class WfBasisElement:
    n: int
    kappa: Scalar
    gammas: dict  # m -> gamma_{n,m}, 2 <= m <= n
    xi_n: Polynomial
    lambda_n: Scalar


def wf_basis(n: int, kappa) -> WfBasisElement:
    """Quasi-eigenvector ``xi_n = sum_{m=2}^n gamma_{n,m} x^m`` with ``gamma_{n,n} = 1``.

    ``gamma_{n,m-1} = m(m-1) gamma_{n,m} / (lambda_n - lambda_{m-1})`` for
    ``m = n, ..., 3``.
    """
    if n < 2:
        raise ValueError(f"basis elements start at n = 2, got {n}")
    kappa = as_scalar(kappa)
    lam = wf_eigenvalue(n, kappa)
    one = Fraction(1) if isinstance(lam, Fraction) else 1.0
    gammas = {n: one}
    for m in range(n, 2, -1):
        denom = lam - (m - 1) * (-kappa - m + 2)
        if denom == 0:
            raise ZeroDivisionError(
                f"gamma recursion hits a zero denominator at n={n}, m={m}, kappa={kappa}"
            )
        gammas[m - 1] = m * (m - 1) * gammas[m] / denom
    coeffs = [0 * one, 0 * one] + [gammas[m] for m in range(2, n + 1)]
    return WfBasisElement(n, kappa, dict(sorted(gammas.items())), Polynomial(coeffs), lam)


@dataclass(frozen=True)
class WfBSequence:
    n: int
    kappa: Scalar
    b0: Scalar
    bs: tuple  # b_{n,0}, ..., b_{n,kmax}


def wf_b_sequence(n: int, kappa, b0, kmax: int, gamma2=None) -> WfBSequence:
    """``b_{n,k} = -kappa b_{n,k-1} + lambda_n^{k-1} * 2 gamma_{n,2}``.

    ``gamma2`` overrides the basis coefficient (used to check the homogeneous
    recursion).
    """
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    kappa = as_scalar(kappa)
    b0 = as_scalar(b0)
    if gamma2 is None:
        gamma2 = wf_basis(n, kappa).gammas[2]
    lam = wf_eigenvalue(n, kappa)
    bs = [b0]
    power = lam ** 0
    for _ in range(kmax):
        bs.append(-kappa * bs[-1] + power * 2 * gamma2)
        power = power * lam
    return WfBSequence(n, kappa, b0, tuple(bs))


def wf_quasi_eigen_power(n: int, kappa, k: int, b0=Fraction(0), a=Fraction(0)) -> Polynomial:
    """Closed form of ``A_0^k [xi_n + b0 x + a]``: ``lambda_n^k xi_n + b_{n,k} x``.

    ``a`` does not enter: ``A_0`` annihilates constants.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    basis = wf_basis(n, kappa)
    b = wf_b_sequence(n, kappa, b0, k, gamma2=basis.gammas[2]).bs[k]
    return basis.lambda_n ** k * basis.xi_n + Polynomial((0 * b, b))


@dataclass(frozen=True)
class RecursionSum:
    """Partial sum of ``sum_{k>=1} t^k/k! b_{n,k-1}`` with a rigorous tail bound."""

    value: float
    exact_partial_sum: Fraction
    tail_bound: float
    kmax: int
    bs: tuple


def _exp_tail(x: float, k: int) -> float:
    """Bound on ``sum_{j>k} x^j / j!`` for ``x >= 0`` (requires ``k + 2 > x``)."""
    if x == 0:
        return 0.0
    log_term = (k + 1) * math.log(x) - math.lgamma(k + 2)
    return math.exp(log_term) / (1 - x / (k + 2))


def default_kmax(n: int, kappa, t, tol: float, cap: int = 400) -> int:
    """Smallest ``k`` with ``(|lambda_n| t)^k / k! < tol * 1e-2``, capped."""
    x = abs(float(wf_eigenvalue(n, as_scalar(kappa)))) * float(t)
    if x == 0:
        return 1
    target = math.log(tol * 1e-2)
    for k in range(1, cap + 1):
        if k * math.log(x) - math.lgamma(k + 1) < target:
            return k
    return cap


def wf_xi_sensitivity(n: int, kappa, t, kmax: int | None = None, tol: float = 1e-12) -> RecursionSum:
    """theta-derivative at 0 of ``<xi_n | U_theta(t)* delta_0>`` from the b-recursion.

    The terms alternate and grow like ``(|lambda_n| t)^k / k!`` before
    decaying, so the partial sum is accumulated in exact rationals (floats
    ``t``/``kappa`` are converted without rounding) and rounded once.  The
    tail bound uses ``|b_{n,k}| <= 2|gamma_{n,2}| (|lambda|^k + kappa^k) / |lambda + kappa|``.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    kappa_q = to_exact(as_scalar(kappa))
    t_q = to_exact(t)
    if kmax is None:
        kmax = default_kmax(n, kappa_q, t_q, tol)
    basis = wf_basis(n, kappa_q)
    seq = wf_b_sequence(n, kappa_q, Fraction(0), max(kmax - 1, 0), gamma2=basis.gammas[2])
    total = Fraction(0)
    term_factor = Fraction(1)
    for k in range(1, kmax + 1):
        term_factor = term_factor * t_q / k
        total += term_factor * seq.bs[k - 1]
    lam = abs(float(basis.lambda_n))
    kap = float(kappa_q)
    tf = float(t_q)
    scale = 2 * abs(float(basis.gammas[2])) / abs(float(basis.lambda_n + kappa_q))
    # sum_{k>K} t^k/k! |b_{k-1}| <= scale * sum_{k>K} t^k/k! (lam^{k-1} + kap^{k-1})
    tail = 0.0
    for rate in (lam, kap):
        x = rate * tf
        if x == 0:
            continue
        if kmax + 2 <= x:
            tail = math.inf
            break
        tail += _exp_tail(x, kmax) / rate
    tail *= scale
    if not tail <= tol:
        raise TailBoundError(
            f"n={n}, kappa={kappa}, t={t}: tail bound {tail:.3e} exceeds tol {tol:.1e} "
            f"at kmax={kmax}; raise kmax"
        )
    return RecursionSum(float(total), total, tail, kmax, seq.bs)


def ou_moment_sensitivity_closed_form(n: int, t: float) -> float:
    """d/dtheta at 0 of ``E[X^n]`` for ``X ~ N((1 - e^{-t}) theta, 1/2)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 0.0
    g = gaussian_moments(Fraction(0), HALF, n - 1)
    return -math.expm1(-t) * n * float(g[n - 1])
