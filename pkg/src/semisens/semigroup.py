"""Exponentials ``U(t) = e^{tM}`` and integrals ``V(t) = int_0^t e^{sM} ds``.

Both run in double precision on the triangular matrices produced by
:func:`semisens.operators.matrix`.  ``U`` uses scaling and squaring over a
truncated Taylor series; ``V`` is the upper-right block of the exponential of
the augmented matrix ``[[M, I], [0, 0]]``.  Direct (unscaled) series are kept
for cross-checking on small ``||tM||``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import ExactScalarError, NumericFailure, TruncationDegreeError
from .operators import OperatorMatrix, ParametricGeneratorFamily, matrix
from .polynomial import EPS_MACH, Polynomial

MAX_TERMS = 200
MAX_SQUARINGS = 40


def default_tol() -> float:
    """Default series tolerance, overridable through ``SEMISENS_TOL``."""
    raw = os.environ.get("SEMISENS_TOL")
    if raw:
        value = float(raw)
        if not value > 0:
            raise ValueError(f"SEMISENS_TOL must be positive, got {raw!r}")
        return value
    return 1e-12


@dataclass(frozen=True)
class PropagatorPair:
    u: OperatorMatrix
    v: OperatorMatrix
    t: float
    tol: float
    terms_used: int
    squarings: int


def _float_entries(m) -> np.ndarray:
    if isinstance(m, OperatorMatrix):
        if m.is_exact:
            raise ExactScalarError(
                "exponentials are transcendental; convert with OperatorMatrix.as_float() first"
            )
        a = m.entries
    else:
        a = np.asarray(m)
        if a.dtype == object:
            raise ExactScalarError("exact (object) matrices are not accepted here")
        a = a.astype(float, copy=False)
    if not np.all(np.isfinite(a)):
        raise NumericFailure("matrix has non-finite entries")
    return a


def _max_norm(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def expm_taylor(a: np.ndarray, tol: float) -> tuple[np.ndarray, int, int]:
    """Scaling-and-squaring exponential of ``a``.

    Returns ``(exp(a), terms_used, squarings)``.  The scale ``s`` makes
    ``||a||_inf / 2^s <= 1/2``; the Taylor sum stops once a term drops below
    ``tol`` times the running sum (max-norm).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    size = a.shape[0]
    norm = float(np.max(np.sum(np.abs(a), axis=1))) if size else 0.0
    s = 0 if norm <= 0.5 else int(math.ceil(math.log2(norm / 0.5)))
    if s > MAX_SQUARINGS:
        raise NumericFailure(f"||tM|| = {norm:.3e} needs {s} squarings (> {MAX_SQUARINGS})")
    y = a / (2.0 ** s)
    stop = max(tol, EPS_MACH)
    total = np.eye(size)
    term = np.eye(size)
    for k in range(1, MAX_TERMS + 1):
        term = (term @ y) / k
        total = total + term
        if _max_norm(term) <= stop * _max_norm(total):
            break
    else:
        raise NumericFailure(f"Taylor series did not reach tol={tol} in {MAX_TERMS} terms")
    for _ in range(s):
        total = total @ total
    if not np.all(np.isfinite(total)):
        raise NumericFailure("exponential overflowed")
    return total, k, s


def propagator(m, t: float, tol: float | None = None) -> OperatorMatrix:
    """``e^{tM}``."""
    return propagator_pair(m, t, tol, with_integral=False).u


def integral_propagator(m, t: float, tol: float | None = None) -> OperatorMatrix:
    """``V(t) = sum_{n>=1} t^n/n! M^{n-1} = int_0^t e^{sM} ds``."""
    return propagator_pair(m, t, tol).v


def propagator_pair(m, t: float, tol: float | None = None, with_integral: bool = True) -> PropagatorPair:
    """Compute ``U(t)`` and ``V(t)`` together from one augmented exponential."""
    tol = default_tol() if tol is None else tol
    if t < 0:
        raise ValueError("t must be nonnegative")
    a = _float_entries(m)
    size = a.shape[0]
    if not with_integral:
        u, terms, squarings = expm_taylor(t * a, tol)
        return PropagatorPair(OperatorMatrix(u), OperatorMatrix(np.zeros_like(u)), t, tol, terms, squarings)
    block = np.zeros((2 * size, 2 * size))
    block[:size, :size] = a
    block[:size, size:] = np.eye(size)
    e, terms, squarings = expm_taylor(t * block, tol)
    u = e[:size, :size].copy()
    v = e[:size, size:].copy()
    return PropagatorPair(OperatorMatrix(u), OperatorMatrix(v), t, tol, terms, squarings)


def propagator_series(m, t: float, tol: float | None = None) -> OperatorMatrix:
    """Raw Taylor series for ``e^{tM}`` without scaling (debug mode, small ``||tM||`` only)."""
    tol = default_tol() if tol is None else tol
    a = _float_entries(m) * t
    size = a.shape[0]
    total = np.eye(size)
    term = np.eye(size)
    for k in range(1, MAX_TERMS + 1):
        term = (term @ a) / k
        total = total + term
        if _max_norm(term) <= max(tol, EPS_MACH) * _max_norm(total):
            return OperatorMatrix(total)
    raise NumericFailure(f"raw series did not converge in {MAX_TERMS} terms")


def integral_series(m, t: float, tol: float | None = None) -> OperatorMatrix:
    """Direct series ``sum_{n>=1} t^n/n! M^{n-1}`` (cross-check for small ``||tM||``)."""
    tol = default_tol() if tol is None else tol
    a = _float_entries(m)
    size = a.shape[0]
    term = t * np.eye(size)  # n = 1
    total = term.copy()
    if t == 0:
        return OperatorMatrix(total)
    for n in range(2, MAX_TERMS + 1):
        term = (term @ a) * (t / n)
        total = total + term
        if _max_norm(term) <= max(tol, EPS_MACH) * _max_norm(total):
            return OperatorMatrix(total)
    raise NumericFailure(f"integral series did not converge in {MAX_TERMS} terms")


def simpson_integral_propagator(m, t: float, nodes: int = 129, tol: float | None = None) -> OperatorMatrix:
    """Composite Simpson quadrature of ``s -> e^{sM}`` on ``[0, t]``."""
    if nodes < 3 or nodes % 2 == 0:
        raise ValueError("Simpson's rule needs an odd number of nodes >= 3")
    a = _float_entries(m)
    h = t / (nodes - 1)
    total = np.zeros_like(a)
    for k in range(nodes):
        weight = 1 if k in (0, nodes - 1) else (4 if k % 2 else 2)
        total = total + weight * propagator(a, k * h, tol).entries
    return OperatorMatrix(total * (h / 3))


def apply_v0(
    family: ParametricGeneratorFamily,
    xi: Polynomial,
    t: float,
    n: int,
    tol: float | None = None,
) -> Polynomial:
    """``V_0(t) xi`` for the unperturbed generator of ``family``."""
    if xi.degree > n:
        raise TruncationDegreeError(f"xi has degree {xi.degree} > truncation degree {n}")
    v = integral_propagator(matrix(family, 0, n).as_float(), t, tol)
    coeffs = v.entries @ np.array([float(c) for c in xi.padded(n)])
    return Polynomial([float(c) for c in coeffs], xi.interval)


def apply_u(
    family: ParametricGeneratorFamily,
    theta,
    xi: Polynomial,
    t: float,
    n: int,
    tol: float | None = None,
) -> Polynomial:
    """``U_theta(t) xi``."""
    if xi.degree > n:
        raise TruncationDegreeError(f"xi has degree {xi.degree} > truncation degree {n}")
    u = propagator(matrix(family, theta, n).as_float(), t, tol)
    coeffs = u.entries @ np.array([float(c) for c in xi.padded(n)])
    return Polynomial([float(c) for c in coeffs], xi.interval)
