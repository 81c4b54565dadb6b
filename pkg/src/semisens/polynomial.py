"""Dense polynomials in the monomial basis over exact or floating scalars.

Two scalar realizations are supported behind the same arithmetic:
:class:`fractions.Fraction` (and ``int``) for bit-exact work, and ``float``
for anything that has to go through an exponential.  Mixing them promotes to
``float`` the same way Python arithmetic does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, float, int]

#: Zero polynomial degree sentinel.
NEG_INF = -math.inf

EPS_MACH = 2.0 ** -52


def is_exact(value) -> bool:
    """True for rational scalars (``int``/``Fraction``), False for floats."""
    return isinstance(value, Rational) and not isinstance(value, bool)


def as_scalar(value) -> Scalar:
    """Normalize user input to a scalar.

    Integers and ``"num/den"`` strings become :class:`Fraction`; floats stay
    floats.  Float-looking strings (``"0.5"``) are parsed as exact decimals.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    return float(value)


def to_exact(value) -> Fraction:
    """Exact rational image of a scalar (floats converted without rounding)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(as_scalar(value))


def format_scalar(value) -> str | float:
    """Serialization form: exact scalars as ``"num/den"`` strings, floats as floats."""
    if is_exact(value):
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return float(value)


def _strip(coeffs: Iterable[Scalar]) -> tuple:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Polynomial:
    """Polynomial ``sum_n coeffs[n] * x**n``.

    ``interval`` is carried as metadata only; evaluation never clips to it.
    """

    coeffs: tuple = ()
    interval: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def monomial(cls, k: int, coeff: Scalar = Fraction(1), interval=None) -> "Polynomial":
        if k < 0:
            raise ValueError("monomial power must be nonnegative")
        return cls((Fraction(0),) * k + (coeff,), interval)

    @classmethod
    def constant(cls, c: Scalar, interval=None) -> "Polynomial":
        return cls((c,), interval)

    @property
    def degree(self):
        """Highest index with a nonzero coefficient; ``-inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def coefficient(self, n: int) -> Scalar:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else 0

    def padded(self, n: int) -> list:
        """Coefficient list of length ``n + 1``; raises if the degree exceeds ``n``."""
        from .errors import TruncationDegreeError

        if self.degree > n:
            raise TruncationDegreeError(
                f"polynomial of degree {self.degree} exceeds truncation degree {n}"
            )
        zero = Fraction(0) if self.is_exact else 0.0
        return list(self.coeffs) + [zero] * (n + 1 - len(self.coeffs))

    def __call__(self, x0):
        return evaluate(self, x0)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial(out, self.interval or other.interval)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs], self.interval)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return multiply(self, other)
        return Polynomial([other * c for c in self.coeffs], self.interval)

    __rmul__ = __mul__

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        terms = []
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            c = format_scalar(c)
            terms.append(f"{c}" if n == 0 else f"{c}*x^{n}")
        return "Polynomial(" + " + ".join(terms) + ")"


X = Polynomial((Fraction(0), Fraction(1)))
ONE = Polynomial((Fraction(1),))


def differentiate(p: Polynomial, order: int = 1) -> Polynomial:
    """``order``-th derivative of ``p``."""
    if order < 0:
        raise ValueError("derivative order must be nonnegative")
    coeffs = p.coeffs
    if order == 0:
        return p
    out = []
    for n in range(order, len(coeffs)):
        falling = 1
        for k in range(n - order + 1, n + 1):
            falling *= k
        out.append(falling * coeffs[n])
    return Polynomial(out, p.interval)


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    """Product by coefficient convolution."""
    if p.is_zero or q.is_zero:
        return Polynomial((), p.interval or q.interval)
    a, b = p.coeffs, q.coeffs
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return Polynomial(out, p.interval or q.interval)


def evaluate(p: Polynomial, x0):
    """Horner evaluation at ``x0``."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * x0 + c
    return acc


def polynomial_from_coeffs(coeffs: Sequence, interval=None) -> Polynomial:
    return Polynomial([as_scalar(c) for c in coeffs], interval)
