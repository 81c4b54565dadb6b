"""Linear functionals on polynomials, stored as truncated moment sequences.

A functional ``mu`` is determined by its values on monomials,
``m_n = <x^n | mu>``; the pairing with a polynomial is the finite sum
``sum_n coeff_n * m_n`` and the adjoint of a matrix acts on the moment vector
by its transpose.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, TruncationDegreeError
from .operators import OperatorMatrix
from .polynomial import Polynomial, as_scalar, format_scalar, is_exact


@dataclass(frozen=True)
class MomentFunctional:
    moments: tuple
    probability: bool = False
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "moments", tuple(self.moments))
        if not self.moments:
            raise ValueError("a moment functional needs at least m_0")

    @property
    def n(self) -> int:
        return len(self.moments) - 1

    @property
    def is_exact(self) -> bool:
        return all(is_exact(m) for m in self.moments)

    def __getitem__(self, k):
        return self.moments[k]

    def __len__(self):
        return len(self.moments)

    def restrict(self, n: int) -> "MomentFunctional":
        """The same functional seen on polynomials of degree ``<= n``."""
        if n > self.n:
            raise TruncationDegreeError(f"functional known up to degree {self.n}, need {n}")
        return MomentFunctional(self.moments[: n + 1], self.probability, self.label)

    def __add__(self, other: "MomentFunctional"):
        _check_same_n(self, other)
        return MomentFunctional([a + b for a, b in zip(self.moments, other.moments)])

    def __sub__(self, other: "MomentFunctional"):
        _check_same_n(self, other)
        return MomentFunctional([a - b for a, b in zip(self.moments, other.moments)])

    def __mul__(self, c):
        return MomentFunctional([c * m for m in self.moments])

    __rmul__ = __mul__

    def __neg__(self):
        return MomentFunctional([-m for m in self.moments])

    def to_rows(self) -> list[tuple[int, object]]:
        return [(k, format_scalar(m)) for k, m in enumerate(self.moments)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "m_n"])
        for k, m in self.to_rows():
            writer.writerow([k, m if isinstance(m, str) else repr(m)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps([format_scalar(m) for m in self.moments])

    @classmethod
    def from_json(cls, text: str, probability: bool = False) -> "MomentFunctional":
        return cls([as_scalar(v) for v in json.loads(text)], probability)


def _check_same_n(a: MomentFunctional, b: MomentFunctional):
    if a.n != b.n:
        raise DimensionError(f"truncation degrees differ: {a.n} vs {b.n}")


def pair(xi: Polynomial, mu: MomentFunctional):
    """``<xi | mu>``; refuses to silently drop coefficients above ``mu.n``."""
    if xi.degree > mu.n:
        raise TruncationDegreeError(
            f"cannot pair a degree-{xi.degree} polynomial with a functional truncated at {mu.n}"
        )
    acc = 0
    for c, m in zip(xi.coeffs, mu.moments):
        acc = acc + c * m
    return acc


def dirac(a, n: int) -> MomentFunctional:
    """Point evaluation at ``a``: ``m_k = a^k``."""
    a = as_scalar(a)
    one = Fraction(1) if is_exact(a) else 1.0
    moments = [one]
    for _ in range(n):
        moments.append(moments[-1] * a)
    return MomentFunctional(moments, probability=True, label=f"dirac({format_scalar(a)})")


def _positive(name, value):
    value = as_scalar(value)
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def beta_moments(theta, kappa, n: int) -> MomentFunctional:
    """Moments of Beta(theta, kappa) by the telescoping product.

    ``m_k = prod_{i<k} (theta + i) / (theta + kappa + i)``; no Gamma functions,
    so rational inputs give exact moments.
    """
    theta = _positive("theta", theta)
    kappa = _positive("kappa", kappa)
    one = Fraction(1) if is_exact(theta) and is_exact(kappa) else 1.0
    moments = [one]
    for i in range(n):
        moments.append(moments[-1] * (theta + i) / (theta + kappa + i))
    return MomentFunctional(moments, probability=True, label="beta")


def wf_stationary_derivative(kappa, n: int) -> MomentFunctional:
    """Limit of ``(pi_theta - pi_0) / theta`` for the Wright-Fisher Beta family.

    ``m_0 = 0`` and ``m_k = (k-1)! / prod_{i<k} (kappa + i)`` for ``k >= 1``.
    """
    kappa = _positive("kappa", kappa)
    zero = Fraction(0) if is_exact(kappa) else 0.0
    moments = [zero]
    if n >= 1:
        moments.append(1 / kappa)
    for k in range(2, n + 1):
        moments.append(moments[-1] * (k - 1) / (kappa + k - 1))
    return MomentFunctional(moments, label="wf_stationary_derivative")


def gaussian_moments(mean, variance, n: int) -> MomentFunctional:
    """Raw moments of N(mean, variance) via ``m_k = mean*m_{k-1} + (k-1)*var*m_{k-2}``."""
    mean = as_scalar(mean)
    variance = _positive("variance", variance)
    one = Fraction(1) if is_exact(mean) and is_exact(variance) else 1.0
    moments = [one]
    if n >= 1:
        moments.append(one * mean)
    for k in range(2, n + 1):
        moments.append(mean * moments[k - 1] + (k - 1) * variance * moments[k - 2])
    return MomentFunctional(moments, probability=True, label="gaussian")


def derivative_at_zero(n: int) -> MomentFunctional:
    """The functional ``xi -> xi'(0)``."""
    moments = [Fraction(0)] * (n + 1)
    if n >= 1:
        moments[1] = Fraction(1)
    return MomentFunctional(moments, label="d/dx|0")


def zero_functional(n: int) -> MomentFunctional:
    return MomentFunctional([Fraction(0)] * (n + 1))


def adjoint_apply(m: OperatorMatrix, mu: MomentFunctional) -> MomentFunctional:
    """Transpose action: ``result_j = sum_i entries[i, j] * m_i``."""
    if m.n != mu.n:
        raise DimensionError(f"matrix degree {m.n} does not match functional degree {mu.n}")
    size = m.n + 1
    out = []
    entries = m.entries
    for j in range(size):
        acc = 0
        for i in range(size):
            e = entries[i, j]
            if e != 0:
                acc = acc + e * mu.moments[i]
        out.append(acc)
    if all(is_exact(v) for v in out):
        out = [Fraction(v) for v in out]
    else:
        out = [float(v) for v in out]
    return MomentFunctional(out)


def moments_from_sequence(values: Sequence, probability: bool = False) -> MomentFunctional:
    return MomentFunctional([as_scalar(v) for v in values], probability)
