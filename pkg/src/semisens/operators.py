"""Parametric polynomial-coefficient generators and their triangular matrices.

A family is ``A_theta = sum_i q_i(theta) * p_i(x) * d^i/dx^i`` with affine
``q_i(theta) = q0 + dq0 * theta``.  Requiring ``degree(p_i) <= i`` makes every
``A_theta`` map polynomials of degree ``<= k`` into themselves, so on the basis
``(1, x, ..., x^N)`` the operator is an upper-triangular matrix and truncation
at ``N`` is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from .errors import DegreeConditionError, ConfigError
from .polynomial import Polynomial, Scalar, as_scalar, differentiate, is_exact, multiply


@dataclass(frozen=True)
class GeneratorTerm:
    """One term ``(q0 + dq0*theta) * p(x) * d^order/dx^order``."""

    p: Polynomial
    order: int
    q0: Scalar = Fraction(0)
    dq0: Scalar = Fraction(0)

    def __post_init__(self):
        if self.order < 1:
            raise DegreeConditionError(f"term order must be >= 1, got {self.order}")
        if self.p.degree > self.order:
            raise DegreeConditionError(
                f"coefficient polynomial of degree {self.p.degree} exceeds term order "
                f"{self.order}; the family would not preserve polynomial degree"
            )

    def q(self, theta):
        return self.q0 + self.dq0 * theta


@dataclass(frozen=True)
class ParametricGeneratorFamily:
    terms: tuple = ()
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def is_exact(self) -> bool:
        return all(
            is_exact(t.q0) and is_exact(t.dq0) and t.p.is_exact for t in self.terms
        )

    @property
    def is_theta_independent(self) -> bool:
        return all(t.dq0 == 0 for t in self.terms)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """``entries[i, j]`` is the coefficient of ``x^i`` in ``A(x^j)``.

    Exact matrices use an ``object`` array of :class:`Fraction`; floating ones
    use ``float64``.
    """

    entries: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0] - 1

    @property
    def is_exact(self) -> bool:
        return self.entries.dtype == object

    def as_float(self) -> "OperatorMatrix":
        if not self.is_exact:
            return self
        return OperatorMatrix(self.entries.astype(float))

    def is_upper_triangular(self) -> bool:
        return not np.any(np.tril(self.entries, -1) != 0)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.entries @ other.entries)
        return self.entries @ np.asarray(other, dtype=self.entries.dtype)

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(
            np.all(self.entries == other.entries)
        )

    def __repr__(self):
        return f"OperatorMatrix(n={self.n}, exact={self.is_exact})"


def apply(family: ParametricGeneratorFamily, theta, p: Polynomial) -> Polynomial:
    """``A_theta p = sum_i q_i(theta) * p_i * p^(i)``."""
    out = Polynomial((), p.interval)
    for term in family.terms:
        q = term.q(theta)
        if q == 0:
            continue
        out = out + q * multiply(term.p, differentiate(p, term.order))
    return out


def matrix(family: ParametricGeneratorFamily, theta, n: int) -> OperatorMatrix:
    """Matrix of ``A_theta`` restricted to polynomials of degree ``<= n``."""
    if n < 0:
        raise ValueError("truncation degree must be nonnegative")
    exact = family.is_exact and is_exact(theta)
    if exact:
        entries = np.full((n + 1, n + 1), Fraction(0), dtype=object)
    else:
        entries = np.zeros((n + 1, n + 1))
    for j in range(n + 1):
        column = apply(family, theta, Polynomial.monomial(j))
        for i, c in enumerate(column.coeffs):
            entries[i, j] = c if exact else float(c)
    return OperatorMatrix(entries)


def derivative_family_at_zero(family: ParametricGeneratorFamily) -> ParametricGeneratorFamily:
    """The theta-independent family ``sum_i dq0_i * p_i * d^i``."""
    terms = [
        GeneratorTerm(t.p, t.order, q0=t.dq0, dq0=Fraction(0))
        for t in family.terms
        if t.dq0 != 0
    ]
    return ParametricGeneratorFamily(tuple(terms), name=f"d/dtheta {family.name}")


_SCALAR_SCHEMA = {
    "oneOf": [
        {"type": "number"},
        {"type": "string", "pattern": r"^\s*[-+]?\d+(\s*/\s*\d+|\.\d*)?\s*$"},
    ]
}

FAMILY_SCHEMA = {
    "type": "object",
    "required": ["terms"],
    "properties": {
        "name": {"type": "string"},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["order", "p_coeffs"],
                "properties": {
                    "order": {"type": "integer", "minimum": 1},
                    "p_coeffs": {"type": "array", "items": _SCALAR_SCHEMA},
                    "q0": _SCALAR_SCHEMA,
                    "dq0": _SCALAR_SCHEMA,
                },
                "additionalProperties": False,
            },
        },
    },
}


def _parse_scalar(value):
    if isinstance(value, str):
        return Fraction(value.replace(" ", ""))
    return as_scalar(value)


def family_from_dict(doc) -> ParametricGeneratorFamily:
    """Build a family from its JSON document form.

    A bare list is accepted as shorthand for ``{"terms": [...]}``.
    """
    if isinstance(doc, list):
        doc = {"terms": doc}
    try:
        jsonschema.validate(doc, FAMILY_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid family document at {where}: {exc.message}") from None
    terms = []
    for idx, raw in enumerate(doc["terms"]):
        p = Polynomial([_parse_scalar(c) for c in raw["p_coeffs"]])
        try:
            terms.append(
                GeneratorTerm(
                    p,
                    raw["order"],
                    q0=_parse_scalar(raw.get("q0", 0)),
                    dq0=_parse_scalar(raw.get("dq0", 0)),
                )
            )
        except DegreeConditionError as exc:
            raise DegreeConditionError(f"term {idx} (order {raw['order']}): {exc}") from None
    return ParametricGeneratorFamily(tuple(terms), name=doc.get("name", "custom"))


def load_family(path) -> ParametricGeneratorFamily:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read family document {path}: {exc}") from None
    return family_from_dict(doc)


def family_to_dict(family: ParametricGeneratorFamily) -> dict:
    from .polynomial import format_scalar

    return {
        "name": family.name,
        "terms": [
            {
                "order": t.order,
                "p_coeffs": [format_scalar(c) for c in t.p.coeffs],
                "q0": format_scalar(t.q0),
                "dq0": format_scalar(t.dq0),
            }
            for t in family.terms
        ],
    }
