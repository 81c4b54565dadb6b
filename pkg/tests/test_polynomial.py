from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import polynomials, small_fractions
from semisens.polynomial import (
    NEG_INF,
    Polynomial,
    as_scalar,
    differentiate,
    evaluate,
    format_scalar,
    multiply,
)

P = lambda *c: Polynomial([Fraction(v) for v in c])


def test_normalization_and_degree():
    assert P(1, 2, 0, 0).coeffs == (1, 2)
    assert P(0, 0).is_zero
    assert P().degree == NEG_INF
    assert P(0, 0, 3).degree == 2


@pytest.mark.parametrize(
    "p, order, expected",
    [
        (P(0, 0, 1), 1, P(0, 2)),
        (P(1), 1, P()),
        (P(0, -1, 0, 1), 2, P(0, 6)),
        (P(5, 4), 0, P(5, 4)),
    ],
)
def test_differentiate(p, order, expected):
    assert differentiate(p, order) == expected


def test_differentiate_rejects_negative_order():
    with pytest.raises(ValueError):
        differentiate(P(1), -1)


@pytest.mark.parametrize(
    "p, q, expected",
    [
        (P(0, 1), P(1, -1), P(0, 1, -1)),
        (P(), P(3, 4), P()),
        (P(1, 1), P(1, 1), P(1, 2, 1)),
    ],
)
def test_multiply(p, q, expected):
    assert multiply(p, q) == expected


@pytest.mark.parametrize(
    "p, x0, expected",
    [(P(-1, 0, 1), 0, -1), (P(0, 1), 1, 1), (P(2, 3, 1), 2, 12)],
)
def test_evaluate(p, x0, expected):
    assert evaluate(p, x0) == expected


def test_float_backend_mixes_with_exact():
    p = Polynomial([0.5, 1.0])
    assert differentiate(p * P(0, 1), 1) == Polynomial([0.5, 2.0])
    assert evaluate(p, 2) == 2.5


def test_scalar_parsing_and_formatting():
    assert as_scalar("3/4") == Fraction(3, 4)
    assert as_scalar(2) == Fraction(2) and isinstance(as_scalar(2), Fraction)
    assert isinstance(as_scalar(0.25), float)
    assert format_scalar(Fraction(-6, 5)) == "-6/5"
    assert format_scalar(Fraction(4)) == "4"
    assert format_scalar(0.5) == 0.5
    with pytest.raises(TypeError):
        as_scalar(True)


@given(polynomials(), polynomials())
def test_leibniz_rule_exact(p, q):
    lhs = differentiate(multiply(p, q), 1)
    rhs = multiply(differentiate(p, 1), q) + multiply(p, differentiate(q, 1))
    assert lhs == rhs


@given(polynomials(), polynomials(), small_fractions, small_fractions, small_fractions)
def test_evaluate_is_linear(p, q, a, b, x0):
    assert evaluate(a * p + b * q, x0) == a * evaluate(p, x0) + b * evaluate(q, x0)


@given(polynomials(12), st.integers(0, 6), st.integers(0, 6))
def test_derivative_orders_compose(p, a, b):
    assert differentiate(p, a + b) == differentiate(differentiate(p, a), b)


@given(polynomials(), polynomials())
def test_product_degree_adds(p, q):
    if not p.is_zero and not q.is_zero:
        assert multiply(p, q).degree == p.degree + q.degree
