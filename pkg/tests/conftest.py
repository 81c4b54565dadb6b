from fractions import Fraction

from hypothesis import strategies as st

small_fractions = st.fractions(min_value=-10, max_value=10, max_denominator=20)


def polynomials(max_degree=10, elements=small_fractions):
    from semisens.polynomial import Polynomial

    return st.lists(elements, min_size=0, max_size=max_degree + 1).map(Polynomial)


def random_family(draw_coeffs):
    """Family with degree(p_i) <= i for orders 1..3 and affine theta-dependence."""
    from semisens.operators import GeneratorTerm, ParametricGeneratorFamily
    from semisens.polynomial import Polynomial

    terms = []
    for order, (pc, q0, dq0) in enumerate(draw_coeffs, start=1):
        terms.append(GeneratorTerm(Polynomial(pc[: order + 1]), order, q0=q0, dq0=dq0))
    return ParametricGeneratorFamily(tuple(terms))


@st.composite
def families(draw, max_order=3):
    coeffs = []
    for order in range(1, max_order + 1):
        pc = draw(st.lists(small_fractions, min_size=0, max_size=order + 1))
        coeffs.append((pc, draw(small_fractions), draw(small_fractions)))
    return random_family(coeffs)


HALF = Fraction(1, 2)
