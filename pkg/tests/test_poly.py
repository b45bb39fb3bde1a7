from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repspace import exact
from repspace.poly import RationalPolynomial, poly_sum

RING = ("q1", "q2", "p1", "p2")
q1, q2, p1, p2 = RationalPolynomial.gens(RING)

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
monomials = st.tuples(*(st.integers(0, 2) for _ in RING))
polys = st.dictionaries(monomials, coeffs, max_size=5).map(lambda t: RationalPolynomial(RING, t))


def test_zero_coefficients_are_not_stored():
    f = RationalPolynomial(RING, {(1, 0, 0, 0): 2, (0, 1, 0, 0): 0})
    assert f.terms == {(1, 0, 0, 0): Fraction(2)}
    assert (q1 - q1).is_zero()
    assert (q1 - q1).terms == {}


def test_derivative_of_determinant():
    mu = q1 * p2 - q2 * p1
    assert mu.derivative("q1") == p2
    assert mu.derivative("p1") == -q2


def test_degree():
    qq = q1 * q1 + q2 * q2
    pp = p1 * p1 + p2 * p2
    assert (qq * pp).degree() == 4
    assert RationalPolynomial.zero(RING).degree() == -1
    assert (qq + 1).is_homogeneous() is False


def test_unknown_variable_rejected():
    with pytest.raises(KeyError):
        q1.derivative("z")
    with pytest.raises(KeyError):
        RationalPolynomial.variable(RING, "z")


def test_different_rings_do_not_mix():
    other = RationalPolynomial.variable(("x",), "x")
    with pytest.raises(ValueError):
        q1 + other


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f - f == RationalPolynomial.zero(RING)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_leibniz_rule(f, g):
    for v in RING:
        assert (f * g).derivative(v) == f.derivative(v) * g + f * g.derivative(v)


@settings(max_examples=40, deadline=None)
@given(polys, st.lists(coeffs, min_size=4, max_size=4))
def test_evaluation_is_a_ring_map(f, point):
    g = f * f + q1
    assert g.evaluate(point) == f.evaluate(point) ** 2 + point[0]


def test_exact_and_float_evaluation():
    f = Fraction(1, 3) * q1 * q1 - p2
    assert f.evaluate([Fraction(3), 0, 0, 1]) == Fraction(2)
    assert isinstance(f.evaluate([3.0, 0.0, 0.0, 1.0]), float)
    assert f.evaluate({"q1": 3, "q2": 0, "p1": 0, "p2": 1}) == 2
    assert f.gradient([3, 0, 0, 1]) == [2, 0, 0, -1]


def test_substitute_and_embed():
    x = RationalPolynomial.variable(("x", "y"), "x")
    y = RationalPolynomial.variable(("x", "y"), "y")
    f = x * x - y
    assert f.substitute({"x": q1 + p1, "y": q2}) == (q1 + p1) ** 2 - q2
    big = f.embed(("y", "z", "x"))
    assert big.variables == ("y", "z", "x")
    assert big.evaluate([1, 5, 2]) == 3


def test_canonical_text():
    f = Fraction(3, 2) * q1 * q1 * q2 - p2 + 4 - q1 * p1
    assert str(f) == "3/2*q1^2*q2 - q1*p1 - p2 + 4"
    assert str(-q1) == "-q1"
    assert str(RationalPolynomial.zero(RING)) == "0"


def test_power_and_sum():
    assert (q1 + 1) ** 2 == q1 * q1 + 2 * q1 + 1
    assert poly_sum([q1, q2, -q1], RING) == q2
    with pytest.raises(ValueError):
        q1 ** -1


def test_exact_linear_algebra():
    assert exact.rank([[1, 2], [2, 4]]) == 1
    ns = exact.nullspace([[1, 2], [2, 4]])
    assert len(ns) == 1 and ns[0][0] + 2 * ns[0][1] == 0
    assert exact.nullspace([], 3) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert exact.solve([[2, 0], [0, 4]], [1, 1]) == [Fraction(1, 2), Fraction(1, 4)]
    assert exact.solve([[1, 1], [1, 1]], [1, 2]) is None
    inv = exact.inverse([[2, 1], [1, 1]])
    assert exact.matmul(inv, [[2, 1], [1, 1]]) == [[1, 0], [0, 1]]
    assert exact.pivot_rows([[1, 0], [2, 0], [0, 1]]) == [0, 2]
