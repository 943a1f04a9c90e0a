from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qpmut.errors import DivisibilityError, DomainError, ParseError
from qpmut.exactalg import (LaurentPoly, RationalFunction, TropicalElement, divides,
                            laurent_div_exact, monomial_part, parse_rational, format_rational,
                            specialize, tropical_add, tropical_mul)
from qpmut.exactalg import linalg

from tests.strategies import fraction_matrix, laurent, nonzero, polynomial

X = [LaurentPoly.var(3, k) for k in (1, 2, 3)]


# Laurent polynomials

@given(laurent(), laurent(), laurent())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly.zero(3)
    assert a * LaurentPoly.one(3) == a


@given(laurent(), nonzero(laurent(max_terms=3)))
def test_div_exact_recovers_factor(a, b):
    assert laurent_div_exact(a * b, b) == a
    assert divides(b, a * b)


def test_div_exact_rejects_non_multiple():
    with pytest.raises(DivisibilityError):
        laurent_div_exact(X[0] + 1, X[1] + 1)
    with pytest.raises(DomainError):
        laurent_div_exact(X[0], LaurentPoly.zero(3))


def test_monomials_and_powers():
    m = LaurentPoly.monomial((1, -2, 0), 3)
    assert m ** -1 == LaurentPoly.monomial((-1, 2, 0), Fraction(1, 3))
    assert (X[0] + 1) ** 2 == X[0] * X[0] + 2 * X[0] + 1
    with pytest.raises(DomainError):
        (X[0] + 1) ** -1
    assert monomial_part(X[0] * X[1] + X[0] ** 2)[0] == (1, 0, 0)


def test_no_zero_coefficients_stored():
    p = LaurentPoly(2, {(1, 0): 1, (0, 1): 0})
    assert len(p) == 1
    assert (p - p).terms == []


@given(polynomial(), st.integers(-3, 3), st.integers(-3, 3))
def test_specialize_is_ring_map(p, s, t):
    vals = {1: LaurentPoly.const(3, s), 2: LaurentPoly.const(3, t)}
    q = p * p + p
    assert specialize(q, vals) == specialize(p, vals) * specialize(p, vals) + specialize(p, vals)


def test_constant_term_and_leading_term():
    p = 3 * X[0] * X[1] + X[2] + 1
    assert p.constant_term() == 1
    assert p.leading_term() == ((1, 1, 0), 3)
    assert p.degree_in(1) == 1


# rationals

def test_rational_strings():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"
    with pytest.raises(ParseError):
        parse_rational("1.5")
    with pytest.raises(DomainError):
        parse_rational("1/0")


# rational functions

@given(polynomial(max_terms=3), nonzero(polynomial(max_terms=3)), nonzero(polynomial(max_terms=3)))
def test_ratfunc_field_laws(a, b, c):
    f = RationalFunction(a, b)
    g = RationalFunction(c, b + c if not (b + c).is_zero() else b)
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) - g == f
    if not f.is_zero():
        assert f * f.inverse() == RationalFunction.const(3, 1)


def test_ratfunc_collapses_exact_quotients():
    f = RationalFunction(X[0] * X[0] - 1, X[0] - 1)
    assert f.is_laurent()
    assert f.as_laurent() == X[0] + 1
    with pytest.raises(DomainError):
        RationalFunction(X[0], LaurentPoly.zero(3))


def test_substitute_var():
    f = RationalFunction.from_laurent(X[0] + X[1])
    img = RationalFunction(X[1] + 1, X[0])
    assert f.substitute_var(1, img) == RationalFunction(X[1] + 1 + X[0] * X[1], X[0])


# tropical semifield

trop = st.tuples(*[st.integers(-4, 4)] * 3).map(TropicalElement)


@given(trop, trop, trop)
def test_tropical_laws(a, b, c):
    assert a + b == b + a
    assert a + a == a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * a.inverse() == TropicalElement.one(3)
    assert tropical_add(a, b) == a + b and tropical_mul(a, b) == a * b


def test_tropical_min_plus():
    a, b = TropicalElement((1, -2)), TropicalElement((0, 3))
    assert (a + b).exponents == (0, -2)
    assert (a * b).exponents == (1, 1)
    assert (a ** 3).exponents == (3, -6)


# linear algebra over Q

@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_rank_nullity(m, n, data):
    A = linalg.qmatrix(data.draw(fraction_matrix(m, n)), (m, n))
    N = linalg.nullspace(A)
    assert linalg.rank(A) + N.shape[1] == n
    assert linalg.is_zero(linalg.mat_mul(A, N))


@given(st.integers(1, 4), st.data())
def test_inverse_and_det(n, data):
    A = linalg.qmatrix(data.draw(fraction_matrix(n, n)), (n, n))
    d = linalg.det(A)
    assert linalg.is_invertible(A) == (d != 0)
    if d != 0:
        inv = linalg.inverse(A)
        assert np.array_equal(linalg.mat_mul(A, inv), linalg.identity(n))
        assert linalg.det(inv) == 1 / Fraction(d)


@given(st.integers(1, 4), st.data())
def test_solve(n, data):
    A = linalg.qmatrix(data.draw(fraction_matrix(n, n)), (n, n))
    x = linalg.qmatrix(data.draw(fraction_matrix(n, 1)), (n, 1))
    b = linalg.mat_mul(A, x)
    if linalg.is_invertible(A):
        assert np.array_equal(linalg.solve(A, b), x)


def test_extend_basis_and_intersection():
    base = linalg.qmatrix([[1], [0], [0]])
    extra = linalg.complete_to_basis(base)
    assert extra.shape == (3, 2)
    assert linalg.rank(linalg.hstack([base, extra], 3)) == 3
    u = linalg.qmatrix([[1, 0], [0, 1], [0, 0]])
    v = linalg.qmatrix([[0, 0], [1, 0], [0, 1]])
    assert linalg.intersection_dim(u, v) == 1
