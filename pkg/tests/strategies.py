"""Hypothesis strategies shared by the test modules."""
from fractions import Fraction

from hypothesis import strategies as st

from qpmut.exactalg import LaurentPoly

small_int = st.integers(-3, 3)
coef = st.one_of(st.integers(-5, 5), st.fractions(min_value=-3, max_value=3, max_denominator=4))


def laurent(nvars=3, max_terms=4, lo=-2, hi=3, coeffs=coef):
    exps = st.tuples(*[st.integers(lo, hi)] * nvars)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda d: LaurentPoly(nvars, d))


def polynomial(nvars=3, max_terms=4, hi=2, coeffs=st.integers(-4, 4)):
    return laurent(nvars, max_terms, 0, hi, coeffs)


def nonzero(strategy):
    return strategy.filter(lambda p: not p.is_zero())


def exchange_matrix(n):
    """Skew-symmetric integer n x n matrices with small entries."""
    def build(vals):
        b = [[0] * n for _ in range(n)]
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                b[i][j] = vals[k]
                b[j][i] = -vals[k]
                k += 1
        return b
    return st.lists(st.integers(-2, 2), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2).map(build)


def fraction_matrix(rows, cols):
    return st.lists(st.lists(st.integers(-3, 3).map(Fraction), min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows)
