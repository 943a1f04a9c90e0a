import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qpmut.decrep import DecoratedRep, mutate_rep_sequence, negative_simple
from qpmut.errors import BadPrimeError, DimensionError, ResourceCapError
from qpmut.exactalg import LaurentPoly
from qpmut.grassmann import (HAVE_NUMBA, cluster_character, count_subreps_mod_p, euler_char,
                             f_polynomial_rep, gaussian_binomial_count, interpolate,
                             point_count_polynomial, substitution_map, subspaces)
from qpmut.qpalg import QP
from qpmut.quiver import IceQuiver, Quiver
from qpmut.seedengine import initial_seed, mutate_seed, principal_extension
from qpmut.verify import corpus, random_rep

A2 = corpus("a2").qp
A3 = corpus("a3").qp
K1 = QP.make(Quiver(1, []))
BACKENDS = ["numpy", "python"] + (["numba"] if HAVE_NUMBA else [])


@pytest.mark.parametrize("d,e,p", [(2, 1, 2), (3, 1, 3), (4, 2, 2), (3, 2, 5), (4, 0, 3), (4, 4, 2)])
def test_subspace_enumeration_matches_gaussian_binomial(d, e, p):
    bases, pivots = subspaces(d, e, p)
    assert bases.shape[0] == gaussian_binomial_count(d, e, p)
    # reduced echelon form: distinct rows spaces
    assert len({b.tobytes() for b in bases}) == bases.shape[0]


def test_chi_gr1_k2_is_two():
    m = DecoratedRep(K1, (2,), (0,), {})
    for b in BACKENDS:
        assert count_subreps_mod_p(m, (1,), 2, b) == 3
    assert point_count_polynomial(m, (1,)) == [1, 1]
    assert euler_char(m, (1,)) == 2


def _zero_rep(dims):
    n = len(dims)
    q = Quiver(n, [(f"a{k}", k, k + 1) for k in range(1, n)])
    return DecoratedRep(QP.make(q), dims, (0,) * n, {})


def _dims_up_to(total, n):
    for dims in itertools.product(range(total + 1), repeat=n):
        if sum(dims) <= total:
            yield dims


@pytest.mark.parametrize("n", [1, 2, 3])
def test_product_formula_all_dims_up_to_four(n):
    for dims in _dims_up_to(4, n):
        m = _zero_rep(dims)
        for e in itertools.product(*(range(d + 1) for d in dims)):
            expected = 1
            for d, k in zip(dims, e):
                expected *= comb(d, k)
            assert euler_char(m, e) == expected


def test_point_counts_of_zero_maps_factor():
    m = _zero_rep((2, 3))
    for p in (2, 3, 5):
        got = count_subreps_mod_p(m, (1, 2), p)
        assert got == gaussian_binomial_count(2, 1, p) * gaussian_binomial_count(3, 2, p)


@given(st.sampled_from(["a2", "a3"]), st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]), st.data())
def test_backends_agree(name, seed, p, data):
    m = random_rep(corpus(name).qp, np.random.default_rng(seed))
    e = tuple(data.draw(st.integers(0, d)) for d in m.dims)
    counts = {b: count_subreps_mod_p(m, e, p, b) for b in BACKENDS}
    assert len(set(counts.values())) == 1, counts


@given(st.sampled_from(["a2", "a3"]), st.integers(0, 2**32 - 1))
def test_prime_set_independence(name, seed):
    m = random_rep(corpus(name).qp, np.random.default_rng(seed))
    from qpmut.grassmann.counting import good_reduction
    set1 = [p for p in (11, 13, 17, 19, 23, 29, 31, 37, 43) if good_reduction(m, p)]
    set2 = [p for p in (47, 53, 59, 61, 67, 71, 73, 79, 83) if good_reduction(m, p)]
    F1 = f_polynomial_rep(m, primes=set1)
    F2 = f_polynomial_rep(m, primes=set2)
    assert F1 == F2 == f_polynomial_rep(m)


def test_auto_primes_skip_bad_reduction():
    m = DecoratedRep(A2, (1, 1), (0, 0), {"a": [[-2]]})
    # over F_2 the map vanishes and the count at e=(0,1) jumps from 0 to 1
    assert count_subreps_mod_p(m, (0, 1), 2) == 1
    assert euler_char(m, (0, 1)) == 0
    with pytest.raises(BadPrimeError):
        point_count_polynomial(m, (0, 1), primes=[2, 3])


def test_interpolation_is_exact():
    pts = [(p, 3 * p ** 2 - p + 4) for p in (2, 3, 5)]
    assert interpolate(pts) == [4, -1, 3]


def test_resource_cap_and_bad_primes():
    big = _zero_rep((4, 4, 3))
    with pytest.raises(ResourceCapError):
        euler_char(big, (1, 1, 1))
    m = DecoratedRep(A2, (1, 1), (0, 0), {"a": [["1/2"]]})
    with pytest.raises(BadPrimeError):
        point_count_polynomial(m, (1, 1), primes=[2])
    assert point_count_polynomial(m, (1, 1), primes=[3, 5]) == [1]
    with pytest.raises(DimensionError):
        count_subreps_mod_p(m, (2, 0), 3)


def test_f_polynomial_of_projective():
    p = DecoratedRep(A2, (1, 1), (0, 0), {"a": [[1]]})
    assert f_polynomial_rep(p) == LaurentPoly(2, {(1, 1): 1, (1, 0): 1, (0, 0): 1})
    assert f_polynomial_rep(negative_simple(A2, 1)) == LaurentPoly.one(2)


def test_cluster_character_is_cluster_variable():
    # the rep lives over mu_1 mu_2 (A2), whose quiver is A2 again
    m = mutate_rep_sequence(negative_simple(A2, 1), [1, 2])
    q0 = principal_extension(IceQuiver(2, A2.quiver.arrows, 2))
    cc = cluster_character(m, q0)
    s = mutate_seed(mutate_seed(initial_seed(q0), 2), 1)
    assert cc == s.cluster[0].as_laurent()


def test_substitution_map_is_exchange_relation():
    b = np.array([[0, 1], [-1, 0]])
    x1 = LaurentPoly.var(2, 1)
    out = substitution_map(x1, b, 1)
    # x1' -> (x2 + 1)/x1 for A2 at vertex 1
    from qpmut.arithio import parse_rational_function
    assert out == parse_rational_function("(x2 + 1)/x1", 2)
