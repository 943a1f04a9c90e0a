import numpy as np
import pytest
from hypothesis import given, strategies as st

from qpmut.decrep import (DecoratedRep, are_isomorphic, direct_sum, e_inj, e_invariant, e_sym,
                          g_vector_rep, h_vector_rep, hom_basis, hom_dim, mutate_rep,
                          mutate_rep_sequence, negative_simple, simple)
from qpmut.errors import AdmissibilityError, DimensionError
from qpmut.exactalg import linalg
from qpmut.qpalg import QP, match_qps
from qpmut.quiver import Quiver, full_b_matrix
from qpmut.verify import corpus, random_rep

A2 = corpus("a2").qp
A3 = corpus("a3").qp
TRI = corpus("triangle").qp

rep_args = st.tuples(st.sampled_from(["a2", "a3"]), st.integers(0, 2**32 - 1))


def _rep(args):
    name, seed = args
    return random_rep(corpus(name).qp, np.random.default_rng(seed))


def test_negative_simple_invariants():
    for qp in (A2, A3, TRI):
        for i in range(1, qp.quiver.n + 1):
            m = negative_simple(qp, i)
            e = tuple(int(k == i) for k in range(1, qp.quiver.n + 1))
            assert g_vector_rep(m) == e
            assert h_vector_rep(m) == (0,) * qp.quiver.n
            assert e_invariant(m) == 0


def test_a2_examples():
    m = mutate_rep(negative_simple(A2, 1), 1)
    assert m.dims == (1, 0) and m.vdims == (0, 0)
    # g2 = g2 + [b21]+ g1 - b21 h1 = 0 since b21 = -1 and h1 = 0
    assert g_vector_rep(m) == (-1, 0)
    m = mutate_rep(negative_simple(A2, 2), 2)
    assert m.dims == (0, 1)
    # the projective-injective P1 = (k -> k)
    p = DecoratedRep(A2, (1, 1), (0, 0), {"a": [[1]]})
    assert g_vector_rep(p) == (-1, 0) and h_vector_rep(p) == (-1, 0)
    assert hom_dim(p, p) == 1 and e_invariant(p) == 0


def test_triangle_rep_matches_recursion():
    m = mutate_rep(negative_simple(TRI, 1), 1)
    assert g_vector_rep(m) == (-1, 0, 1)
    m2 = mutate_rep_sequence(negative_simple(TRI, 1), [1, 2])
    assert m2.dims == (1, 1, 0)


def test_maps_shape_checked():
    with pytest.raises(DimensionError):
        DecoratedRep(A2, (1, 2), (0, 0), {"a": [[1]]})
    with pytest.raises(DimensionError):
        DecoratedRep(A2, (1, 1), (0, 0), {"z": [[1]]})


def test_non_admissible_rep_mutation():
    q = Quiver(2, [("a", 1, 2), ("b", 2, 1)])
    from qpmut.qpalg import Potential
    qp = QP(q, Potential(q, {}, 6), 6)
    with pytest.raises(AdmissibilityError):
        mutate_rep(negative_simple(qp, 1), 1)


@given(rep_args, st.integers(1, 3))
def test_mutation_is_involutive_up_to_isomorphism(args, l):
    m = _rep(args)
    l = min(l, m.n)
    back = mutate_rep(mutate_rep(m, l), l)
    ren = match_qps(m.qp, back.qp)
    assert ren is not None
    assert are_isomorphic(m, back.renamed(ren, m.qp))


@given(rep_args, st.integers(1, 3))
def test_e_invariant_is_mutation_invariant(args, l):
    m = _rep(args)
    l = min(l, m.n)
    assert e_invariant(mutate_rep(m, l)) == e_invariant(m)


@given(rep_args, st.integers(1, 3))
def test_g_h_relations_under_mutation(args, l):
    m = _rep(args)
    l = min(l, m.n)
    mm = mutate_rep(m, l)
    g, h, h2, g2 = g_vector_rep(m), h_vector_rep(m), h_vector_rep(mm), g_vector_rep(mm)
    assert g[l - 1] == h[l - 1] - h2[l - 1]
    b = full_b_matrix(m.qp.quiver)
    for j in range(m.n):
        if j == l - 1:
            assert g2[j] == -g[j]
        else:
            bj = int(b[j, l - 1])
            assert g2[j] == g[j] + max(bj, 0) * g[l - 1] - bj * h[l - 1]


@given(rep_args)
def test_h_vector_counts_socle(args):
    m = _rep(args)
    for i in range(1, m.n + 1):
        assert h_vector_rep(m)[i - 1] == -hom_dim(simple(m.qp, i), m)


@given(rep_args, rep_args)
def test_e_sym_symmetric_and_e_nonnegative(a, b):
    m, n = _rep(a), _rep((a[0], b[1]))
    assert e_sym(m, n) == e_sym(n, m)
    assert e_inj(m, m) == e_invariant(m) >= 0


@given(rep_args)
def test_hom_basis_consists_of_intertwiners(args):
    m = _rep(args)
    for phi in hom_basis(m, m):
        for a in m.qp.quiver.arrows:
            lhs = linalg.mat_mul(phi[a.src - 1], m.maps[a.id])
            rhs = linalg.mat_mul(m.maps[a.id], phi[a.tgt - 1])
            assert np.array_equal(lhs, rhs)


def test_isomorphism_test():
    m = DecoratedRep(A2, (1, 1), (0, 0), {"a": [[1]]})
    n = DecoratedRep(A2, (1, 1), (0, 0), {"a": [[5]]})
    z = DecoratedRep(A2, (1, 1), (0, 0), {"a": [[0]]})
    assert are_isomorphic(m, n)
    assert not are_isomorphic(m, z)
    assert are_isomorphic(direct_sum(m, z), direct_sum(z, n))
    assert not are_isomorphic(negative_simple(A2, 1), simple(A2, 1))
