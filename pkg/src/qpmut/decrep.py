"""Decorated representations of quivers with potentials and their mutation.

A representation assigns to arrow a: s(a) -> t(a) a matrix of shape
dim M_{s(a)} x dim M_{t(a)}, i.e. a map M_{t(a)} -> M_{s(a)} (right modules).
For a path p = (a_1, ..., a_r) in traversal order, M_p = M_{a_1} ... M_{a_r}.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (AdmissibilityError, DimensionError, InternalConsistencyError,
                     TruncationError)
from .exactalg import linalg
from .exactalg.linalg import mat_mul, zeros
from .qpalg import QP, PathElement, is_trivial, mutate_qp, path_derivative
from .quiver import composite_name, star_name


@dataclass(eq=False)
class DecoratedRep:
    qp: QP
    dims: tuple
    vdims: tuple
    maps: dict = field(default_factory=dict)

    def __post_init__(self):
        q = self.qp.quiver
        self.dims = tuple(int(d) for d in self.dims)
        self.vdims = tuple(int(d) for d in self.vdims)
        if len(self.dims) != q.n or len(self.vdims) != q.n:
            raise DimensionError(f"dimension vectors must have length {q.n}")
        maps = {}
        for a in q.arrows:
            shape = (self.dims[a.src - 1], self.dims[a.tgt - 1])
            m = self.maps.get(a.id)
            if m is None:
                m = zeros(*shape)
            else:
                m = linalg.qmatrix(m, shape)
            if m.shape != shape:
                raise DimensionError(f"map for {a.id!r} has shape {m.shape}, expected {shape}")
            maps[a.id] = m
        extra = set(self.maps) - set(maps)
        if extra:
            raise DimensionError(f"maps given for unknown arrows {sorted(extra)}")
        self.maps = maps

    @property
    def n(self):
        return len(self.dims)

    @property
    def total_dim(self):
        return sum(self.dims)

    def map(self, aid):
        return self.maps[aid]

    def is_zero_module(self):
        return not any(self.dims)

    def renamed(self, mapping, qp):
        """Same data over qp, where mapping sends our arrow ids to qp's."""
        return DecoratedRep(qp, self.dims, self.vdims, {mapping[k]: v for k, v in self.maps.items()})

    def __repr__(self):
        return f"DecoratedRep(dims={self.dims}, vdims={self.vdims})"


def negative_simple(qp: QP, i: int) -> DecoratedRep:
    n = qp.quiver.n
    v = [0] * n
    v[i - 1] = 1
    return DecoratedRep(qp, (0,) * n, tuple(v))


def simple(qp: QP, i: int) -> DecoratedRep:
    n = qp.quiver.n
    d = [0] * n
    d[i - 1] = 1
    return DecoratedRep(qp, tuple(d), (0,) * n)


def direct_sum(m: DecoratedRep, n: DecoratedRep) -> DecoratedRep:
    maps = {}
    for a in m.qp.quiver.arrows:
        A, B = m.maps[a.id], n.maps[a.id]
        top = np.concatenate([A, zeros(A.shape[0], B.shape[1])], axis=1)
        bot = np.concatenate([zeros(B.shape[0], A.shape[1]), B], axis=1)
        maps[a.id] = np.concatenate([top, bot], axis=0)
    return DecoratedRep(m.qp, tuple(x + y for x, y in zip(m.dims, n.dims)),
                        tuple(x + y for x, y in zip(m.vdims, n.vdims)), maps)


def eval_path(m: DecoratedRep, p):
    if is_trivial(p):
        return linalg.identity(m.dims[p[0] - 1])
    out = m.maps[p[0]]
    for a in p[1:]:
        out = mat_mul(out, m.maps[a])
    return out


def eval_element(m: DecoratedRep, sigma: PathElement, source=None, target=None):
    """M_sigma as a matrix dim M_source x dim M_target (a map M_target -> M_source)."""
    ends = sigma.endpoints()
    if ends is not None:
        if source is not None and ends != (source, target):
            raise DimensionError(f"element runs {ends}, expected {(source, target)}")
        source, target = ends
    if source is None:
        raise DimensionError("zero element needs explicit endpoints")
    out = zeros(m.dims[source - 1], m.dims[target - 1])
    for p, c in sigma.terms.items():
        out = out + eval_path(m, p) * c
    return linalg._clean(out)


def is_nilpotent(m: DecoratedRep) -> bool:
    """Every path of length >= total dimension acts as zero."""
    q = m.qp.quiver
    # powers of the block adjacency operator
    D = m.total_dim
    if D == 0:
        return True
    off = np.cumsum([0] + list(m.dims))
    A = zeros(D, D)
    for a in q.arrows:
        s, t = a.src - 1, a.tgt - 1
        A[off[s]:off[s + 1], off[t]:off[t + 1]] = A[off[s]:off[s + 1], off[t]:off[t + 1]] + m.maps[a.id]
    P = A
    for _ in range(D):
        if linalg.is_zero(P):
            return True
        P = mat_mul(P, A)
    return linalg.is_zero(P)


def abg_maps(m: DecoratedRep, l: int, check_admissible=True):
    """(alpha, beta, gamma, outs, ins) at vertex l.

    alpha: M_in -> M_l with M_in = sum of M_{t(x)} over arrows x out of l,
    beta: M_l -> M_out with M_out = sum of M_{s(y)} over arrows y into l,
    gamma: M_out -> M_in with block (x, y) = M of d_{(y, x)} W.
    """
    qp = m.qp
    q = qp.quiver
    if check_admissible and not qp.admissible(l):
        raise AdmissibilityError(f"vertex {l} is not admissible", vertex=l)
    outs = q.arrows_out(l)
    ins = q.arrows_in(l)
    dl = m.dims[l - 1]
    alpha = linalg.hstack([m.maps[x.id] for x in outs], dl)
    beta = linalg.vstack([m.maps[y.id] for y in ins], dl)
    rows = []
    for x in outs:
        blocks = []
        for y in ins:
            d = path_derivative(qp.potential, (y.id, x.id))
            blocks.append(eval_element(m, d, x.tgt, y.src))
        rows.append(linalg.hstack(blocks, m.dims[x.tgt - 1]))
    din = sum(m.dims[x.tgt - 1] for x in outs)
    dout = sum(m.dims[y.src - 1] for y in ins)
    gamma = linalg.vstack(rows, dout) if rows else zeros(0, dout)
    if gamma.shape != (din, dout):
        gamma = zeros(din, dout)
    return alpha, beta, gamma, outs, ins


def _block_offsets(sizes):
    off = [0]
    for s in sizes:
        off.append(off[-1] + s)
    return off


def premutate_rep(m: DecoratedRep, l: int):
    """The representation of the premutated QP attached to m."""
    from .qpalg import premutate_qp
    qp = m.qp
    pre = premutate_qp(qp, l)
    alpha, beta, gamma, outs, ins = abg_maps(m, l)
    din, dout = alpha.shape[1], beta.shape[0]
    # basis of M_out adapted to Im beta ⊆ Ker gamma ⊆ M_out
    imb = linalg.column_basis(beta)
    kerg = linalg.nullspace(gamma)
    C1 = linalg.extend_basis(imb, kerg)
    D1 = linalg.extend_basis(np.concatenate([imb, C1], axis=1), linalg.identity(dout))
    P = np.concatenate([imb, C1, D1], axis=1)
    Pinv = linalg.inverse(P)
    k1, k2 = imb.shape[1], C1.shape[1]
    pirho = Pinv[k1:k1 + k2, :]                     # M_out -> Ker g / Im b
    # basis of M_in adapted to Im gamma ⊆ Ker alpha ⊆ M_in
    G = linalg.column_basis(gamma)
    kera = linalg.nullspace(alpha)
    S = linalg.extend_basis(G, kera)
    D2 = linalg.extend_basis(np.concatenate([G, S], axis=1), linalg.identity(din))
    P2 = np.concatenate([G, S, D2], axis=1)
    P2inv = linalg.inverse(P2)
    g1 = G.shape[1]
    gcoord = mat_mul(P2inv[:g1, :], gamma)          # gamma in Im-gamma coordinates
    vl = m.vdims[l - 1]
    # new space at l: Ker g/Im b + Im g + Ker a/Im g + V_l
    s2 = S.shape[1]
    newdim = k2 + g1 + s2 + vl
    abar = np.concatenate([-pirho, -gcoord, zeros(s2, dout), zeros(vl, dout)], axis=0)
    bbar = np.concatenate([zeros(din, k2), G, S, zeros(din, vl)], axis=1)
    # new decoration: dim Ker beta - dim(Ker beta ∩ Im alpha)
    kerb = linalg.nullspace(beta)
    ima = linalg.column_basis(alpha)
    vbar = kerb.shape[1] - (linalg.intersection_dim(kerb, ima) if kerb.shape[1] and ima.shape[1] else 0)

    dims = list(m.dims)
    dims[l - 1] = newdim
    vdims = list(m.vdims)
    vdims[l - 1] = vbar
    maps = {}
    for a in qp.quiver.arrows:
        if a.src != l and a.tgt != l:
            maps[a.id] = m.maps[a.id]
    for y in ins:
        for x in outs:
            maps[composite_name(y.id, x.id)] = mat_mul(m.maps[y.id], m.maps[x.id])
    off_out = _block_offsets([m.dims[y.src - 1] for y in ins])
    for k, y in enumerate(ins):
        maps[star_name(y.id)] = abar[:, off_out[k]:off_out[k + 1]]
    off_in = _block_offsets([m.dims[x.tgt - 1] for x in outs])
    for k, x in enumerate(outs):
        maps[star_name(x.id)] = bbar[off_in[k]:off_in[k + 1], :]
    return DecoratedRep(pre, tuple(dims), tuple(vdims), maps)


def mutate_rep(m: DecoratedRep, l: int) -> DecoratedRep:
    qp = m.qp
    if not qp.admissible(l):
        raise AdmissibilityError(f"vertex {l} is not admissible", vertex=l)
    red, psi = mutate_qp(qp, l)
    mbar = premutate_rep(m, l)
    if mbar.qp.quiver != psi.premutated.quiver:
        raise InternalConsistencyError("premutated quivers disagree")
    mbar = DecoratedRep(psi.premutated, mbar.dims, mbar.vdims, mbar.maps)
    if mbar.total_dim > qp.trunc + 1:
        raise TruncationError(f"total dimension {mbar.total_dim} exceeds truncation degree {qp.trunc} + 1")
    pre_q = psi.premutated.quiver
    maps = {}
    for a in pre_q.arrows:
        img = psi.image(a.id)
        M = eval_element(mbar, img, a.src, a.tgt)
        if red.quiver.has_arrow(a.id):
            maps[a.id] = M
        elif not linalg.is_zero(M):
            raise InternalConsistencyError(f"deleted arrow {a.id!r} acts nontrivially after transport")
    return DecoratedRep(red, mbar.dims, mbar.vdims, maps)


def mutate_rep_sequence(m: DecoratedRep, seq) -> DecoratedRep:
    for step, l in enumerate(seq):
        if not m.qp.admissible(l):
            raise AdmissibilityError(f"step {step}: vertex {l} is not admissible", step=step, vertex=l)
        m = mutate_rep(m, l)
    return m


# Hom spaces and invariants

def intertwiner_system(m: DecoratedRep, n: DecoratedRep):
    """Linear system whose kernel is Hom(M, N): unknowns are the entries of
    phi_v (dim N_v x dim M_v), equations phi_{s(a)} M_a = N_a phi_{t(a)}."""
    q = m.qp.quiver
    sizes = [n.dims[v] * m.dims[v] for v in range(q.n)]
    off = _block_offsets(sizes)
    eqs = []
    for a in q.arrows:
        s, t = a.src - 1, a.tgt - 1
        Ma, Na = m.maps[a.id], n.maps[a.id]
        # entry (i, j) of phi_s M_a - N_a phi_t, i < dim N_s, j < dim M_t
        for i in range(n.dims[s]):
            for j in range(m.dims[t]):
                row = [0] * off[-1]
                for k in range(m.dims[s]):
                    c = Ma[k, j]
                    if c:
                        row[off[s] + i * m.dims[s] + k] += c
                for k in range(n.dims[t]):
                    c = Na[i, k]
                    if c:
                        row[off[t] + k * m.dims[t] + j] -= c
                eqs.append(row)
    return eqs, off


def hom_basis(m: DecoratedRep, n: DecoratedRep):
    """Basis of Hom(M, N) as a list of per-vertex matrix tuples."""
    q = m.qp.quiver
    eqs, off = intertwiner_system(m, n)
    total = off[-1]
    if total == 0:
        return []
    A = linalg.qmatrix(eqs) if eqs else zeros(0, total)
    K = linalg.nullspace(A)
    basis = []
    for k in range(K.shape[1]):
        col = K[:, k]
        phis = []
        for v in range(q.n):
            blk = col[off[v]:off[v + 1]]
            phis.append(np.array(blk, dtype=object).reshape(n.dims[v], m.dims[v]))
        basis.append(tuple(phis))
    return basis


def hom_dim(m: DecoratedRep, n: DecoratedRep) -> int:
    eqs, off = intertwiner_system(m, n)
    total = off[-1]
    if total == 0:
        return 0
    if not eqs:
        return total
    return total - linalg.rank(linalg.qmatrix(eqs))


def g_vector_rep(m: DecoratedRep) -> tuple:
    g = []
    for i in range(1, m.n + 1):
        _, _, gamma, _, _ = abg_maps(m, i, check_admissible=False)
        kg = gamma.shape[1] - linalg.rank(gamma) if gamma.shape[1] else 0
        g.append(kg - m.dims[i - 1] + m.vdims[i - 1])
    return tuple(g)


def h_vector_rep(m: DecoratedRep) -> tuple:
    h = []
    for i in range(1, m.n + 1):
        _, beta, _, _, _ = abg_maps(m, i, check_admissible=False)
        kb = beta.shape[1] - linalg.rank(beta) if beta.shape[1] else 0
        h.append(-kb)
    return tuple(h)


def e_invariant(m: DecoratedRep) -> int:
    g = g_vector_rep(m)
    return hom_dim(m, m) + sum(gi * d for gi, d in zip(g, m.dims))


def e_inj(m: DecoratedRep, n: DecoratedRep) -> int:
    g = g_vector_rep(n)
    return hom_dim(m, n) + sum(d * gi for d, gi in zip(m.dims, g))


def e_sym(m: DecoratedRep, n: DecoratedRep) -> int:
    return e_inj(m, n) + e_inj(n, m)


def are_isomorphic(m: DecoratedRep, n: DecoratedRep, draws: int = 5, seed: int = 0) -> bool:
    """Monte Carlo isomorphism test over Q: a random integer combination of
    a Hom basis is invertible at every vertex with high probability when an
    isomorphism exists.  Never returns a false positive."""
    if m.dims != n.dims or m.vdims != n.vdims:
        return False
    if m.total_dim == 0:
        return True
    basis = hom_basis(m, n)
    if not basis:
        return False
    rng = np.random.default_rng(seed)
    for _ in range(draws):
        coeffs = [int(c) for c in rng.integers(-10**6, 10**6, size=len(basis))]
        ok = True
        for v in range(m.n):
            if not m.dims[v]:
                continue
            phi = zeros(n.dims[v], m.dims[v])
            for c, b in zip(coeffs, basis):
                phi = phi + b[v] * c
            if not linalg.is_invertible(phi):
                ok = False
                break
        if ok:
            return True
    return False
