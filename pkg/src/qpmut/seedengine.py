"""Seeds, exchange relations, Y-seeds, F-polynomials, g-vectors and
exchange-graph exploration."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (DimensionError, DivisibilityError, InternalConsistencyError,
                     MutationDomainError, RankError)
from .exactalg import LaurentPoly, RationalFunction, TropicalElement, specialize, tropical_add
from .exactalg.laurent import laurent_div_exact
from .quiver import Arrow, IceQuiver, b_matrix, mutate_quiver


@dataclass(frozen=True)
class Seed:
    quiver: IceQuiver
    cluster: tuple

    def __post_init__(self):
        object.__setattr__(self, "cluster", tuple(self.cluster))
        if len(self.cluster) != self.quiver.r:
            raise DimensionError(f"cluster must have {self.quiver.r} entries")
        for v in self.cluster:
            if v.nvars != self.quiver.n:
                raise DimensionError("cluster variables must live in x1..xn")
            if v.is_zero():
                raise DimensionError("cluster variables are nonzero")

    @property
    def n(self):
        return self.quiver.n

    @property
    def r(self):
        return self.quiver.r

    def variable(self, k):
        """x_k of this seed: cluster variable for k <= r, frozen generator otherwise."""
        if k <= self.r:
            return self.cluster[k - 1]
        return RationalFunction.var(self.n, k)

    def b_matrix(self):
        return b_matrix(self.quiver)


def initial_seed(q: IceQuiver) -> Seed:
    return Seed(q, tuple(RationalFunction.var(q.n, k) for k in range(1, q.r + 1)))


def exchange_monomials(q: IceQuiver, i: int):
    """Exponent vectors of the two monomials of the exchange relation at i."""
    out_e = [0] * q.n
    in_e = [0] * q.n
    for a in q.arrows:
        if a.src == i:
            out_e[a.tgt - 1] += 1
        if a.tgt == i:
            in_e[a.src - 1] += 1
    return tuple(out_e), tuple(in_e)


def mutate_seed(s: Seed, i: int) -> Seed:
    if not 1 <= i <= s.r:
        raise MutationDomainError(f"cannot mutate at vertex {i}: mutable vertices are 1..{s.r}")
    out_e, in_e = exchange_monomials(s.quiver, i)

    def prod(e):
        v = RationalFunction.const(s.n, 1)
        for k, m in enumerate(e, start=1):
            if m:
                v = v * s.variable(k) ** m
        return v

    new = (prod(out_e) + prod(in_e)) / s.cluster[i - 1]
    cluster = list(s.cluster)
    cluster[i - 1] = new
    return Seed(mutate_quiver(s.quiver, i), tuple(cluster))


def mutate_seed_sequence(s: Seed, seq) -> Seed:
    for step, i in enumerate(seq):
        try:
            s = mutate_seed(s, i)
        except MutationDomainError as exc:
            raise MutationDomainError(f"step {step}: {exc}") from None
    return s


def principal_extension(q: IceQuiver) -> IceQuiver:
    if q.r != q.n:
        raise DimensionError("principal extension needs a quiver without frozen vertices")
    r = q.r
    ids = set(q.arrow_ids)
    extra = []
    for l in range(1, r + 1):
        name = f"f{l}"
        while name in ids:
            name += "'"
        extra.append(Arrow(name, r + l, l))
    return IceQuiver(2 * r, q.arrows + tuple(extra), r)


def is_principal(q: IceQuiver) -> bool:
    if q.n != 2 * q.r:
        return False
    b = b_matrix(q)
    return np.array_equal(b[q.r:], np.eye(q.r, dtype=np.int64))


def hat_y(q: IceQuiver, j: int) -> LaurentPoly:
    if not 1 <= j <= q.r:
        raise MutationDomainError(f"hat_y index {j} outside 1..{q.r}")
    b = b_matrix(q)
    return LaurentPoly.monomial(tuple(int(v) for v in b[:, j - 1]))


def _laurent(v) -> LaurentPoly:
    if isinstance(v, LaurentPoly):
        return v
    if not v.is_laurent():
        raise InternalConsistencyError("cluster variable is not a Laurent polynomial")
    return v.as_laurent()


def f_polynomial_of_variable(v, r: int) -> LaurentPoly:
    """F-polynomial of a principal-coefficient cluster variable, as a
    polynomial in u_1..u_r (u_k standing for the frozen x_{r+k})."""
    p = _laurent(v)
    if p.nvars != 2 * r:
        raise DimensionError("principal coefficients need 2r variables")
    spec = specialize(p, {k: 1 for k in range(1, r + 1)})
    F = spec.restrict_vars(range(r + 1, 2 * r + 1))
    if not F.is_polynomial():
        raise InternalConsistencyError(f"F-polynomial is not a polynomial: {F}")
    return F


def _f_of_yhat(F: LaurentPoly, q: IceQuiver) -> LaurentPoly:
    return specialize(F, {j: hat_y(q, j) for j in range(1, F.nvars + 1)})


def g_vector_direct(v, q_initial: IceQuiver) -> tuple:
    """g-vector of v with respect to the seed with quiver q_initial.

    Principal coefficients: v / F(y^) must be a Laurent monomial x^g.
    Otherwise the primitive decomposition is found by solving for the
    shift that makes the coefficient pattern in y^-coordinates primitive.
    """
    p = _laurent(v)
    r = q_initial.r
    if is_principal(q_initial):
        F = f_polynomial_of_variable(p, r)
        try:
            mono = laurent_div_exact(p, _f_of_yhat(F, q_initial))
        except DivisibilityError:
            raise RankError("v / F(y^) is not exact") from None
        if not mono.is_monomial() or mono.leading_term()[1] != 1:
            raise RankError("v / F(y^) is not a monic monomial")
        e = mono.leading_term()[0]
        return tuple(e[:r])
    return _g_vector_general(p, q_initial)


def _g_vector_general(p: LaurentPoly, q: IceQuiver) -> tuple:
    # every exponent of p is g + B c for an integer vector c; the primitive
    # decomposition picks the shift with min_k c_k = 0 in every coordinate
    B = b_matrix(q).astype(object)
    n, r = B.shape
    from .exactalg import linalg
    if linalg.rank(B) != r:
        raise RankError("B-matrix does not have full rank")
    exps = [e for e, _ in p.terms]
    e0 = exps[0]
    cs = [(0,) * r]
    Bq = linalg.qmatrix(B)
    for e in exps[1:]:
        diff = linalg.qmatrix([[a - b] for a, b in zip(e, e0)])
        try:
            c = linalg.solve(Bq, diff)
        except RankError:
            raise RankError("exponent differences leave the B-lattice; no primitive decomposition") from None
        if any(Fraction(x).denominator != 1 for x in c[:, 0]):
            raise RankError("exponent differences are not integral in the B-lattice")
        cs.append(tuple(int(x) for x in c[:, 0]))
    low = [min(c[k] for c in cs) for k in range(r)]
    g = list(e0)
    for k in range(r):
        for i in range(n):
            g[i] += int(B[i, k]) * low[k]
    return tuple(g[:r])


def g_vector_recursive(g, b, i: int) -> tuple:
    """g-vector of the same element w.r.t. mu_i of the initial seed, where
    b is the B-matrix of the initial seed."""
    b = np.asarray(b)
    g = [int(v) for v in g]
    gi = g[i - 1]
    out = []
    for j in range(1, len(g) + 1):
        if j == i:
            out.append(-gi)
        else:
            bji = int(b[j - 1, i - 1])
            out.append(g[j - 1] + max(bji, 0) * gi - bji * min(gi, 0))
    return tuple(out)


# Y-seeds

@dataclass(frozen=True)
class YSeed:
    quiver: IceQuiver
    y: tuple

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(self.y))
        if len(self.y) != self.quiver.r:
            raise DimensionError(f"Y-seed needs {self.quiver.r} entries")


def mutate_y_seed(ys: YSeed, i: int) -> YSeed:
    q = ys.quiver
    if not 1 <= i <= q.r:
        raise MutationDomainError(f"cannot mutate at vertex {i}")
    b = b_matrix(q)
    yi = ys.y[i - 1]
    one = TropicalElement.one(yi.m)
    yi_plus = tropical_add(yi, one)
    new = []
    for j in range(1, q.r + 1):
        if j == i:
            new.append(yi.inverse())
            continue
        m = int(b[i - 1, j - 1])
        yj = ys.y[j - 1]
        if m > 0:
            new.append(yj * yi ** m * yi_plus ** (-m))
        elif m < 0:
            new.append(yj * yi_plus ** (-m))
        else:
            new.append(yj)
    return YSeed(mutate_quiver(q, i), tuple(new))


def y_seed_from_seed(s: Seed) -> YSeed:
    b = s.b_matrix()
    r = s.r
    ys = tuple(TropicalElement(tuple(int(v) for v in b[r:, j])) for j in range(r))
    return YSeed(s.quiver, ys)


# exploration

def seed_key(s: Seed):
    """Canonical form of a seed up to simultaneous permutation of mutable
    indices: sorted cluster strings and the B-matrix permuted to match."""
    from .arithio import print_canonical
    names = [print_canonical(v) for v in s.cluster]
    perm = sorted(range(s.r), key=lambda k: names[k])
    b = s.b_matrix()
    rows = perm + list(range(s.r, s.n))
    pb = b[np.ix_(rows, perm)]
    return tuple(names[k] for k in perm), tuple(map(tuple, pb.tolist()))


@dataclass
class ExchangeGraph:
    seeds: list
    paths: list
    keys: list
    edges: list            # (seed index, vertex, seed index)
    variables: dict        # canonical string -> (seed index, position)
    closure: bool
    truncated: bool = False
    depth: int = 0
    notes: list = field(default_factory=list)

    @property
    def num_clusters(self):
        return len(self.seeds)


def explore(s: Seed, max_depth: int, max_seeds: int = 10000, max_terms: int = 10**6) -> ExchangeGraph:
    """Breadth-first closure of the exchange graph up to ``max_depth``.

    ``closure`` is true when no seed at the last level has an unseen
    neighbour.  Resource caps give a partial, flagged result.
    """
    from .arithio import print_canonical
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    keys = {seed_key(s): 0}
    seeds, paths, klist = [s], [()], [seed_key(s)]
    edges = []
    variables = {}
    for k, v in enumerate(s.cluster):
        variables.setdefault(print_canonical(v), (0, k + 1))
    frontier = deque([(0, 0)])
    closure = True
    truncated = False
    notes = []
    while frontier:
        idx, d = frontier.popleft()
        cur = seeds[idx]
        for i in range(1, cur.r + 1):
            if d == max_depth:
                nxt = mutate_seed(cur, i)
                if seed_key(nxt) not in keys:
                    closure = False
                continue
            nxt = mutate_seed(cur, i)
            if sum(len(v.num) + len(v.den) for v in nxt.cluster) > max_terms:
                truncated = True
                closure = False
                notes.append(f"term cap {max_terms} exceeded at path {paths[idx] + (i,)}")
                continue
            key = seed_key(nxt)
            j = keys.get(key)
            if j is None:
                if len(seeds) >= max_seeds:
                    truncated = True
                    closure = False
                    notes.append(f"seed cap {max_seeds} reached")
                    frontier.clear()
                    break
                j = len(seeds)
                keys[key] = j
                seeds.append(nxt)
                paths.append(paths[idx] + (i,))
                klist.append(key)
                frontier.append((j, d + 1))
                for k, v in enumerate(nxt.cluster):
                    variables.setdefault(print_canonical(v), (j, k + 1))
            edges.append((idx, i, j))
    g = ExchangeGraph(seeds, paths, klist, edges, variables, closure, truncated, max_depth, notes)
    return g


def naive_cluster_count(s: Seed, depth: int) -> int:
    """Independent oracle: enumerate every mutation sequence up to ``depth``
    from scratch (no memoisation across sequences) and count distinct
    clusters as sets of variables."""
    from .arithio import print_canonical
    found = set()
    for L in range(depth + 1):
        for seq in itertools.product(range(1, s.r + 1), repeat=L):
            if any(a == b for a, b in zip(seq, seq[1:])):
                continue
            t = s
            for i in seq:
                t = mutate_seed(t, i)
            found.add(frozenset(print_canonical(v) for v in t.cluster))
    return len(found)


def cluster_variable_paths(g: ExchangeGraph):
    """Map canonical variable string -> (path to a seed containing it, position)."""
    return {k: (g.paths[i], pos) for k, (i, pos) in g.variables.items()}


def g_vector_wrt(base_quiver: IceQuiver, path_t, path_z, pos) -> tuple:
    """g-vector of the variable at position ``pos`` of seed mu_{path_z}(t0)
    with respect to the seed t = mu_{path_t}(t0), computed with principal
    coefficients at t.  ``base_quiver`` is the mutable quiver of t0."""
    from .quiver import mutable_part
    qt = base_quiver
    for i in path_t:
        qt = mutate_quiver(qt, i)
    pq = principal_extension(mutable_part(qt))
    s = initial_seed(pq)
    for i in list(reversed(path_t)) + list(path_z):
        s = mutate_seed(s, i)
    return g_vector_direct(s.cluster[pos - 1], pq)
