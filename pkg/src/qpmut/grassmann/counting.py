"""Quiver Grassmannians by point counting, F-polynomials of
representations, cluster characters and the substitution map."""
from __future__ import annotations

import functools
import itertools
from fractions import Fraction

import numpy as np

from ..errors import BadPrimeError, DimensionError, PolynomialityError, ResourceCapError
from ..exactalg import LaurentPoly, RationalFunction, specialize
from . import _kernels

DEFAULT_MAX_TOTAL_DIM = 10


@functools.lru_cache(maxsize=None)
def subspaces(d: int, e: int, p: int):
    """All e-dimensional subspaces of F_p^d as reduced echelon bases.

    Returns (bases, pivots): int64 arrays of shape (count, e, d) and
    (count, e), ordered by pivot set and then by free entries.
    """
    if not 0 <= e <= d:
        raise DimensionError(f"no {e}-dimensional subspaces of a {d}-dimensional space")
    bases, pivs = [], []
    for pv in itertools.combinations(range(d), e):
        free = [(r, c) for r in range(e) for c in range(pv[r] + 1, d) if c not in pv]
        for vals in itertools.product(range(p), repeat=len(free)):
            B = np.zeros((e, d), dtype=np.int64)
            for r, c in enumerate(pv):
                B[r, c] = 1
            for (r, c), v in zip(free, vals):
                B[r, c] = v
            bases.append(B)
            pivs.append(pv)
    if not bases:
        return np.zeros((0, e, d), dtype=np.int64), np.zeros((0, e), dtype=np.int64)
    b = np.stack(bases)
    pv = np.array(pivs, dtype=np.int64).reshape(len(pivs), e)
    b.setflags(write=False)
    pv.setflags(write=False)
    return b, pv


def gaussian_binomial_count(d, e, p):
    """|Gr(e, d)(F_p)|, used as an independent oracle."""
    num = den = 1
    for i in range(e):
        num *= p ** (d - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def _mod_p(M, p):
    out = np.zeros(M.shape, dtype=np.int64)
    for idx, v in np.ndenumerate(M):
        v = Fraction(v)
        if v.denominator % p == 0:
            raise BadPrimeError(f"prime {p} divides a matrix denominator")
        out[idx] = (v.numerator * pow(v.denominator, -1, p)) % p
    return out


def denominators(m):
    out = 1
    for M in m.maps.values():
        for v in M.ravel():
            out = out * Fraction(v).denominator // np.gcd(out, Fraction(v).denominator)
    return out


def count_subreps_mod_p(m, e, p: int, backend: str | None = None) -> int:
    """Number of subrepresentations of m over F_p with dimension vector e."""
    q = m.qp.quiver
    e = tuple(int(x) for x in e)
    if len(e) != m.n:
        raise DimensionError("dimension vector has wrong length")
    if any(not 0 <= x <= d for x, d in zip(e, m.dims)):
        raise DimensionError(f"dimension vector {e} not bounded by {m.dims}")
    backend = backend or _kernels.default_backend()
    mats = [_mod_p(m.maps[a.id], p) for a in q.arrows]
    # only vertices with a nonzero space matter; everything else is 0
    live = [v for v in range(m.n) if m.dims[v]]
    pos = {v: k for k, v in enumerate(live)}
    sub_lists = [subspaces(m.dims[v], e[v], p) for v in live]
    arrows, maps = [], []
    for a, M in zip(q.arrows, mats):
        s, t = a.src - 1, a.tgt - 1
        if s in pos and t in pos and M.any():
            arrows.append((pos[s], pos[t]))
            maps.append(M)
    ds = [m.dims[v] for v in live]
    es = [e[v] for v in live]
    if backend == "numpy":
        return _kernels.count_einsum(sub_lists, arrows, maps, ds, es, p)
    if backend == "python":
        return _kernels.count_dfs(sub_lists, arrows, maps, ds, es, p, jit=False)
    if backend == "numba":
        return _kernels.count_dfs(sub_lists, arrows, maps, ds, es, p, jit=True)
    raise ValueError(f"unknown backend {backend!r}")


def _primes():
    p = 2
    while True:
        if all(p % k for k in range(2, int(p ** 0.5) + 1)):
            yield p
        p += 1


def _rank_mod_p(M, p):
    A = M.copy() % p
    r = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        r += 1
    return r


def _path_products(m):
    """Matrices of all nonzero paths of m (nilpotent, so the walk ends)."""
    from ..exactalg import linalg
    q = m.qp.quiver
    out = []
    stack = [(a, m.maps[a.id]) for a in q.arrows]
    while stack:
        a, M = stack.pop()
        if not M.size or linalg.is_zero(M):
            continue
        out.append(M)
        if len(out) > 2000:
            break
        for b in q.arrows_out(a.tgt):
            stack.append((b, linalg.mat_mul(M, m.maps[b.id])))
    return out


def good_reduction(m, p) -> bool:
    """No denominator vanishes mod p and every path keeps its rank.

    For linearly oriented type A this pins down the isomorphism type over
    F_p; in general it is a necessary condition only.
    """
    from ..exactalg import linalg
    if denominators(m) % p == 0:
        return False
    for M in _path_products(m):
        if _rank_mod_p(_mod_p(M, p), p) != linalg.rank(M):
            return False
    return True


def choose_primes(m, count, start=2):
    out = []
    for p in _primes():
        if p < start or not good_reduction(m, p):
            continue
        out.append(p)
        if len(out) == count:
            return out


def interpolate(points):
    """Coefficients (constant first) of the Lagrange interpolant."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(n):
            coeffs[k] += yi * basis[k] / denom
    return coeffs


def _fit(pts, d, e):
    """Integer interpolant through the first d+1 points, checked on the rest."""
    coeffs = interpolate(pts[:d + 1])
    if any(c.denominator != 1 for c in coeffs):
        raise PolynomialityError(f"point counts for e={tuple(e)} do not interpolate to an integer polynomial")
    coeffs = [int(c) for c in coeffs]
    for p, n in pts[d + 1:]:
        if sum(c * p ** k for k, c in enumerate(coeffs)) != n:
            raise PolynomialityError(f"point count at p={p} disagrees with the interpolant for e={tuple(e)}")
    return coeffs


AUTO_RETRIES = 4


def point_count_polynomial(m, e, primes="auto", backend=None, max_total_dim=DEFAULT_MAX_TOTAL_DIM):
    """Integer coefficients of the polynomial N(q) with N(p) = #Gr_e(M)(F_p).

    With ``primes="auto"`` d+2 primes of good reduction are used (d+1 to
    interpolate, one to check).  A failed check is blamed on a bad prime the
    rank test missed: the window slides past the smallest prime and the
    fit is retried a few times before giving up.
    """
    if m.total_dim > max_total_dim:
        raise ResourceCapError(f"total dimension {m.total_dim} exceeds cap {max_total_dim}")
    d = sum(x * (dm - x) for x, dm in zip(e, m.dims))
    if primes == "auto" or primes is None:
        ps = choose_primes(m, d + 2)
        counts = {}
        for attempt in range(AUTO_RETRIES + 1):
            for p in ps:
                if p not in counts:
                    counts[p] = count_subreps_mod_p(m, e, p, backend)
            try:
                return _fit([(p, counts[p]) for p in ps], d, e)
            except PolynomialityError:
                if attempt == AUTO_RETRIES:
                    raise
                ps = ps[1:] + choose_primes(m, 1, ps[-1] + 1)
    bad = [int(p) for p in primes if not good_reduction(m, int(p))]
    if bad:
        raise BadPrimeError(f"primes {bad} have bad reduction for this representation")
    ps = [int(p) for p in primes]
    if len(ps) < d + 1:
        raise BadPrimeError(f"need at least {d + 1} primes, got {len(ps)}")
    return _fit([(p, count_subreps_mod_p(m, e, p, backend)) for p in ps], d, e)


def euler_char(m, e, primes="auto", backend=None, max_total_dim=DEFAULT_MAX_TOTAL_DIM) -> int:
    return sum(point_count_polynomial(m, e, primes, backend, max_total_dim))


def _rep_key(m):
    q = m.qp.quiver
    return (tuple((a.src, a.tgt) for a in q.arrows), m.dims,
            tuple(tuple(map(tuple, m.maps[a.id].tolist())) for a in q.arrows))


_fpoly_cache = {}


def f_polynomial_rep(m, primes="auto", backend=None, max_total_dim=DEFAULT_MAX_TOTAL_DIM) -> LaurentPoly:
    """F_M = sum over e of chi(Gr_e(M)) u^e, a polynomial in u_1..u_n."""
    if m.total_dim > max_total_dim:
        raise ResourceCapError(f"total dimension {m.total_dim} exceeds cap {max_total_dim}")
    # only auto primes are cached; explicit prime sets may be checked for bad reduction
    key = _rep_key(m) if primes == "auto" else None
    if key is not None and key in _fpoly_cache:
        return _fpoly_cache[key]
    terms = {}
    for e in itertools.product(*(range(d + 1) for d in m.dims)):
        chi = euler_char(m, e, primes, backend, max_total_dim)
        if chi:
            terms[e] = chi
    F = LaurentPoly(m.n, terms)
    if key is not None:
        _fpoly_cache[key] = F
    return F


def cluster_character(m, q_initial) -> LaurentPoly:
    """x^g(m) F_m(y^_1, ..., y^_r) in the variables of q_initial.

    m lives on a QP whose vertices are the mutable vertices of q_initial.
    """
    from ..decrep import g_vector_rep
    from ..seedengine import hat_y
    if m.n != q_initial.r:
        raise DimensionError("representation must live on the mutable part of q_initial")
    g = g_vector_rep(m)
    F = f_polynomial_rep(m)
    n = q_initial.n
    val = specialize(F, {j: hat_y(q_initial, j) for j in range(1, m.n + 1)})
    return val.shift(tuple(g) + (0,) * (n - len(g)))


def substitution_map(x_expr, b, i: int) -> RationalFunction:
    """phi_X: x'_j -> x_j (j != i), x'_i -> x_i^{-1}(prod x_l^[b_li]+ + prod x_l^[-b_li]+)."""
    b = np.asarray(b)
    if isinstance(x_expr, LaurentPoly):
        x_expr = RationalFunction.from_laurent(x_expr)
    n = x_expr.nvars
    if b.shape[0] != n:
        raise DimensionError("B-matrix rows must match the number of variables")
    if not 1 <= i <= b.shape[1]:
        raise DimensionError(f"vertex {i} is not mutable")
    col = [int(v) for v in b[:, i - 1]]
    plus = LaurentPoly.monomial(tuple(max(v, 0) for v in col))
    minus = LaurentPoly.monomial(tuple(max(-v, 0) for v in col))
    image = RationalFunction(plus + minus, LaurentPoly.var(n, i))
    return x_expr.substitute_var(i, image)
