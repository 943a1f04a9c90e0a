"""Exact linear algebra over Q on numpy object arrays.

Matrices are 2-d ``numpy`` arrays of dtype object holding ``int`` or
``Fraction`` entries.  Pivoting always takes the first nonzero entry, so all
bases produced here are deterministic.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import DimensionError, RankError
from .rational import as_rational, norm


def qmatrix(rows, shape=None):
    """Build an exact matrix from nested rows (entries int, Fraction or "p/q")."""
    if isinstance(rows, np.ndarray) and rows.dtype == object and rows.ndim == 2:
        return rows
    if shape is not None and (shape[0] == 0 or shape[1] == 0):
        return np.zeros(shape, dtype=object)
    a = np.array([[norm(as_rational(v)) for v in row] for row in rows], dtype=object)
    if a.ndim != 2:
        if a.size == 0 and shape is not None:
            return np.zeros(shape, dtype=object)
        raise DimensionError("matrix rows have inconsistent length")
    if shape is not None and a.shape != tuple(shape):
        raise DimensionError(f"matrix shape {a.shape} != expected {tuple(shape)}")
    return a


def zeros(m, n):
    a = np.empty((m, n), dtype=object)
    a.fill(0)
    return a


def identity(n):
    a = zeros(n, n)
    for i in range(n):
        a[i, i] = 1
    return a


def mat_mul(a, b):
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    out = a.dot(b)
    return _clean(out)


def _clean(a):
    out = np.empty(a.shape, dtype=object)
    flat = a.ravel()
    of = out.ravel()
    for i, v in enumerate(flat):
        of[i] = norm(v) if isinstance(v, Fraction) else v
    return out


def is_zero(a):
    return all(v == 0 for v in a.ravel())


def rref(a):
    """Reduced row echelon form and the list of pivot columns."""
    m, n = a.shape
    rows = [[Fraction(v) for v in a[i]] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        pr = rows[r]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    out = zeros(m, n)
    for i in range(m):
        for j in range(n):
            out[i, j] = norm(rows[i][j])
    return out, pivots


def rank(a):
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(a):
    """Matrix whose columns form a basis of {v : a v = 0}."""
    m, n = a.shape
    if m == 0:
        return identity(n)
    R, piv = rref(a)
    free = [j for j in range(n) if j not in piv]
    out = zeros(n, len(free))
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, p in enumerate(piv):
            out[p, k] = norm(-Fraction(R[i, f]))
    return out


def column_basis(a):
    """Independent columns of a (first-nonzero pivoting): a basis of Im a."""
    if a.shape[0] == 0 or a.shape[1] == 0:
        return zeros(a.shape[0], 0)
    _, piv = rref(a)
    return a[:, piv].copy()


def hstack(blocks, nrows):
    blocks = [b for b in blocks]
    if not blocks:
        return zeros(nrows, 0)
    return np.concatenate(blocks, axis=1) if any(b.shape[1] for b in blocks) else zeros(nrows, 0)


def vstack(blocks, ncols):
    if not blocks:
        return zeros(0, ncols)
    return np.concatenate(blocks, axis=0) if any(b.shape[0] for b in blocks) else zeros(0, ncols)


def extend_basis(base, candidates):
    """Columns of ``candidates`` that extend the independent columns of ``base``.

    Returns the added columns as a matrix, chosen greedily left to right.
    """
    m = base.shape[0]
    current = base
    added = []
    r = rank(current) if current.shape[1] else 0
    for j in range(candidates.shape[1]):
        col = candidates[:, j:j + 1]
        trial = np.concatenate([current, col], axis=1)
        rr = rank(trial)
        if rr > r:
            current, r = trial, rr
            added.append(col)
    return hstack(added, m)


def complete_to_basis(base):
    """Extend independent columns ``base`` to a basis of Q^m with unit vectors."""
    return extend_basis(base, identity(base.shape[0]))


def inverse(a):
    n, m = a.shape
    if n != m:
        raise DimensionError("inverse of a non-square matrix")
    if n == 0:
        return zeros(0, 0)
    aug = np.concatenate([a, identity(n)], axis=1)
    R, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n or piv[n - 1] >= n:
        raise RankError("singular matrix")
    return R[:, n:].copy()


def is_invertible(a):
    return a.shape[0] == a.shape[1] and rank(a) == a.shape[0]


def intersection_dim(u, v):
    """dim(span u ∩ span v) for column-basis matrices u, v."""
    ru, rv = rank(u), rank(v)
    both = np.concatenate([u, v], axis=1)
    return ru + rv - rank(both)


def solve(a, b):
    """Some x with a x = b, raising RankError if none exists."""
    m, n = a.shape
    aug = np.concatenate([a, b], axis=1)
    R, piv = rref(aug)
    if any(p >= n for p in piv):
        raise RankError("inconsistent linear system")
    x = zeros(n, b.shape[1])
    for i, p in enumerate(piv):
        x[p, :] = R[i, n:]
    return x


def det(a):
    """Exact determinant (fraction-free elimination is overkill at this size)."""
    n = a.shape[0]
    rows = [[Fraction(v) for v in a[i]] for i in range(n)]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            d = -d
        d *= rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] / rows[c][c]
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return norm(d)


def to_strings(a):
    return [[str(Fraction(v)) for v in row] for row in a]
