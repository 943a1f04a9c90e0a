"""Hot loops for counting subrepresentations over F_p.

Two independent routes count the same thing:

* ``count_dfs`` walks all tuples of subspaces depth first, checking arrow
  closure as soon as both ends are chosen.  It is compiled with numba.
* ``count_einsum`` builds one 0/1 compatibility matrix per arrow with
  vectorised numpy and contracts them with ``np.einsum``.

Set ``QPMUT_DISABLE_NUMBA=1`` to select the numpy route by default (and to
skip importing numba entirely).
"""
import os

import numpy as np

_DISABLED = os.environ.get("QPMUT_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag
    numba = None
    HAVE_NUMBA = False


def default_backend():
    return "numba" if HAVE_NUMBA else "numpy"


def _closed(k, idx, subs, pivs, es, ds, asrc, atgt, mats, p, arrows_at, arrows_off):
    for q in range(arrows_off[k], arrows_off[k + 1]):
        a = arrows_at[q]
        s = asrc[a]
        t = atgt[a]
        ns = idx[s]
        nt = idx[t]
        for r in range(es[t]):
            v = np.zeros(ds[s], dtype=np.int64)
            for i in range(ds[s]):
                acc = 0
                for j in range(ds[t]):
                    acc += mats[a, i, j] * subs[nt, r, j]
                v[i] = acc % p
            for j in range(es[s]):
                c = v[pivs[ns, j]]
                if c != 0:
                    for i in range(ds[s]):
                        v[i] = (v[i] - c * subs[ns, j, i]) % p
            for i in range(ds[s]):
                if v[i] != 0:
                    return False
    return True


def _dfs(nv, offsets, subs, pivs, es, ds, asrc, atgt, mats, p, arrows_at, arrows_off):
    total = 0
    idx = np.zeros(nv, dtype=np.int64)
    k = 0
    idx[0] = offsets[0]
    while k >= 0:
        if idx[k] >= offsets[k + 1]:
            k -= 1
            if k >= 0:
                idx[k] += 1
            continue
        if _closed(k, idx, subs, pivs, es, ds, asrc, atgt, mats, p, arrows_at, arrows_off):
            if k == nv - 1:
                total += 1
                idx[k] += 1
            else:
                k += 1
                idx[k] = offsets[k]
        else:
            idx[k] += 1
    return total


if HAVE_NUMBA:
    _closed_jit = numba.njit(cache=True)(_closed)

    @numba.njit(cache=True)
    def _dfs_jit(nv, offsets, subs, pivs, es, ds, asrc, atgt, mats, p, arrows_at, arrows_off):
        total = 0
        idx = np.zeros(nv, dtype=np.int64)
        k = 0
        idx[0] = offsets[0]
        while k >= 0:
            if idx[k] >= offsets[k + 1]:
                k -= 1
                if k >= 0:
                    idx[k] += 1
                continue
            if _closed_jit(k, idx, subs, pivs, es, ds, asrc, atgt, mats, p, arrows_at, arrows_off):
                if k == nv - 1:
                    total += 1
                    idx[k] += 1
                else:
                    k += 1
                    idx[k] = offsets[k]
            else:
                idx[k] += 1
        return total
else:
    _dfs_jit = None


def _pack(sub_lists, arrows, maps, ds, es):
    """Flatten per-vertex subspace arrays and arrow matrices into padded
    arrays the DFS kernel can take."""
    nv = len(sub_lists)
    maxd = max([1] + list(ds))
    maxe = max([1] + list(es))
    counts = [s[0].shape[0] for s in sub_lists]
    offsets = np.zeros(nv + 1, dtype=np.int64)
    offsets[1:] = np.cumsum(counts)
    subs = np.zeros((offsets[-1], maxe, maxd), dtype=np.int64)
    pivs = np.zeros((offsets[-1], maxe), dtype=np.int64)
    for v, (b, pv) in enumerate(sub_lists):
        o = offsets[v]
        subs[o:o + b.shape[0], :b.shape[1], :b.shape[2]] = b
        pivs[o:o + pv.shape[0], :pv.shape[1]] = pv
    na = len(arrows)
    asrc = np.array([a[0] for a in arrows], dtype=np.int64).reshape(na)
    atgt = np.array([a[1] for a in arrows], dtype=np.int64).reshape(na)
    mats = np.zeros((max(na, 1), maxd, maxd), dtype=np.int64)
    for k, M in enumerate(maps):
        mats[k, :M.shape[0], :M.shape[1]] = M
    # arrows grouped by the later of their two endpoints
    buckets = [[] for _ in range(nv)]
    for k, (s, t) in enumerate(arrows):
        buckets[max(s, t)].append(k)
    arrows_off = np.zeros(nv + 1, dtype=np.int64)
    arrows_off[1:] = np.cumsum([len(b) for b in buckets])
    arrows_at = np.array([k for b in buckets for k in b], dtype=np.int64).reshape(-1)
    return (nv, offsets, subs, pivs, np.asarray(es, dtype=np.int64), np.asarray(ds, dtype=np.int64),
            asrc, atgt, mats, arrows_at, arrows_off)


def count_dfs(sub_lists, arrows, maps, ds, es, p, jit=True):
    (nv, offsets, subs, pivs, es_a, ds_a, asrc, atgt, mats, arrows_at, arrows_off) = _pack(
        sub_lists, arrows, maps, ds, es)
    if nv == 0:
        return 1
    fn = _dfs_jit if (jit and _dfs_jit is not None) else _dfs
    return int(fn(nv, offsets, subs, pivs, es_a, ds_a, asrc, atgt, mats, np.int64(p),
                  arrows_at, arrows_off))


def compat_matrix(subs_t, subs_s, piv_s, M, p):
    """C[j, i] = 1 iff M(N_t[i]) ⊆ N_s[j]; M has shape (d_s, d_t)."""
    ct, cs = subs_t.shape[0], subs_s.shape[0]
    if subs_t.shape[1] == 0:
        return np.ones((cs, ct), dtype=np.int64)
    img = np.einsum("ij,krj->kri", M, subs_t) % p          # (ct, et, ds)
    R = np.broadcast_to(img, (cs,) + img.shape).copy()    # (cs, ct, et, ds)
    for r in range(subs_s.shape[1]):
        piv = piv_s[:, r]
        c = np.take_along_axis(R, piv[:, None, None, None], axis=3)
        R = (R - c * subs_s[:, r][:, None, None, :]) % p
    return (R == 0).all(axis=(2, 3)).astype(np.int64)


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def count_einsum(sub_lists, arrows, maps, ds, es, p):
    nv = len(sub_lists)
    if nv == 0:
        return 1
    ops, subs_str = [], []
    for (s, t), M in zip(arrows, maps):
        C = compat_matrix(sub_lists[t][0], sub_lists[s][0], sub_lists[s][1], M, p)
        if not C.any():
            return 0
        ops.append(C)
        subs_str.append(_LETTERS[s] + _LETTERS[t])
    for v in range(nv):
        ops.append(np.ones(sub_lists[v][0].shape[0], dtype=np.int64))
        subs_str.append(_LETTERS[v])
    expr = ",".join(subs_str) + "->"
    return int(np.einsum(expr, *ops, optimize=True))
