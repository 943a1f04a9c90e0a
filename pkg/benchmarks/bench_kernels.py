"""Subrepresentation counting: numba DFS vs numpy einsum vs plain python DFS.

    python3 benchmarks/bench_kernels.py [--repeat 3]

All three backends must agree on every count; the script aborts otherwise.
Numba compile time is reported separately (first call) and excluded from
the timed runs.
"""
import argparse
import time

import numpy as np

from qpmut.decrep import DecoratedRep
from qpmut.exactalg import linalg
from qpmut.grassmann import count_subreps_mod_p
from qpmut.grassmann import _kernels
from qpmut.qpalg import QP
from qpmut.quiver import Quiver


def _rep(quiver, dims, seed):
    rng = np.random.default_rng(seed)
    qp = QP.make(quiver)
    maps = {}
    for a in quiver.arrows:
        shape = (dims[a.src - 1], dims[a.tgt - 1])
        maps[a.id] = linalg.qmatrix(rng.integers(-1, 2, size=shape).tolist(), shape)
    return DecoratedRep(qp, dims, (0,) * quiver.n, maps)


CASES = [
    # name, quiver, dims, e, p
    ("A2 (2,2) e=(1,1) p=5", Quiver(2, [("a", 1, 2)]), (2, 2), (1, 1), 5),
    ("A3 (2,2,2) e=(1,1,1) p=7", Quiver(3, [("a", 1, 2), ("b", 2, 3)]), (2, 2, 2), (1, 1, 1), 7),
    ("A3 (3,3,3) e=(1,2,1) p=3", Quiver(3, [("a", 1, 2), ("b", 2, 3)]), (3, 3, 3), (1, 2, 1), 3),
    ("A3 (3,3,3) e=(1,1,2) p=5", Quiver(3, [("a", 1, 2), ("b", 2, 3)]), (3, 3, 3), (1, 1, 2), 5),
    ("K2 (3,3) e=(2,1) p=7", Quiver(2, [("a", 1, 2), ("b", 1, 2)]), (3, 3), (2, 1), 7),
    ("A2 (5,5) e=(2,3) p=3", Quiver(2, [("a", 1, 2)]), (5, 5), (2, 3), 3),
]


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return out, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-python", action="store_true")
    args = ap.parse_args()

    backends = ["numpy"]
    if _kernels.HAVE_NUMBA:
        backends.insert(0, "numba")
        m0 = _rep(CASES[0][1], CASES[0][2], 0)
        t = time.perf_counter()
        count_subreps_mod_p(m0, CASES[0][3], CASES[0][4], "numba")
        print(f"numba first call (compile or cache load): {time.perf_counter() - t:.3f}s")
    else:
        print("numba disabled or missing; timing numpy only")
    if not args.skip_python:
        backends.append("python")

    print(f"{'case':32s} " + " ".join(f"{b:>12s}" for b in backends) + "   count")
    for k, (name, q, dims, e, p) in enumerate(CASES):
        m = _rep(q, dims, k)
        row, counts = [], set()
        for b in backends:
            n, dt = timed(lambda: count_subreps_mod_p(m, e, p, b), args.repeat)
            counts.add(n)
            row.append(dt)
        if len(counts) != 1:
            raise SystemExit(f"backends disagree on {name}: {counts}")
        print(f"{name:32s} " + " ".join(f"{dt * 1e3:10.2f}ms" for dt in row) + f"   {counts.pop()}")


if __name__ == "__main__":
    main()
