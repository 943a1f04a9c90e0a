"""Quivers, ice quivers, their B-matrices and quiver mutation.

Vertices are 1-based; vertices 1..r are mutable and r+1..n frozen.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, MutationDomainError


@dataclass(frozen=True, order=True)
class Arrow:
    id: str
    src: int
    tgt: int


@dataclass(frozen=True)
class Quiver:
    """A finite quiver without loops.  Oriented 2-cycles are allowed here;
    QP premutation produces them."""
    n: int
    arrows: tuple
    r: int | None = None
    _by_id: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        if self.r is None:
            object.__setattr__(self, "r", self.n)
        if not 0 <= self.r <= self.n:
            raise DimensionError(f"need 0 <= r <= n, got r={self.r}, n={self.n}")
        by_id = {}
        for a in arrows:
            if a.id in by_id:
                raise DimensionError(f"duplicate arrow id {a.id!r}")
            if not (1 <= a.src <= self.n and 1 <= a.tgt <= self.n):
                raise DimensionError(f"arrow {a.id!r} has endpoint outside 1..{self.n}")
            if a.src == a.tgt:
                raise DimensionError(f"arrow {a.id!r} is a loop")
            by_id[a.id] = a
        object.__setattr__(self, "_by_id", by_id)

    def arrow(self, aid) -> Arrow:
        try:
            return self._by_id[aid]
        except KeyError:
            raise KeyError(f"unknown arrow {aid!r}") from None

    def has_arrow(self, aid):
        return aid in self._by_id

    @property
    def arrow_ids(self):
        return tuple(a.id for a in self.arrows)

    def arrows_out(self, v):
        return [a for a in self.arrows if a.src == v]

    def arrows_in(self, v):
        return [a for a in self.arrows if a.tgt == v]

    def two_cycle_vertices(self):
        pairs = {(a.src, a.tgt) for a in self.arrows}
        return {v for s, t in pairs if (t, s) in pairs for v in (s, t)}

    def has_two_cycles(self):
        return bool(self.two_cycle_vertices())

    def multiplicities(self):
        return Counter((a.src, a.tgt) for a in self.arrows)

    def is_frozen(self, v):
        return v > self.r


class IceQuiver(Quiver):
    """A quiver with no loops and no oriented 2-cycles."""

    def __post_init__(self):
        super().__post_init__()
        if self.has_two_cycles():
            raise DimensionError("ice quivers may not contain oriented 2-cycles")


def b_matrix(q: Quiver) -> np.ndarray:
    """The n x r matrix with b_ij = #(i->j) - #(j->i)."""
    b = np.zeros((q.n, q.r), dtype=np.int64)
    for a in q.arrows:
        if a.tgt <= q.r:
            b[a.src - 1, a.tgt - 1] += 1
        if a.src <= q.r:
            b[a.tgt - 1, a.src - 1] -= 1
    return b


def full_b_matrix(q: Quiver) -> np.ndarray:
    """The n x n skew-symmetric signed adjacency matrix."""
    b = np.zeros((q.n, q.n), dtype=np.int64)
    for a in q.arrows:
        b[a.src - 1, a.tgt - 1] += 1
        b[a.tgt - 1, a.src - 1] -= 1
    return b


def quiver_from_matrix(b, n_frozen_rows=None) -> IceQuiver:
    """Ice quiver with B-matrix ``b`` (n x r, skew-symmetric top block)."""
    b = np.asarray(b, dtype=np.int64)
    if b.ndim != 2:
        raise DimensionError("B-matrix must be 2-dimensional")
    n, r = b.shape
    if r > n:
        raise DimensionError("B-matrix must have at least as many rows as columns")
    top = b[:r, :r]
    if not np.array_equal(top, -top.T):
        raise DimensionError("top block of B-matrix is not skew-symmetric")
    arrows = []
    k = 0
    for i in range(n):
        for j in range(r):
            if i < r and j <= i:
                continue
            v = int(b[i, j])
            s, t = (i + 1, j + 1) if v > 0 else (j + 1, i + 1)
            for _ in range(abs(v)):
                k += 1
                arrows.append(Arrow(f"a{k}", s, t))
    return IceQuiver(n, tuple(arrows), r)


def composite_name(a: str, b: str) -> str:
    """Name of the arrow standing for the path a then b."""
    return f"[{b}∘{a}]"


def star_name(a: str) -> str:
    return f"{a}*"


def cancel_two_cycles(n, arrows, r):
    """Remove a maximal set of disjoint oriented 2-cycles, pairing the
    lexicographically smallest ids first."""
    groups = defaultdict(list)
    for a in arrows:
        groups[(a.src, a.tgt)].append(a)
    dead = set()
    for (s, t), fwd in groups.items():
        if s > t:
            continue
        back = groups.get((t, s), [])
        k = min(len(fwd), len(back))
        dead.update(x.id for x in sorted(fwd, key=lambda x: x.id)[:k])
        dead.update(x.id for x in sorted(back, key=lambda x: x.id)[:k])
    return tuple(a for a in arrows if a.id not in dead)


def premutate_arrows(q: Quiver, i: int):
    """Steps 1 and 2 of mutation at i: composites and reversals (no cancellation)."""
    kept = [a for a in q.arrows if a.src != i and a.tgt != i]
    ins = q.arrows_in(i)
    outs = q.arrows_out(i)
    comps = [Arrow(composite_name(a.id, b.id), a.src, b.tgt) for a in ins for b in outs]
    rev = [Arrow(star_name(a.id), a.tgt, a.src) for a in q.arrows if a.src == i or a.tgt == i]
    return tuple(kept + comps + rev)


def mutate_quiver(q: IceQuiver, i: int) -> IceQuiver:
    if not 1 <= i <= q.r:
        raise MutationDomainError(f"cannot mutate at vertex {i}: mutable vertices are 1..{q.r}")
    arrows = premutate_arrows(q, i)
    return IceQuiver(q.n, cancel_two_cycles(q.n, arrows, q.r), q.r)


def mutate_b_matrix(b, k: int) -> np.ndarray:
    """Matrix mutation b'_ij = -b_ij if k in {i,j}, else
    b_ij + sgn(b_ik)[b_ik b_kj]_+  (k is 1-based, b is n x r)."""
    b = np.asarray(b, dtype=np.int64)
    n, r = b.shape
    k -= 1
    out = b.copy()
    for i in range(n):
        for j in range(r):
            if i == k or j == k:
                out[i, j] = -b[i, j]
            else:
                out[i, j] = b[i, j] + np.sign(b[i, k]) * max(b[i, k] * b[k, j], 0)
    return out


def mutable_part(q: Quiver) -> Quiver:
    arrows = tuple(a for a in q.arrows if a.src <= q.r and a.tgt <= q.r)
    return type(q)(q.r, arrows, q.r)
