"""Truncated path algebra calculus for quivers with potentials.

Paths are tuples of arrow ids in traversal order: ``("a", "b")`` means a
first, then b, written ``ba`` in the usual right-to-left notation.  The
trivial path at vertex v is the tuple ``(v,)`` holding the int v.  All
identities here hold modulo paths longer than the truncation degree N.
"""
from __future__ import annotations

import functools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .errors import (AdmissibilityError, DimensionError, InternalConsistencyError,
                     TruncationError)
from .exactalg import linalg
from .exactalg.rational import as_rational, norm
from .quiver import Quiver, composite_name, premutate_arrows, star_name

DEFAULT_TRUNC = 12


def is_trivial(p) -> bool:
    return len(p) == 1 and isinstance(p[0], int)


def path_len(p) -> int:
    return 0 if is_trivial(p) else len(p)


def path_source(q: Quiver, p):
    return p[0] if is_trivial(p) else q.arrow(p[0]).src


def path_target(q: Quiver, p):
    return p[0] if is_trivial(p) else q.arrow(p[-1]).tgt


def is_composable(q: Quiver, p) -> bool:
    if is_trivial(p):
        return True
    return all(q.arrow(x).tgt == q.arrow(y).src for x, y in zip(p, p[1:]))


def concat(p, q):
    """p followed by q."""
    if is_trivial(p):
        return q
    if is_trivial(q):
        return p
    return p + q


def rotate_min(c) -> tuple:
    """Lexicographically smallest rotation of a cycle."""
    c = tuple(c)
    return min(c[k:] + c[:k] for k in range(len(c)))


def _add_into(acc, p, c):
    v = acc.get(p, 0) + c
    if v:
        acc[p] = norm(v) if isinstance(v, Fraction) else v
    else:
        acc.pop(p, None)


class PathElement:
    """Finite linear combination of paths of length <= N."""
    __slots__ = ("quiver", "terms", "trunc")

    def __init__(self, quiver: Quiver, terms=None, trunc: int = DEFAULT_TRUNC, *, check=True):
        self.quiver = quiver
        self.trunc = trunc
        t = {}
        for p, c in (terms or {}).items():
            p = tuple(p)
            if check and not is_composable(quiver, p):
                raise DimensionError(f"path {p} is not composable")
            if path_len(p) > trunc:
                continue
            c = norm(as_rational(c))
            if c:
                _add_into(t, p, c)
        self.terms = t

    @classmethod
    def arrow(cls, quiver, aid, trunc=DEFAULT_TRUNC):
        quiver.arrow(aid)
        return cls(quiver, {(aid,): 1}, trunc, check=False)

    @classmethod
    def idempotent(cls, quiver, v, trunc=DEFAULT_TRUNC):
        return cls(quiver, {(v,): 1}, trunc, check=False)

    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (path_len(kv[0]), tuple(map(str, kv[0]))))

    def endpoints(self):
        """(source, target) shared by all paths, or None for zero."""
        ends = {(path_source(self.quiver, p), path_target(self.quiver, p)) for p in self.terms}
        if len(ends) > 1:
            raise DimensionError("element mixes paths with different endpoints")
        return ends.pop() if ends else None

    def __add__(self, other):
        t = dict(self.terms)
        for p, c in other.terms.items():
            _add_into(t, p, c)
        return PathElement(self.quiver, t, self.trunc, check=False)

    def __neg__(self):
        return PathElement(self.quiver, {p: -c for p, c in self.terms.items()}, self.trunc, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return PathElement(self.quiver, {p: v * c for p, v in self.terms.items()}, self.trunc, check=False)

    def then(self, other):
        """Product 'self followed by other' (other * self in algebra notation)."""
        t = {}
        for p, c in self.terms.items():
            for q, d in other.terms.items():
                if path_len(p) + path_len(q) > self.trunc:
                    continue
                if path_target(self.quiver, p) != path_source(self.quiver, q):
                    continue
                _add_into(t, concat(p, q), c * d)
        return PathElement(self.quiver, t, self.trunc, check=False)

    def __mul__(self, other):
        # algebra product, composed right to left
        return other.then(self)

    def __eq__(self, other):
        if not isinstance(other, PathElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        parts = [f"{Fraction(c)}*{'.'.join(map(str, p))}" for p, c in self.sorted_terms()]
        return "PathElement(" + (" + ".join(parts) or "0") + ")"


class Potential:
    """Finite combination of cycles up to rotation, each stored as its
    minimal rotation."""
    __slots__ = ("quiver", "terms_map", "trunc", "_hash")

    def __init__(self, quiver: Quiver, terms=None, trunc: int = DEFAULT_TRUNC, *, check=True):
        self.quiver = quiver
        self.trunc = trunc
        self._hash = None
        t = {}
        for c, v in (terms or {}).items():
            c = tuple(c)
            if check:
                if not c or is_trivial(c):
                    raise DimensionError("potential terms must be non-trivial cycles")
                if not is_composable(quiver, c) or path_source(quiver, c) != path_target(quiver, c):
                    raise DimensionError(f"{list(c)} is not an oriented cycle")
            if len(c) > trunc:
                continue
            v = norm(as_rational(v))
            if v:
                _add_into(t, rotate_min(c), v)
        self.terms_map = t

    @classmethod
    def from_terms(cls, quiver, pairs, trunc=None):
        t = {}
        for cyc, c in pairs:
            cyc = tuple(cyc)
            for a in cyc:
                quiver.arrow(a)
            _add_into(t, rotate_min(cyc), as_rational(c))
        return cls(quiver, t, trunc or DEFAULT_TRUNC)

    @classmethod
    def zero(cls, quiver, trunc=DEFAULT_TRUNC):
        return cls(quiver, {}, trunc, check=False)

    @property
    def terms(self):
        return sorted(self.terms_map.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def is_zero(self):
        return not self.terms_map

    def degree_part(self, d):
        return {c: v for c, v in self.terms_map.items() if len(c) == d}

    def __add__(self, other):
        t = dict(self.terms_map)
        for c, v in other.terms_map.items():
            _add_into(t, c, v)
        return Potential(self.quiver, t, self.trunc, check=False)

    def __neg__(self):
        return Potential(self.quiver, {c: -v for c, v in self.terms_map.items()}, self.trunc, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, Potential):
            return NotImplemented
        return self.terms_map == other.terms_map

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms_map.items()))
        return self._hash

    def __repr__(self):
        parts = [f"{Fraction(v)}*{'.'.join(c)}" for c, v in self.terms]
        return "Potential(" + (" + ".join(parts) or "0") + ")"

    def rename(self, mapping, quiver):
        return Potential(quiver, {tuple(mapping[a] for a in c): v for c, v in self.terms_map.items()},
                         self.trunc)


@dataclass(frozen=True)
class QP:
    quiver: Quiver
    potential: Potential
    trunc: int = DEFAULT_TRUNC

    def __post_init__(self):
        if self.trunc < 3:
            raise DimensionError("truncation degree must be >= 3")

    @classmethod
    def make(cls, quiver, cycles=(), trunc=DEFAULT_TRUNC):
        """QP from (cycle, coefficient) pairs; a bare cycle means coefficient 1."""
        pairs = [(c, 1) if isinstance(c[0], str) else c for c in cycles]
        return cls(quiver, Potential.from_terms(quiver, pairs, trunc), trunc)

    def is_reduced(self):
        return all(len(c) > 2 for c in self.potential.terms_map)

    def admissible(self, l):
        return 1 <= l <= self.quiver.r and l not in self.quiver.two_cycle_vertices()


# derivatives

def cyclic_derivative(W: Potential, a: str) -> PathElement:
    """d_a W: for each occurrence of a in a cycle, the rest of the cycle
    starting right after a (a path from t(a) to s(a))."""
    q = W.quiver
    q.arrow(a)
    t = {}
    for c, v in W.terms_map.items():
        for k, x in enumerate(c):
            if x == a:
                rest = c[k + 1:] + c[:k]
                if not rest:
                    rest = (q.arrow(a).tgt,)
                _add_into(t, rest, v)
    return PathElement(q, t, W.trunc, check=False)


def path_derivative(W: Potential, p) -> PathElement:
    """d_p W summed over every cyclic position where p occurs, wrapping
    occurrences included.  A full-cycle match leaves the trivial path."""
    q = W.quiver
    p = tuple(p)
    L = len(p)
    if not L:
        raise DimensionError("path derivative needs a non-trivial path")
    t = {}
    for c, v in W.terms_map.items():
        m = len(c)
        if L > m:
            continue
        for k in range(m):
            rot = c[k:] + c[:k]
            if rot[:L] == p:
                rest = rot[L:]
                if not rest:
                    rest = (path_target(q, p),)
                _add_into(t, rest, v)
    return PathElement(q, t, W.trunc, check=False)


# substitutions

class Substitution:
    """Algebra map on a path algebra given by images of arrows.

    Arrows missing from ``images`` are fixed.  Images must preserve
    endpoints and contain no trivial paths.
    """

    def __init__(self, quiver: Quiver, images: dict, trunc: int, target: Quiver | None = None):
        self.quiver = quiver
        self.target = target or quiver
        self.trunc = trunc
        self.images = {a: dict(v.terms if isinstance(v, PathElement) else v) for a, v in images.items()}
        self.trivial_pairs = []
        self.premutated = None

    def image(self, a) -> PathElement:
        t = self.images.get(a, {(a,): 1})
        return PathElement(self.target, t, self.trunc, check=False)

    def apply_path(self, p, trunc=None):
        N = self.trunc if trunc is None else trunc
        if is_trivial(p):
            return {p: 1}
        acc = {(): 1}
        for a in p:
            img = self.images.get(a)
            if img is None:
                img = {(a,): 1}
            new = {}
            for u, c in acc.items():
                lu = len(u)
                for w, d in img.items():
                    if lu + len(w) <= N:
                        _add_into(new, u + w, c * d)
            acc = new
            if not acc:
                break
        return acc

    def apply(self, x: PathElement) -> PathElement:
        t = {}
        for p, c in x.terms.items():
            for u, d in self.apply_path(p).items():
                _add_into(t, u, c * d)
        return PathElement(self.target, t, self.trunc, check=False)

    def apply_potential(self, W: Potential) -> Potential:
        t = {}
        for cyc, c in W.terms_map.items():
            for u, d in self.apply_path(cyc).items():
                _add_into(t, rotate_min(u), c * d)
        return Potential(self.target, t, self.trunc, check=False)

    def compose_after(self, first: "Substitution") -> "Substitution":
        """The map x -> self(first(x))."""
        imgs = {}
        for a in first.quiver.arrow_ids:
            imgs[a] = self.apply(first.image(a)).terms
        return Substitution(first.quiver, imgs, self.trunc, self.target)

    def restricted(self, arrows):
        s = Substitution(self.quiver, {a: self.images.get(a, {(a,): 1}) for a in arrows},
                         self.trunc, self.target)
        s.trivial_pairs = list(self.trivial_pairs)
        s.premutated = self.premutated
        return s

    def is_identity(self):
        return all(v == {(a,): 1} for a, v in self.images.items())

    def __repr__(self):
        body = ", ".join(f"{a} -> {PathElement(self.target, v, self.trunc, check=False)!r}"
                         for a, v in sorted(self.images.items()) if v != {(a,): 1})
        return f"Substitution({body or 'identity'})"


# premutation and reduction

def _bracket(c, q: Quiver, l: int):
    """Replace each passage a then b through l inside cycle c by [b∘a]."""
    m = len(c)
    start = next((k for k in range(m) if q.arrow(c[k]).src != l), None)
    if start is None:
        raise InternalConsistencyError("cycle staying at a single vertex")
    c = c[start:] + c[:start]
    out = []
    k = 0
    while k < m:
        x = c[k]
        if q.arrow(x).tgt == l:
            y = c[k + 1]
            out.append(composite_name(x, y))
            k += 2
        else:
            out.append(x)
            k += 1
    return tuple(out)


def premutate_qp(qp: QP, l: int) -> QP:
    q = qp.quiver
    if not qp.admissible(l):
        raise AdmissibilityError(f"vertex {l} is not admissible", vertex=l)
    newq = Quiver(q.n, premutate_arrows(q, l), q.r)
    terms = {}
    for c, v in qp.potential.terms_map.items():
        _add_into(terms, rotate_min(_bracket(c, q, l)), v)
    for a in q.arrows_in(l):
        for b in q.arrows_out(l):
            cyc = (composite_name(a.id, b.id), star_name(b.id), star_name(a.id))
            _add_into(terms, rotate_min(cyc), 1)
    return QP(newq, Potential(newq, terms, qp.trunc), qp.trunc)


def _quadratic_coef(W, x, y):
    return W.get(rotate_min((x, y)), 0)


def _linear_inverse(quiver, phi, N):
    """Inverse of an arrow substitution with invertible linear part, by
    fixed-point iteration psi = L^{-1}(id - H(psi)), one degree per pass."""
    ids = list(quiver.arrow_ids)
    pos = {a: i for i, a in enumerate(ids)}
    L = linalg.zeros(len(ids), len(ids))
    H = {}
    for a in ids:
        img = phi.images.get(a, {(a,): 1})
        high = {}
        for p, c in img.items():
            if len(p) == 1:
                L[pos[a], pos[p[0]]] = c
            else:
                high[p] = c
        H[a] = high
    if not ids:
        return Substitution(quiver, {}, N)
    Linv = linalg.inverse(L)
    # phi(x) = sum_y L[x,y] y + H_x  ==>  psi(y) = sum_x Linv[y,x] (x - H_x(psi))
    base = {}
    for y in ids:
        t = {}
        for x in ids:
            c = Linv[pos[y], pos[x]]
            if c:
                _add_into(t, (x,), c)
        base[y] = t
    psi = Substitution(quiver, base, N)
    if not any(H.values()):
        return psi
    for _ in range(N):
        hx = {x: {} for x in ids}
        for x in ids:
            for p, c in H[x].items():
                for u, d in psi.apply_path(p).items():
                    _add_into(hx[x], u, c * d)
        new = {}
        for y in ids:
            t = dict(base[y])
            for x in ids:
                c = Linv[pos[y], pos[x]]
                if c:
                    for u, d in hx[x].items():
                        _add_into(t, u, -c * d)
            new[y] = t
        if new == psi.images:
            break
        psi = Substitution(quiver, new, N)
    return psi


def _split(qp: QP):
    """Core of the splitting theorem.  Returns (W after the substitution
    phi, phi, trivial pairs)."""
    q = qp.quiver
    N = qp.trunc
    W = dict(qp.potential.terms_map)
    phi = Substitution(q, {}, N)

    def apply(sub_images):
        nonlocal W, phi
        sub = Substitution(q, sub_images, N)
        t = {}
        for cyc, c in W.items():
            for u, d in sub.apply_path(cyc).items():
                _add_into(t, rotate_min(u), c * d)
        W = t
        phi = sub.compose_after(phi)

    # quadratic normal form: pair arrows so the quadratic part is a sum
    # of x*y with disjoint pairs
    pairs = []
    used = set()
    while True:
        quad = sorted(c for c in W if len(c) == 2 and not (c[0] in used and c[1] in used))
        if not quad:
            break
        c = quad[0]
        if c[0] in used or c[1] in used:
            raise InternalConsistencyError("quadratic term meets an already paired arrow")
        x, y = c
        lam = Fraction(W[c])
        ax, ay = q.arrow(x), q.arrow(y)
        ys = [b.id for b in q.arrows if b.src == ay.src and b.tgt == ay.tgt and b.id not in used]
        xs = [b.id for b in q.arrows if b.src == ax.src and b.tgt == ax.tgt and b.id not in used]
        img = {(y,): 1 / lam}
        for y2 in ys:
            if y2 != y:
                c2 = _quadratic_coef(W, x, y2)
                if c2:
                    _add_into(img, (y2,), -Fraction(c2) / lam)
        apply({y: img})
        img = {(x,): 1}
        for x2 in xs:
            if x2 != x:
                c2 = _quadratic_coef(W, x2, y)
                if c2:
                    _add_into(img, (x2,), -Fraction(c2))
        apply({x: img})
        if _quadratic_coef(W, x, y) != 1:
            raise InternalConsistencyError("quadratic normalisation failed")
        pairs.append((x, y))
        used.update((x, y))
    partner = {}
    for x, y in pairs:
        partner[x], partner[y] = y, x

    # push every higher term containing a trivial arrow beyond degree N
    for _ in range(N + 1):
        bad = [c for c in W if len(c) >= 3 and any(a in partner for a in c)]
        if not bad:
            break
        d = min(len(c) for c in bad)
        images = {}
        for c in sorted(b for b in bad if len(b) == d):
            lam = W[c]
            k = next(i for i, a in enumerate(c) if a in partner)
            z = c[k]
            w = c[k + 1:] + c[:k]
            zp = partner[z]
            img = images.setdefault(zp, {(zp,): 1})
            _add_into(img, w, -lam)
        apply(images)
    else:
        if any(len(c) >= 3 and any(a in partner for a in c) for c in W):
            raise TruncationError("reduction did not converge within the truncation degree")
    return W, phi, pairs


def reduce_qp(qp: QP):
    """Split qp into reduced and trivial parts.

    Returns ``(reduced, subst)`` where ``subst`` maps every arrow of the
    input quiver to an element of the input path algebra such that
    subst(W_red + W_triv) is cyclically equivalent to W modulo degree N.
    ``subst.trivial_pairs`` lists the deleted arrow pairs.
    """
    q = qp.quiver
    N = qp.trunc
    W, phi, pairs = _split(qp)
    dead = {a for p in pairs for a in p}
    red_terms = {}
    for c, v in W.items():
        if any(a in dead for a in c):
            if len(c) == 2 and tuple(sorted(c)) in {tuple(sorted(p)) for p in pairs}:
                continue
            raise InternalConsistencyError(f"term {c} with trivial arrow survived reduction")
        red_terms[c] = v
    rq = Quiver(q.n, tuple(a for a in q.arrows if a.id not in dead), q.r)
    reduced = QP(rq, Potential(rq, red_terms, N, check=False), N)
    psi = _linear_inverse(q, phi, N)
    psi.trivial_pairs = pairs
    psi.phi = phi
    return reduced, psi


def trivial_potential(qp: QP, pairs) -> Potential:
    return Potential(qp.quiver, {rotate_min(p): 1 for p in pairs}, qp.trunc, check=False)


def _mutate_qp(qp: QP, l: int):
    pre = premutate_qp(qp, l)
    red, psi = reduce_qp(pre)
    psi.premutated = pre
    return red, psi


_mutate_cached = functools.lru_cache(maxsize=4096)(_mutate_qp)


def mutate_qp(qp: QP, l: int):
    """mu_l(qp) = reduced part of the premutation, with the substitution
    (on the premutated quiver) realising the splitting."""
    if not qp.admissible(l):
        raise AdmissibilityError(f"vertex {l} is not admissible", vertex=l)
    return _mutate_cached(qp, l)


def mutate_qp_sequence(qp: QP, seq) -> QP:
    for step, l in enumerate(seq):
        if not qp.admissible(l):
            raise AdmissibilityError(f"step {step}: vertex {l} is not admissible", step=step, vertex=l)
        qp = mutate_qp(qp, l)[0]
    return qp


# equality up to arrow renaming

def arrow_matchings(q1: Quiver, q2: Quiver):
    """Endpoint-preserving bijections from q2's arrows to q1's arrows."""
    import itertools
    if q1.n != q2.n or q1.multiplicities() != q2.multiplicities():
        return
    g1, g2 = defaultdict(list), defaultdict(list)
    for a in q1.arrows:
        g1[(a.src, a.tgt)].append(a.id)
    for a in q2.arrows:
        g2[(a.src, a.tgt)].append(a.id)
    keys = sorted(g1)
    choices = [list(itertools.permutations(g1[k])) for k in keys]
    for combo in itertools.product(*choices):
        m = {}
        for k, perm in zip(keys, combo):
            m.update(zip(g2[k], perm))
        yield m


def match_qps(qp1: QP, qp2: QP, limit=10000):
    """An arrow renaming of qp2 onto qp1 under which the potentials are
    equal as canonical forms, or None."""
    for k, m in enumerate(arrow_matchings(qp1.quiver, qp2.quiver)):
        if k >= limit:
            break
        if qp2.potential.rename(m, qp1.quiver) == qp1.potential:
            return m
    return None


def check_jacobian_relation(qp: QP, rep) -> bool:
    from .decrep import eval_element
    for a in qp.quiver.arrows:
        d = cyclic_derivative(qp.potential, a.id)
        if d.is_zero():
            continue
        M = eval_element(rep, d, a.tgt, a.src)
        if not linalg.is_zero(M):
            return False
    return True
