"""Sparse multivariate Laurent polynomials over Q.

A polynomial is a map from exponent tuples (length ``nvars``) to nonzero
rational coefficients.  Zero coefficients are never stored, so two values
are equal exactly when their term maps are equal.  Instances are treated as
immutable; all operations return new objects.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import DimensionError, DivisibilityError, DomainError
from .rational import as_rational, norm


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub_exp(a, b):
    return tuple(x - y for x, y in zip(a, b))


class LaurentPoly:
    __slots__ = ("nvars", "_t", "_hash")

    def __init__(self, nvars: int, terms: Mapping | Iterable = (), *, _trusted=False):
        self.nvars = int(nvars)
        self._hash = None
        if _trusted:
            self._t = terms
            return
        t = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(int(v) for v in e)
            if len(e) != self.nvars:
                raise DimensionError(f"exponent {e} has wrong length for {self.nvars} variables")
            c = norm(as_rational(c))
            if c:
                c = norm(t.get(e, 0) + c)
                if c:
                    t[e] = c
                else:
                    t.pop(e, None)
        self._t = t

    # constructors
    @classmethod
    def zero(cls, nvars):
        return cls(nvars, {}, _trusted=True)

    @classmethod
    def const(cls, nvars, c):
        c = norm(as_rational(c))
        return cls(nvars, {(0,) * nvars: c} if c else {}, _trusted=True)

    @classmethod
    def one(cls, nvars):
        return cls(nvars, {(0,) * nvars: 1}, _trusted=True)

    @classmethod
    def var(cls, nvars, k, power=1):
        """The variable x_k (1-based) raised to ``power``."""
        if not 1 <= k <= nvars:
            raise DimensionError(f"variable index {k} out of range 1..{nvars}")
        e = [0] * nvars
        e[k - 1] = power
        return cls(nvars, {tuple(e): 1}, _trusted=True)

    @classmethod
    def monomial(cls, exps, c=1):
        exps = tuple(int(v) for v in exps)
        c = norm(as_rational(c))
        return cls(len(exps), {exps: c} if c else {}, _trusted=True)

    # inspection
    @property
    def terms(self):
        """Terms as a list of (exponent, coefficient) sorted by exponent."""
        return sorted(self._t.items())

    def term_map(self):
        return dict(self._t)

    def coeff(self, exps):
        return self._t.get(tuple(exps), 0)

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self):
        return not self._t

    def is_monomial(self):
        return len(self._t) == 1

    def is_constant(self):
        return not self._t or (len(self._t) == 1 and not any(next(iter(self._t))))

    def constant_term(self):
        return self._t.get((0,) * self.nvars, 0)

    def leading_term(self):
        """Lexicographically largest (exponent, coefficient)."""
        e = max(self._t)
        return e, self._t[e]

    def min_exponents(self):
        if not self._t:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self._t))

    def max_exponents(self):
        if not self._t:
            return (0,) * self.nvars
        return tuple(max(col) for col in zip(*self._t))

    def is_polynomial(self):
        return all(v >= 0 for v in self.min_exponents())

    def has_integer_coeffs(self):
        return all(isinstance(c, int) for c in self._t.values())

    def degree_in(self, k):
        return max(e[k - 1] for e in self._t) if self._t else None

    # arithmetic
    def _check(self, other):
        if self.nvars != other.nvars:
            raise DimensionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other._t) > len(self._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        t = dict(a)
        for e, c in b.items():
            v = t.get(e)
            if v is None:
                t[e] = c
            else:
                v = norm(v + c)
                if v:
                    t[e] = v
                else:
                    del t[e]
        return LaurentPoly(self.nvars, t, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self._t.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = norm(as_rational(c))
        if not c:
            return LaurentPoly.zero(self.nvars)
        return LaurentPoly(self.nvars, {e: norm(v * c) for e, v in self._t.items()}, _trusted=True)

    def shift(self, exps):
        """Multiply by the monomial x^exps."""
        exps = tuple(exps)
        return LaurentPoly(self.nvars, {_add_exp(e, exps): c for e, c in self._t.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        if len(self._t) == 1:
            (e0, c0), = self._t.items()
            return other.shift(e0).scale(c0) if c0 != 1 else other.shift(e0)
        if len(other._t) == 1:
            (e0, c0), = other._t.items()
            return self.shift(e0).scale(c0) if c0 != 1 else self.shift(e0)
        t = {}
        for e1, c1 in self._t.items():
            for e2, c2 in other._t.items():
                e = _add_exp(e1, e2)
                t[e] = t.get(e, 0) + c1 * c2
        t = {e: norm(c) for e, c in t.items() if c}
        return LaurentPoly(self.nvars, t, _trusted=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            if len(self._t) != 1:
                raise DomainError("negative power of a non-monomial Laurent polynomial")
            (e, c), = self._t.items()
            return LaurentPoly.monomial(tuple(v * k for v in e), Fraction(c) ** k)
        result = LaurentPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise DomainError("division by zero")
            return self.scale(Fraction(1) / as_rational(other))
        if isinstance(other, LaurentPoly):
            return laurent_div_exact(self, other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._t.items())))
        return self._hash

    def __repr__(self):
        from ..arithio import print_canonical
        return f"LaurentPoly({self.nvars}, {print_canonical(self)!r})"

    def __str__(self):
        from ..arithio import print_canonical
        return print_canonical(self)

    # conversions
    def to_json(self):
        return [{"exponents": list(e), "coef": str(Fraction(c))} for e, c in self.terms]

    @classmethod
    def from_json(cls, nvars, data):
        return cls(nvars, [(d["exponents"], as_rational(d["coef"])) for d in data])

    def extend(self, nvars):
        """Same polynomial viewed in more variables (appended at the end)."""
        pad = (0,) * (nvars - self.nvars)
        return LaurentPoly(nvars, {e + pad: c for e, c in self._t.items()}, _trusted=True)

    def restrict_vars(self, keep):
        """Drop variables not listed in ``keep`` (1-based); they must not occur."""
        keep = list(keep)
        t = {}
        for e, c in self._t.items():
            if any(e[i] for i in range(self.nvars) if i + 1 not in keep):
                raise DimensionError("dropped variable occurs in polynomial")
            t[tuple(e[k - 1] for k in keep)] = c
        return LaurentPoly(len(keep), t, _trusted=True)


def laurent_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    return a + b


def laurent_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._check(b)
    return a * b


def monomial_part(p: LaurentPoly):
    """Split p = x^m * p0 with p0 a polynomial not divisible by any variable."""
    m = p.min_exponents()
    return m, p.shift(tuple(-v for v in m))


def laurent_div_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact quotient a / b in the Laurent ring; DivisibilityError otherwise.

    Monomials are units.  After factoring them out both sides are ordinary
    polynomials and lex long division decides divisibility.
    """
    a._check(b)
    if not b._t:
        raise DomainError("division by the zero polynomial")
    if not a._t:
        return LaurentPoly.zero(a.nvars)
    if len(b._t) == 1:
        (e, c), = b._t.items()
        inv = Fraction(1) / Fraction(c)
        neg = tuple(-v for v in e)
        return LaurentPoly(a.nvars, {_add_exp(x, neg): norm(v * inv) for x, v in a._t.items()}, _trusted=True)
    ma, a0 = monomial_part(a)
    mb, b0 = monomial_part(b)
    lb, cb = b0.leading_term()
    cb = Fraction(cb)
    rem = dict(a0._t)
    q = {}
    bt = list(b0._t.items())
    while rem:
        lt = max(rem)
        if any(x < y for x, y in zip(lt, lb)):
            raise DivisibilityError("not exactly divisible")
        c = norm(rem[lt] / cb)
        mono = _sub_exp(lt, lb)
        q[mono] = c
        for e, v in bt:
            e2 = _add_exp(e, mono)
            w = rem.get(e2, 0) - c * v
            if w:
                rem[e2] = norm(w)
            else:
                rem.pop(e2, None)
    shift = _sub_exp(ma, mb)
    return LaurentPoly(a.nvars, {_add_exp(e, shift): c for e, c in q.items()}, _trusted=True)


def divides(b: LaurentPoly, a: LaurentPoly) -> bool:
    try:
        laurent_div_exact(a, b)
    except DivisibilityError:
        return False
    return True


def specialize(p: LaurentPoly, values: Mapping) -> LaurentPoly:
    """Substitute variables of p.

    ``values`` maps 1-based variable indices to LaurentPoly or rational
    values.  If any LaurentPoly value is given, its ``nvars`` fixes the
    ambient ring of the result; variables left unassigned survive only when
    that ring is p's own ring.
    """
    out_n = None
    for v in values.values():
        if isinstance(v, LaurentPoly):
            if out_n is not None and v.nvars != out_n:
                raise DimensionError("inconsistent nvars among substituted values")
            out_n = v.nvars
    if out_n is None:
        out_n = p.nvars
    vals = {}
    for k, v in values.items():
        if not 1 <= k <= p.nvars:
            raise DimensionError(f"variable index {k} out of range")
        vals[k - 1] = v if isinstance(v, LaurentPoly) else LaurentPoly.const(out_n, v)
    free = [i for i in range(p.nvars) if i not in vals]
    if free and out_n != p.nvars:
        raise DimensionError("unassigned variables cannot move to a different ring")
    cache = {}

    def power(i, k):
        key = (i, k)
        r = cache.get(key)
        if r is None:
            v = vals[i]
            if k < 0 and not v.is_monomial():
                raise DomainError(f"negative power of non-invertible value for x{i + 1}")
            r = v ** k
            cache[key] = r
        return r

    acc = {}
    for e, c in p._t.items():
        base = [0] * out_n
        for i in free:
            base[i] = e[i]
        term = LaurentPoly(out_n, {tuple(base): c}, _trusted=True)
        for i, v in vals.items():
            if e[i]:
                term = term * power(i, e[i])
        for te, tc in term._t.items():
            acc[te] = acc.get(te, 0) + tc
    return LaurentPoly(out_n, {e: norm(c) for e, c in acc.items() if c}, _trusted=True)
