"""Rational functions as normalized pairs of Laurent polynomials.

Normalization: if the denominator divides the numerator the value collapses
to a Laurent polynomial (den = 1).  Otherwise monomials are moved into the
numerator (they are units), the denominator is scaled to a primitive
integer polynomial whose lex-leading coefficient is positive.  Common
non-monomial factors are not cancelled (no multivariate gcd), so equality
is decided by cross multiplication.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from ..errors import DimensionError, DivisibilityError, DomainError
from .laurent import LaurentPoly, laurent_div_exact, monomial_part
from .rational import as_rational


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None, *, _normalized=False):
        if den is None:
            den = LaurentPoly.one(num.nvars)
        if num.nvars != den.nvars:
            raise DimensionError("numerator and denominator live in different rings")
        if den.is_zero():
            raise DomainError("zero denominator")
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @property
    def nvars(self):
        return self.num.nvars

    @classmethod
    def from_laurent(cls, p: LaurentPoly):
        return cls(p, LaurentPoly.one(p.nvars), _normalized=True)

    @classmethod
    def var(cls, nvars, k):
        return cls.from_laurent(LaurentPoly.var(nvars, k))

    @classmethod
    def const(cls, nvars, c):
        return cls.from_laurent(LaurentPoly.const(nvars, c))

    def is_laurent(self):
        return self.den.is_constant()

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise DivisibilityError("rational function is not a Laurent polynomial")
        return self.num.scale(Fraction(1) / Fraction(self.den.constant_term()))

    def is_zero(self):
        return self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.nvars != self.nvars:
                raise DimensionError("nvars mismatch")
            return other
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise DimensionError("nvars mismatch")
            return RationalFunction.from_laurent(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise DomainError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self.num == other.num and self.den == other.den:
            return True
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        # only Laurent values have a canonical form
        if self.is_laurent():
            return hash(self.as_laurent())
        return hash(("rf", self.nvars))

    def __repr__(self):
        from ..arithio import print_canonical
        return f"RationalFunction({print_canonical(self)!r})"

    def __str__(self):
        from ..arithio import print_canonical
        return print_canonical(self)

    def substitute_var(self, k: int, image: "RationalFunction") -> "RationalFunction":
        """Replace x_k by ``image`` everywhere."""
        return RationalFunction(*_subst_poly(self.num, k, image)) / RationalFunction(*_subst_poly(self.den, k, image))


def _subst_poly(p: LaurentPoly, k: int, image: RationalFunction):
    # p = sum_j c_j x_k^j with j in [lo, hi]; with x_k = A/B,
    # p = A^lo B^-hi * sum_j c_j A^(j-lo) B^(hi-j)
    n = p.nvars
    if p.is_zero():
        return p, LaurentPoly.one(n)
    A, B = image.num, image.den
    groups = {}
    for e, c in p.term_map().items():
        j = e[k - 1]
        rest = e[:k - 1] + (0,) + e[k:]
        groups.setdefault(j, {})[rest] = c
    lo, hi = min(groups), max(groups)
    total = LaurentPoly.zero(n)
    for j, t in groups.items():
        total = total + LaurentPoly(n, t) * (A ** (j - lo)) * (B ** (hi - j))
    num = total
    den = LaurentPoly.one(n)
    if lo >= 0:
        num = num * A ** lo
    else:
        den = den * A ** (-lo)
    if hi >= 0:
        den = den * B ** hi
    else:
        num = num * B ** (-hi)
    return num, den


def _normalize(num: LaurentPoly, den: LaurentPoly):
    n = num.nvars
    if num.is_zero():
        return num, LaurentPoly.one(n)
    try:
        q = laurent_div_exact(num, den)
        return q, LaurentPoly.one(n)
    except DivisibilityError:
        pass
    m, den0 = monomial_part(den)
    num = num.shift(tuple(-v for v in m))
    coeffs = [as_rational(c) for _, c in den0.terms]
    L = lcm(*(c.denominator for c in coeffs))
    G = gcd(*(c.numerator for c in coeffs))
    scale = Fraction(L, G)
    if den0.leading_term()[1] < 0:
        scale = -scale
    return num.scale(scale), den0.scale(scale)
