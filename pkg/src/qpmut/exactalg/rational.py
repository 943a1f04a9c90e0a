"""Rational scalars.

``fractions.Fraction`` is the rational type.  Integral values are kept as
plain ``int`` inside polynomials for speed; :func:`as_rational` and
:func:`norm` convert between the two views.
"""
from fractions import Fraction
from numbers import Rational as _Rational

from ..errors import DomainError, ParseError

Rational = Fraction


def norm(c):
    """Collapse an integral Fraction to int, keep anything else."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def as_rational(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, _Rational):
        return Fraction(c.numerator, c.denominator)
    if isinstance(c, str):
        return parse_rational(c)
    raise TypeError(f"not an exact rational: {c!r}")


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not s:
        raise ParseError("empty rational literal")
    # Fraction() also accepts decimals and exponents, we do not
    body = s[1:] if s[0] in "+-" else s
    num, _, den = body.partition("/")
    if not num.isdigit() or (den and not den.isdigit()) or (_ and not den):
        raise ParseError(f"bad rational literal {s!r}")
    if den and int(den) == 0:
        raise DomainError(f"zero denominator in {s!r}")
    return Fraction(s)


def format_rational(c) -> str:
    return str(as_rational(c))
