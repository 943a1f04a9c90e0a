"""Exact arithmetic: rationals, Laurent polynomials, rational functions,
the tropical semifield and exact linear algebra."""
from .rational import Rational, as_rational, format_rational, parse_rational
from .laurent import (
    LaurentPoly,
    divides,
    laurent_add,
    laurent_div_exact,
    laurent_mul,
    monomial_part,
    specialize,
)
from .ratfunc import RationalFunction
from .tropical import TropicalElement, tropical_add, tropical_mul

__all__ = [
    "Rational", "as_rational", "format_rational", "parse_rational",
    "LaurentPoly", "divides", "laurent_add", "laurent_div_exact", "laurent_mul",
    "monomial_part", "specialize", "RationalFunction",
    "TropicalElement", "tropical_add", "tropical_mul",
]
