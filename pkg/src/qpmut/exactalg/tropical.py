"""The tropical semifield Trop(u_1, ..., u_m).

Elements are Laurent monomials in the generators, stored as exponent
vectors.  Multiplication adds exponents, the semifield sum takes the
componentwise minimum.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import DimensionError


@dataclass(frozen=True)
class TropicalElement:
    exponents: tuple

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(v) for v in self.exponents))

    @property
    def m(self):
        return len(self.exponents)

    @classmethod
    def one(cls, m):
        return cls((0,) * m)

    @classmethod
    def generator(cls, m, k):
        e = [0] * m
        e[k - 1] = 1
        return cls(tuple(e))

    def _check(self, other):
        if self.m != other.m:
            raise DimensionError(f"tropical length mismatch: {self.m} vs {other.m}")

    def __add__(self, other):
        return tropical_add(self, other)

    def __mul__(self, other):
        return tropical_mul(self, other)

    def __pow__(self, k):
        return TropicalElement(tuple(k * v for v in self.exponents))

    def inverse(self):
        return self ** -1

    def __truediv__(self, other):
        return self * other.inverse()

    def is_one(self):
        return not any(self.exponents)


def tropical_add(a: TropicalElement, b: TropicalElement) -> TropicalElement:
    a._check(b)
    return TropicalElement(tuple(map(min, a.exponents, b.exponents)))


def tropical_mul(a: TropicalElement, b: TropicalElement) -> TropicalElement:
    a._check(b)
    return TropicalElement(tuple(x + y for x, y in zip(a.exponents, b.exponents)))
