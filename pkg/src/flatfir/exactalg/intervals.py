"""Exact interval arithmetic with rational endpoints.

Endpoints are Fractions (dyadic after rounding); all operations return
enclosures, so any value computed from enclosed inputs stays enclosed.
"""

from __future__ import annotations

import math
from fractions import Fraction


class RatInterval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if hi < lo:
            raise ValueError("empty interval")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("RatInterval is immutable")

    def __reduce__(self):
        return (RatInterval, (self.lo, self.hi))

    def __repr__(self):
        return f"RatInterval({self.lo}, {self.hi})"

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def mag(self) -> Fraction:
        """Largest absolute value in the interval."""
        return max(abs(self.lo), abs(self.hi))

    def _coerce(self, other):
        if isinstance(other, RatInterval):
            return other
        if isinstance(other, (int, Fraction)):
            return RatInterval(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        cands = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return RatInterval(min(cands), max(cands))

    __rmul__ = __mul__

    def reciprocal(self):
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        return RatInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return RatInterval(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (self ** (-n)).reciprocal()
        if n == 0:
            return RatInterval(1)
        if n % 2 == 1 or self.lo >= 0:
            return RatInterval(self.lo ** n, self.hi ** n)
        if self.hi <= 0:
            return RatInterval(self.hi ** n, self.lo ** n)
        return RatInterval(0, max(self.lo ** n, self.hi ** n))

    def sqrt(self, bits: int = 128) -> "RatInterval":
        """Enclosure of the square root; requires hi >= 0, clamps lo at 0."""
        if self.hi < 0:
            raise ValueError("square root of a negative interval")
        lo = max(self.lo, Fraction(0))
        return RatInterval(_sqrt_down(lo, bits), _sqrt_up(self.hi, bits))

    def round_out(self, bits: int) -> "RatInterval":
        """Outward rounding of the endpoints to denominator 2^bits."""
        s = 1 << bits
        lo = Fraction(math.floor(self.lo * s), s)
        hi = Fraction(math.ceil(self.hi * s), s)
        return RatInterval(lo, hi)

    def hull(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def overlaps(self, other: "RatInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi


def _sqrt_down(x: Fraction, bits: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    n, d = x.numerator, x.denominator
    s = math.isqrt(n * d << (2 * bits))
    return Fraction(s, d << bits)


def _sqrt_up(x: Fraction, bits: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    n, d = x.numerator, x.denominator
    s = math.isqrt(n * d << (2 * bits))
    if s * s < (n * d << (2 * bits)):
        s += 1
    return Fraction(s, d << bits)


def eval_poly_interval(coeffs, x: RatInterval) -> RatInterval:
    """Horner evaluation of a polynomial (ascending coefficients) on an interval."""
    acc = RatInterval(0)
    for c in reversed(list(coeffs)):
        acc = acc * x + RatInterval(c)
    return acc
