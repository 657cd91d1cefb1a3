"""Dense univariate polynomials over exact rationals.

Coefficients are `fractions.Fraction`, stored in ascending powers of t with
no trailing zero, so `degree == len(coeffs) - 1` and the zero polynomial is
the empty tuple.  Heavy algorithms (gcd, pseudo-remainder sequences) run on
integer coefficient lists after clearing denominators.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import DegenerateInput, DivisionError

Rational = Fraction


def _normalize(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(Fraction(c) for c in coeffs[:n])


class UniPoly:
    """Immutable univariate polynomial in t over the rationals."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _normalize([Fraction(c) for c in coeffs]))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    def __reduce__(self):
        return (UniPoly, (self.coeffs,))

    @staticmethod
    def zero() -> "UniPoly":
        return _ZERO

    @staticmethod
    def one() -> "UniPoly":
        return _ONE

    @staticmethod
    def t() -> "UniPoly":
        return _T

    @staticmethod
    def constant(c) -> "UniPoly":
        return UniPoly([c])

    @staticmethod
    def monomial(c, n: int) -> "UniPoly":
        if c == 0:
            return _ZERO
        return UniPoly([0] * n + [c])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == UniPoly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if self.is_zero:
            return "UniPoly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^{i}")
        return "UniPoly(" + " + ".join(parts) + ")"

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly.constant(other)
        return None

    def __add__(self, other) -> "UniPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "UniPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "UniPoly":
        return (-self) + other

    def __mul__(self, other) -> "UniPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _ZERO
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power")
        result = _ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """Quotient and remainder over the rationals."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return _ZERO, self
        quot = [Fraction(0)] * (dq + 1)
        dcoeffs = other.coeffs
        lead = dcoeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(dcoeffs) - 1]
            if c == 0:
                continue
            q = c / lead
            quot[k] = q
            for i, dc in enumerate(dcoeffs):
                rem[k + i] -= q * dc
        return UniPoly(quot), UniPoly(rem)

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        """Exact quotient; raises DivisionError on a nonzero remainder."""
        q, r = self.divmod(other)
        if not r.is_zero:
            raise DivisionError(f"remainder of degree {r.degree} in exact division")
        return q

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError
            inv = Fraction(1, 1) / Fraction(other)
            return UniPoly([c * inv for c in self.coeffs])
        if isinstance(other, UniPoly):
            return self.exact_div(other)
        return NotImplemented

    def evaluate(self, x) -> Fraction:
        """Horner evaluation at a rational point."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __call__(self, x):
        return self.evaluate(x)

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def compose_linear(self, a, b) -> "UniPoly":
        """p(a*t + b), expanded exactly."""
        lin = UniPoly([b, a])
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * lin + c
        return acc

    def content(self) -> Fraction:
        """Positive rational c with self/c integer-primitive, 0 for zero."""
        if self.is_zero:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.coeffs:
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "UniPoly":
        """Integer coefficients with content 1; sign of the input kept."""
        if self.is_zero:
            return self
        return self / self.content()

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        return self / self.leading

    def to_int_coeffs(self) -> tuple[list[int], int]:
        """(integer coefficient list, denominator) with den * self integral."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return [int(c * den) for c in self.coeffs], den

    @staticmethod
    def from_int_coeffs(ints: Sequence[int], den: int = 1) -> "UniPoly":
        return UniPoly([Fraction(c, den) for c in ints])


_ZERO = UniPoly.__new__(UniPoly)
object.__setattr__(_ZERO, "coeffs", ())
_ONE = UniPoly.__new__(UniPoly)
object.__setattr__(_ONE, "coeffs", (Fraction(1),))
_T = UniPoly.__new__(UniPoly)
object.__setattr__(_T, "coeffs", (Fraction(0), Fraction(1)))


# ---------------------------------------------------------------------------
# Integer coefficient-list kernels (ascending powers, trailing zeros stripped).
# Used by the gcd / remainder-sequence code to avoid Fraction overhead.
# ---------------------------------------------------------------------------

def _zstrip(a: list[int]) -> list[int]:
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    del a[n:]
    return a

def _zcontent(a: Sequence[int]) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
        if g == 1:
            break
    return g

def _zprimitive(a: list[int]) -> list[int]:
    g = _zcontent(a)
    if g > 1:
        return [c // g for c in a]
    return list(a)

def _zpseudo_rem(f: list[int], g: list[int]) -> list[int]:
    """c * rem(f, g) for some positive rational c, over the integers.

    Scales by lc(g) once per elimination step; if the accumulated scale
    lc(g)^steps is negative the result is negated, so the sign structure
    (needed by Sturm chains) matches the true remainder.
    """
    r = list(f)
    dg = len(g) - 1
    lg = g[-1]
    steps = 0
    while r and len(r) - 1 >= dg:
        dr = len(r) - 1
        lead = r[-1]
        r = [c * lg for c in r]
        steps += 1
        for i in range(dg + 1):
            r[dr - dg + i] -= lead * g[i]
        _zstrip(r)
    if lg < 0 and steps % 2:
        r = [-c for c in r]
    return r


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor; gcd(p, 0) is monic(p)."""
    if a.is_zero and b.is_zero:
        raise DegenerateInput("gcd of two zero polynomials")
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    f, _ = a.to_int_coeffs()
    g, _ = b.to_int_coeffs()
    if len(f) < len(g):
        f, g = g, f
    f = _zprimitive(f)
    g = _zprimitive(g)
    while g:
        r = _zpseudo_rem(f, g)
        f, g = g, _zprimitive(r)
    return UniPoly.from_int_coeffs(f).monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    """Monic polynomial with the same roots as p, all simple."""
    if p.is_zero:
        raise DegenerateInput("squarefree part of the zero polynomial")
    if p.degree == 0:
        return UniPoly.one()
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g).monic()


def squarefree_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: [(f_i, i)] with p = lc * prod f_i^i, f_i monic squarefree."""
    if p.is_zero:
        raise DegenerateInput("squarefree decomposition of the zero polynomial")
    p = p.monic()
    if p.degree == 0:
        return []
    out: list[tuple[UniPoly, int]] = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a.monic(), i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out
