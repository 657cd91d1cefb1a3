"""Sparse multivariate polynomials over exact rationals.

Terms live in a dict mapping exponent tuples (aligned with an ordered
variable-name tuple) to nonzero Fraction coefficients.  Binary operations
require both operands to share the same variable tuple; use `substitute`
to move between variable sets.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import DivisionError
from .unipoly import UniPoly


class MultiPoly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple, Fraction] | None = None):
        object.__setattr__(self, "variables", tuple(variables))
        clean = {}
        if terms:
            nv = len(self.variables)
            for exp, c in terms.items():
                c = Fraction(c)
                if c == 0:
                    continue
                if len(exp) != nv:
                    raise ValueError("exponent arity does not match variable list")
                clean[tuple(exp)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    def __reduce__(self):
        return (MultiPoly, (self.variables, self.terms))

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(variables) -> "MultiPoly":
        return MultiPoly(variables)

    @staticmethod
    def constant(variables, c) -> "MultiPoly":
        variables = tuple(variables)
        if c == 0:
            return MultiPoly(variables)
        return MultiPoly(variables, {(0,) * len(variables): Fraction(c)})

    @staticmethod
    def var(variables, name, power: int = 1) -> "MultiPoly":
        variables = tuple(variables)
        exp = [0] * len(variables)
        exp[variables.index(name)] = power
        return MultiPoly(variables, {tuple(exp): Fraction(1)})

    # -- basics -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.variables, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(0)"
        parts = []
        for exp in sorted(self.terms):
            c = self.terms[exp]
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in zip(self.variables, exp)
                if e
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return "MultiPoly(" + " + ".join(parts) + ")"

    def _check(self, other: "MultiPoly"):
        if self.variables != other.variables:
            raise ValueError("variable lists differ")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(self.variables, other)
        return None

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        r = MultiPoly.__new__(MultiPoly)
        object.__setattr__(r, "variables", self.variables)
        object.__setattr__(r, "terms", out)
        return r

    __radd__ = __add__

    def __neg__(self):
        r = MultiPoly.__new__(MultiPoly)
        object.__setattr__(r, "variables", self.variables)
        object.__setattr__(r, "terms", {e: -c for e, c in self.terms.items()})
        return r

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[tuple, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(key, 0) + ca * cb
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        r = MultiPoly.__new__(MultiPoly)
        object.__setattr__(r, "variables", self.variables)
        object.__setattr__(r, "terms", out)
        return r

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient under lex term order; raises if not divisible."""
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("multivariate division by zero")
        rem = dict(self.terms)
        dexp = max(other.terms)
        dc = other.terms[dexp]
        quot: dict[tuple, Fraction] = {}
        while rem:
            lexp = max(rem)
            lc = rem[lexp]
            qexp = tuple(a - b for a, b in zip(lexp, dexp))
            if any(e < 0 for e in qexp):
                raise DivisionError("leading term not divisible")
            qc = lc / dc
            quot[qexp] = qc
            for e, c in other.terms.items():
                key = tuple(x + y for x, y in zip(qexp, e))
                s = rem.get(key, 0) - qc * c
                if s:
                    rem[key] = s
                else:
                    rem.pop(key, None)
        return MultiPoly(self.variables, quot)

    # -- structure ----------------------------------------------------------

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return -1
        i = self.variables.index(name)
        return max(e[i] for e in self.terms)

    def total_degree_in(self, names) -> int:
        if not self.terms:
            return -1
        idx = [self.variables.index(n) for n in names]
        return max(sum(e[i] for i in idx) for e in self.terms)

    def coefficients_in(self, name: str) -> dict[int, "MultiPoly"]:
        """Coefficients of powers of one variable, as polynomials with that
        variable's exponent zeroed out."""
        i = self.variables.index(name)
        buckets: dict[int, dict] = {}
        for exp, c in self.terms.items():
            rest = exp[:i] + (0,) + exp[i + 1:]
            buckets.setdefault(exp[i], {})[rest] = c
        return {
            d: MultiPoly(self.variables, terms) for d, terms in buckets.items()
        }

    def substitute(self, mapping: Mapping[str, "MultiPoly | Fraction | int"],
                   new_variables) -> "MultiPoly":
        """Map every variable through `mapping` into a new variable set.

        Every variable of self must be mapped; values are MultiPolys over
        `new_variables` (or rational constants).
        """
        new_variables = tuple(new_variables)
        images = []
        for v in self.variables:
            img = mapping[v]
            if isinstance(img, (int, Fraction)):
                img = MultiPoly.constant(new_variables, img)
            elif img.variables != new_variables:
                raise ValueError("substitution image has wrong variables")
            images.append(img)
        out = MultiPoly.zero(new_variables)
        pow_cache: list[dict[int, MultiPoly]] = [dict() for _ in images]
        for exp, c in sorted(self.terms.items()):
            term = MultiPoly.constant(new_variables, c)
            for i, e in enumerate(exp):
                if e == 0:
                    continue
                cache = pow_cache[i]
                if e not in cache:
                    cache[e] = images[i] ** e
                term = term * cache[e]
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        acc = Fraction(0)
        vals = [Fraction(values[v]) for v in self.variables]
        for exp, c in self.terms.items():
            t = c
            for x, e in zip(vals, exp):
                if e:
                    t *= x ** e
            acc += t
        return acc

    def divided_difference(self, name: str, barred: str) -> "MultiPoly":
        """(p with `name` renamed to `barred` minus p) / (barred - name).

        Exact by construction: v^e maps to sum_{a+b=e-1} barred^a * name^b.
        """
        i = self.variables.index(name)
        j = self.variables.index(barred)
        out: dict[tuple, Fraction] = {}
        for exp, c in self.terms.items():
            e = exp[i]
            if e == 0:
                continue
            for a in range(e):
                key = list(exp)
                key[i] = e - 1 - a
                key[j] = exp[j] + a
                key = tuple(key)
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return MultiPoly(self.variables, out)

    def rename(self, name: str, target: str) -> "MultiPoly":
        """Move all powers of `name` onto `target` (both must be variables)."""
        i = self.variables.index(name)
        j = self.variables.index(target)
        out: dict[tuple, Fraction] = {}
        for exp, c in self.terms.items():
            if exp[i] == 0:
                out[exp] = out.get(exp, 0) + c
                continue
            key = list(exp)
            key[j] = exp[j] + exp[i]
            key[i] = 0
            key = tuple(key)
            s = out.get(key, 0) + c
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return MultiPoly(self.variables, out)

    def content(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "MultiPoly":
        """Divide out the rational content: integer coefficients, content 1."""
        if not self.terms:
            return self
        c = self.content()
        return MultiPoly(self.variables, {e: v / c for e, v in self.terms.items()})

    def to_unipoly(self, name: str) -> UniPoly:
        """Convert when no other variable occurs."""
        i = self.variables.index(name)
        coeffs: dict[int, Fraction] = {}
        for exp, c in self.terms.items():
            if any(e and k != i for k, e in enumerate(exp)):
                raise ValueError("polynomial is not univariate in " + name)
            coeffs[exp[i]] = c
        if not coeffs:
            return UniPoly.zero()
        out = [Fraction(0)] * (max(coeffs) + 1)
        for d, c in coeffs.items():
            out[d] = c
        return UniPoly(out)

    @staticmethod
    def from_unipoly(p: UniPoly, variables, name: str) -> "MultiPoly":
        variables = tuple(variables)
        i = variables.index(name)
        terms = {}
        for d, c in enumerate(p.coeffs):
            if c == 0:
                continue
            exp = [0] * len(variables)
            exp[i] = d
            terms[tuple(exp)] = c
        return MultiPoly(variables, terms)
