"""Complete real-root isolation via Sturm chains, with dyadic refinement.

Roots come back as disjoint closed intervals with dyadic rational
endpoints and exact multiplicities (from the squarefree decomposition).
Exact rational roots are returned as degenerate point intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DegenerateInput
from .unipoly import UniPoly, _zcontent, _zpseudo_rem, _zstrip, squarefree_decomposition


@dataclass(frozen=True)
class RootInterval:
    lo: Fraction
    hi: Fraction
    multiplicity: int

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def reflect(self, c: Fraction) -> "RootInterval":
        """The interval of c - t for t in self."""
        return RootInterval(c - self.hi, c - self.lo, self.multiplicity)


def _positive_primitive(a: list[int]) -> list[int]:
    g = _zcontent(a)
    if g > 1:
        return [c // g for c in a]
    return list(a)


def _sturm_chain(p: list[int]) -> list[list[int]]:
    """Sturm chain of a squarefree integer polynomial.

    Each element is scaled by a positive constant only, which leaves every
    sign-variation count unchanged.
    """
    chain = [_positive_primitive(p)]
    dp = _zstrip([i * c for i, c in enumerate(p)][1:])
    if dp:
        chain.append(_positive_primitive(dp))
    while chain[-1] and len(chain[-1]) > 1:
        r = _zpseudo_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(_positive_primitive([-c for c in r]))
    return chain


def _sign_at(coeffs: list[int], num: int, den: int) -> int:
    """Sign of p(num/den) with den > 0, via the homogenized integer value."""
    acc = 0
    pw = 1
    for c in reversed(coeffs):
        acc = acc * num + c * pw
        pw *= den
    return (acc > 0) - (acc < 0)


def _variations(signs: list[int]) -> int:
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def _variations_at(chain: list[list[int]], num: int, den: int) -> int:
    return _variations([_sign_at(f, num, den) for f in chain])


def _root_bound_pow2(p: list[int]) -> int:
    """Power-of-two Cauchy bound on the absolute value of all roots."""
    lead = abs(p[-1])
    top = max(abs(c) for c in p[:-1]) if len(p) > 1 else 0
    b = 1 + (top + lead - 1) // lead if top else 1
    return 1 << max(1, b.bit_length())


def _isolate_squarefree(p: list[int]) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals for all real roots of squarefree p.

    Endpoints are dyadic; exact rational roots give degenerate intervals
    (the root is divided out and isolation continues on the quotient).
    """
    p = _positive_primitive(p)
    if len(p) <= 1:
        return []
    out: list[tuple[Fraction, Fraction]] = []
    chain = _sturm_chain(p)
    bound = _root_bound_pow2(p)
    # (lo_num, lo_den, hi_num, hi_den, variations at lo, variations at hi)
    v_lo = _variations_at(chain, -bound, 1)
    v_hi = _variations_at(chain, bound, 1)
    stack = [(-bound, 1, bound, 1, v_lo, v_hi)]
    while stack:
        a_n, a_d, b_n, b_d, va, vb = stack.pop()
        n_roots = va - vb
        if n_roots <= 0:
            continue
        if n_roots == 1:
            out.append((Fraction(a_n, a_d), Fraction(b_n, b_d)))
            continue
        m_n = a_n * b_d + b_n * a_d
        m_d = 2 * a_d * b_d
        g = math.gcd(m_n, m_d)
        m_n //= g
        m_d //= g
        if _sign_at(p, m_n, m_d) == 0:
            # Exact rational root: divide it out and isolate the quotient
            # from scratch (partial work may overlap the quotient's roots).
            r = Fraction(m_n, m_d)
            q = _divide_out_root(p, r)
            return sorted([(r, r)] + _isolate_squarefree(q))
        vm = _variations_at(chain, m_n, m_d)
        stack.append((a_n, a_d, m_n, m_d, va, vm))
        stack.append((m_n, m_d, b_n, b_d, vm, vb))
    out.sort()
    return out


def _divide_out_root(p: list[int], r: Fraction) -> list[int]:
    """p / (den*t - num) over the rationals, back to primitive integers."""
    den, num = r.denominator, r.numerator
    # Synthetic division by (t - r), then clear denominators.
    q = [Fraction(0)] * (len(p) - 1)
    carry = Fraction(0)
    for i in range(len(p) - 1, 0, -1):
        carry = Fraction(p[i]) + carry * r
        q[i - 1] = carry
    lcm = 1
    for c in q:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return _positive_primitive([int(c * lcm) for c in q])


def _newton_dyadic(ints: list[int], dints: list[int],
                   num: int, scale_bits: int, out_bits: int) -> tuple[int, int] | None:
    """One Newton step from num/2^scale_bits, returned as a dyadic numerator
    over 2^out_bits (out_bits >= scale_bits).  Integer arithmetic only.

    The second element is 0 when the point is an exact root.
    """
    den = 1 << scale_bits
    hp = 0
    pw = 1
    for c in reversed(ints):
        hp = hp * num + c * pw
        pw *= den
    if hp == 0:
        return num << (out_bits - scale_bits), 0
    hd = 0
    pw = 1
    for c in reversed(dints):
        hd = hd * num + c * pw
        pw *= den
    if hd == 0:
        return None
    # x1 = x - p(x)/p'(x) = (num - hp/hd) / 2^scale_bits; floor division
    # costs at most one output ulp, covered by the caller's slack.
    corr = (hp << out_bits) // hd
    return (num << (out_bits - scale_bits)) - corr, 1


def refine_interval(p: UniPoly, lo: Fraction, hi: Fraction,
                    width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval of a simple root of p to the given width.

    Bisection with Newton acceleration once the interval is small; every
    accepted interval is certified by sign changes of p at its endpoints.
    All evaluations are integer-homogenized (dyadic points, no rationals).
    """
    if lo == hi:
        return lo, hi
    ints, _ = p.to_int_coeffs()
    dints = _zstrip([i * c for i, c in enumerate(ints)][1:])

    def sign(x: Fraction) -> int:
        return _sign_at(ints, x.numerator, x.denominator)

    s_lo = sign(lo)
    s_hi = sign(hi)
    if s_lo == 0:
        return lo, lo
    if s_hi == 0:
        return hi, hi
    if s_lo == s_hi:
        raise DegenerateInput("interval does not bracket a sign change")
    while hi - lo > width:
        cur = hi - lo
        cur_bits = cur.denominator.bit_length()
        if cur_bits > 24 and dints:
            # Newton step from a dyadic point near the midpoint, verified.
            mid = (lo + hi) / 2
            scale_bits = cur_bits + 8
            num = (mid.numerator << scale_bits) // mid.denominator
            out_bits = max(2 * cur_bits + 8, scale_bits)
            step = _newton_dyadic(ints, dints, num, scale_bits, out_bits)
            if step is not None:
                x1_num, status = step
                if status == 0:
                    r = Fraction(x1_num, 1 << out_bits)
                    return r, r
                s = 1 << out_bits
                nlo = Fraction(x1_num - 2, s)
                nhi = Fraction(x1_num + 2, s)
                if nlo > lo and nhi < hi:
                    sl = sign(nlo)
                    if sl == 0:
                        return nlo, nlo
                    sh = sign(nhi)
                    if sh == 0:
                        return nhi, nhi
                    if sl == s_lo and sh == s_hi:
                        lo, hi = nlo, nhi
                        continue
        mid = (lo + hi) / 2
        s_mid = sign(mid)
        if s_mid == 0:
            return mid, mid
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def sturm_real_roots(p: UniPoly, precision_bits: int = 64) -> list[RootInterval]:
    """All real roots of p as disjoint intervals of width <= 2^-precision_bits,
    with multiplicities from the squarefree decomposition."""
    if p.is_zero:
        raise DegenerateInput("root isolation of the zero polynomial")
    if p.degree == 0:
        return []
    width = Fraction(1, 1 << precision_bits)
    found: list[RootInterval] = []
    for factor, mult in squarefree_decomposition(p):
        ints, _ = factor.to_int_coeffs()
        for lo, hi in _isolate_squarefree(ints):
            lo, hi = refine_interval(factor, lo, hi, width)
            found.append(RootInterval(lo, hi, mult))
    found.sort(key=lambda r: (r.lo, r.hi))
    # Roots of distinct squarefree factors are distinct; shrink until disjoint.
    changed = True
    while changed:
        changed = False
        for i in range(len(found) - 1):
            a, b = found[i], found[i + 1]
            if a.hi >= b.lo and not (a.is_exact and b.is_exact):
                fa = _factor_of(p, a)
                fb = _factor_of(p, b)
                na = refine_interval(fa, a.lo, a.hi, (a.hi - a.lo) / 4) if not a.is_exact else (a.lo, a.hi)
                nb = refine_interval(fb, b.lo, b.hi, (b.hi - b.lo) / 4) if not b.is_exact else (b.lo, b.hi)
                found[i] = RootInterval(na[0], na[1], a.multiplicity)
                found[i + 1] = RootInterval(nb[0], nb[1], b.multiplicity)
                changed = True
        found.sort(key=lambda r: (r.lo, r.hi))
    return found


def _factor_of(p: UniPoly, r: RootInterval) -> UniPoly:
    for factor, mult in squarefree_decomposition(p):
        if mult == r.multiplicity:
            return factor
    raise DegenerateInput("no squarefree factor for interval")
