"""Finite-difference vectors and the bracket polynomials they generate.

The linear parts of the reduced design systems are matrices whose entries
are dot products of averaged forward-difference vectors against shifted
power sequences.  Writing bracket(j, l, K) for that dot product, the
coefficient matrices have closed-form determinants: products of (2t - i)
with predictable exponents, which is what drives the degree theorems and
the extraneous-factor bookkeeping downstream.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import VerificationFailure
from .exactalg import PolyMatrix, UniPoly


@lru_cache(maxsize=None)
def diff_vector(j: int, K: int) -> tuple[Fraction, ...]:
    """Coefficient vector of the averaged j-th forward difference.

    Entry p is 2^-K sum_s C(K,s) * delta_j[p - s], where delta_j has
    entries (-1)^(j-i) C(j,i) / j! at positions 0..j.  Support is 0..j+K.
    """
    if j < 0 or K < 1:
        raise ValueError("need j >= 0 and K >= 1")
    fact = math.factorial(j)
    delta = [Fraction((-1) ** (j - i) * math.comb(j, i), fact) for i in range(j + 1)]
    out = [Fraction(0)] * (j + K + 1)
    scale = Fraction(1, 2 ** K)
    for s in range(K + 1):
        w = scale * math.comb(K, s)
        for i, d in enumerate(delta):
            out[s + i] += w * d
    return tuple(out)


@lru_cache(maxsize=None)
def bracket(j: int, l: int, K: int) -> UniPoly:
    """Dot product of diff_vector(j, K) against ((0-t)^l, (1-t)^l, ...).

    A polynomial of degree exactly l - j for l >= j, zero otherwise.
    """
    if j > l:
        return UniPoly.zero()
    d = diff_vector(j, K)
    coeffs = [Fraction(0)] * (l + 1)
    for p, w in enumerate(d):
        if w == 0:
            continue
        # (p - t)^l contributes C(l,q) p^(l-q) (-1)^q to the t^q coefficient.
        for q in range(l + 1):
            coeffs[q] += w * math.comb(l, q) * (-1) ** q * p ** (l - q)
    return UniPoly(coeffs)


def bracket_matrix(s: int, m: int, K: int) -> PolyMatrix:
    """(m+1) x (m+1) matrix with entry (r, c) = bracket(2s-1+c, 2s+2r, K)."""
    if s < 1 or m < 0 or K < 1:
        raise ValueError("need s >= 1, m >= 0, K >= 1")
    return PolyMatrix(m + 1, m + 1,
                      [bracket(2 * s - 1 + c, 2 * s + 2 * r, K)
                       for r in range(m + 1) for c in range(m + 1)])


def bracket_matrix_shifted(s: int, m: int, K: int) -> PolyMatrix:
    """Column-shifted variant: entry (r, c) = bracket(2s+c, 2s+2r, K).

    Its first row is zero past the first entry, so its determinant equals
    that of bracket_matrix(s+1, m-1, K).
    """
    if s < 1 or m < 1 or K < 1:
        raise ValueError("need s >= 1, m >= 1, K >= 1")
    return PolyMatrix(m + 1, m + 1,
                      [bracket(2 * s + c, 2 * s + 2 * r, K)
                       for r in range(m + 1) for c in range(m + 1)])


def predicted_det(s: int, m: int, K: int) -> UniPoly:
    """Closed-form determinant of bracket_matrix(s, m, K), up to a constant.

    Product of (2t - i)^(floor((m - |c - i|)/2) + 1) over the root window
    i = 2s-1+K .. 2s-1+K+2m, centered at c = 2s-1+m+K.
    """
    c = 2 * s - 1 + m + K
    t = UniPoly.t()
    out = UniPoly.one()
    for i in range(2 * s - 1 + K, 2 * s - 1 + K + 2 * m + 1):
        e = (m - abs(c - i)) // 2 + 1
        if e > 0:
            out = out * (2 * t - i) ** e
    return out


def predicted_det_shifted(s: int, m: int, K: int) -> UniPoly:
    """Closed-form determinant of bracket_matrix_shifted, up to a constant.

    Product of (2t - i)^(floor((m-1 - |c - i|)/2) + 1) over
    i = 2s+1+K .. 2s-1+K+2m, centered at c = 2s+m+K.
    """
    c = 2 * s + m + K
    t = UniPoly.t()
    out = UniPoly.one()
    for i in range(2 * s + 1 + K, 2 * s - 1 + K + 2 * m + 1):
        e = (m - 1 - abs(c - i)) // 2 + 1
        if e > 0:
            out = out * (2 * t - i) ** e
    return out


def multiplicity_excess(L: int, K: int) -> UniPoly:
    """Product of (2t - i) to one less than its multiplicity in
    predicted_det(L+2, L, K); the square of this divides the raw
    resultant on the M = 2L+3 pipeline."""
    c = 3 * L + 3 + K
    t = UniPoly.t()
    out = UniPoly.one()
    for i in range(2 * L + 5 + K, 4 * L + 1 + K + 1):
        e = (L - abs(c - i)) // 2
        if e > 0:
            out = out * (2 * t - i) ** e
    return out


def proportional(p: UniPoly, q: UniPoly) -> bool:
    """True when p and q agree up to a nonzero rational constant."""
    if p.is_zero or q.is_zero:
        return p.is_zero and q.is_zero
    if p.degree != q.degree:
        return False
    return p * q.leading == q * p.leading


def verify_bracket_identities(j: int, l: int, K: int) -> dict:
    """Check the reflection, center-zero and boost identities exactly.

    Raises VerificationFailure naming the first identity that fails;
    returns a small report dict when all hold.
    """
    b = bracket(j, l, K)
    center2 = j + K  # twice the symmetry center
    reflected = b.compose_linear(Fraction(-1), Fraction(center2))
    if reflected != b * Fraction((-1) ** (j + l)):
        raise VerificationFailure(f"reflection identity fails at (j={j}, l={l}, K={K})")
    if (j + l) % 2 == 1 and b.evaluate(Fraction(center2, 2)) != 0:
        raise VerificationFailure(f"center-value zero fails at (j={j}, l={l}, K={K})")
    shifted = b.compose_linear(Fraction(1), Fraction(-1))
    if shifted != b + (j + 1) * bracket(j + 1, l, K):
        raise VerificationFailure(f"boost identity fails at (j={j}, l={l}, K={K})")
    return {"j": j, "l": l, "K": K, "degree": b.degree}


def rank_at(matrix: PolyMatrix, t0: Fraction) -> int:
    """Exact rank of a polynomial matrix evaluated at a rational point."""
    from .exactalg.polymatrix import _rat_rank_pivots

    rank, _, _ = _rat_rank_pivots(matrix.evaluate(t0))
    return rank


def verify_rank_drops(s: int, m: int, K: int) -> list[tuple[Fraction, int, int]]:
    """Rank of bracket_matrix at every half-integer center value.

    At t = (j + 2p + K)/2 with j+2p inside the column window the rank must
    drop to at most m - p.  Returns (t, rank, bound) triples; raises on
    any violation.
    """
    A = bracket_matrix(s, m, K)
    lo, hi = 2 * s - 1, 2 * s + m - 1
    out = []
    for j0 in (lo, lo + 1):  # odd and even column starting indices
        p = 0
        while j0 + 2 * p <= hi:
            t0 = Fraction(j0 + 2 * p + K, 2)
            r = rank_at(A, t0)
            bound = m - p
            if r > bound:
                raise VerificationFailure(
                    f"rank {r} exceeds bound {bound} at t={t0} for (s={s}, m={m}, K={K})")
            out.append((t0, r, bound))
            p += 1
    return out
