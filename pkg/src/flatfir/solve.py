"""From the moment polynomial's roots to concrete filters.

Every root of the stripped moment polynomial is an exact algebraic number
held as a shrinking rational interval; the remaining moments are recovered
with interval arithmetic (certified enclosures), the tap vector follows
from the closure matrices, and the squared magnitude response is sampled
at high precision for a monotonicity classification.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .eliminate import CramerCollapse, EliminationResult, q4_collapse
from .errors import EliminationFailure, SpuriousRoot, VerificationFailure
from .exactalg import (RatInterval, RootInterval, UniPoly, eval_poly_interval,
                       refine_interval, sturm_real_roots)
from .exactalg.polymatrix import _rat_rank_pivots
from .system import (DesignParams, ReducedSystem, build_moment_matrices,
                     full_system_equations, moment_images, reduce_system)
from .eliminate import _eq_parts, _linear_rows, _unit


def fraction_to_decimal(x: Fraction, digits: int = 40) -> str:
    """Deterministic fixed-point decimal rendering (round half away from 0)."""
    sign = "-" if x < 0 else ""
    x = abs(x)
    scaled = x * 10 ** digits
    q = scaled.numerator // scaled.denominator
    if 2 * (scaled.numerator % scaled.denominator) >= scaled.denominator:
        q += 1
    whole, frac = divmod(q, 10 ** digits)
    return f"{sign}{whole}.{str(frac).zfill(digits)}"


@dataclass
class FilterSolution:
    root: RootInterval
    t_decimal: str
    moments: list[RatInterval]      # m_0 .. m_{L+M}
    coeffs: list[RatInterval]       # h[0] .. h[N-1]
    partner: int | None = None
    response_class: str | None = None
    response: list | None = None    # (omega, value) samples when computed


def pair_roots(roots: list[RootInterval], params: DesignParams) -> list[int]:
    """Index of the time-reversed twin for every root (itself allowed)."""
    rev = Fraction(params.reversal_sum)
    partners = []
    for r in roots:
        mirrored_lo, mirrored_hi = rev - r.hi, rev - r.lo
        match = None
        for j, other in enumerate(roots):
            if other.lo <= mirrored_hi and mirrored_lo <= other.hi:
                match = j
                break
        if match is None:
            raise VerificationFailure("root has no time-reversed partner")
        partners.append(match)
    return partners


# ---------------------------------------------------------------------------
# Interval linear algebra.
# ---------------------------------------------------------------------------

def interval_solve(a: list[list[RatInterval]], b: list[RatInterval],
                   round_bits: int) -> list[RatInterval]:
    """Gaussian elimination with interval entries; raises ZeroDivisionError
    when a pivot interval straddles zero (caller refines and retries)."""
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    perm = list(range(n))
    for col in range(n):
        piv = None
        best = Fraction(-1)
        for r in range(col, n):
            iv = m[r][col]
            if iv.contains_zero():
                continue
            score = min(abs(iv.lo), abs(iv.hi))
            if score > best:
                best = score
                piv = r
        if piv is None:
            raise ZeroDivisionError("no usable interval pivot")
        m[col], m[piv] = m[piv], m[col]
        for r in range(col + 1, n):
            if m[r][col].contains_zero() and m[r][col].is_point:
                continue
            f = m[r][col] / m[col][col]
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
            m[r][col] = RatInterval(0)
            m[r] = [x.round_out(round_bits) for x in m[r]]
    out = [RatInterval(0)] * n
    for col in range(n - 1, -1, -1):
        acc = m[col][n]
        for c in range(col + 1, n):
            acc = acc - m[col][c] * out[c]
        out[col] = (acc / m[col][col]).round_out(round_bits)
    return out


def _eval_rows_interval(rows, consts, t_iv: RatInterval, round_bits: int):
    a = [[eval_poly_interval(e.coeffs, t_iv).round_out(round_bits) for e in row]
         for row in rows]
    b = [(-eval_poly_interval(c.coeffs, t_iv)).round_out(round_bits) for c in consts]
    return a, b


# ---------------------------------------------------------------------------
# Moment recovery per back-end.
# ---------------------------------------------------------------------------

def _moments_linear_square(system: ReducedSystem, t_iv: RatInterval,
                           round_bits: int) -> list[RatInterval]:
    rows, consts = _linear_rows(system)
    a, b = _eval_rows_interval(rows, consts, t_iv, round_bits)
    return interval_solve(a, b, round_bits)


def _moments_region1(system: ReducedSystem, t_iv: RatInterval,
                     round_bits: int) -> list[RatInterval]:
    rows, consts = _linear_rows(system)
    names = system.moment_names
    if not names:
        return []
    mid = t_iv.mid
    a_mid = [[e.evaluate(mid) for e in row] for row in rows]
    rank, prows, _ = _rat_rank_pivots(a_mid)
    if rank < len(names):
        raise ZeroDivisionError("linear part rank-deficient at midpoint")
    sel = sorted(prows[:len(names)])
    a, b = _eval_rows_interval([rows[i] for i in sel],
                               [consts[i] for i in sel], t_iv, round_bits)
    return interval_solve(a, b, round_bits)


def _moments_q4(system: ReducedSystem, collapse: CramerCollapse,
                t_iv: RatInterval, round_bits: int) -> list[list[RatInterval]]:
    """Both quadratic-formula branches; the driver keeps whichever candidate
    survives the full residual check (the branch pair is exhaustive)."""
    a1, b1, c1 = (eval_poly_interval(p.coeffs, t_iv) for p in collapse.quad1)
    disc = (b1 * b1 - 4 * a1 * c1).round_out(2 * round_bits)
    if disc.hi < 0:
        raise SpuriousRoot("first collapsed quadric has no real root")
    sq = disc.sqrt(round_bits)
    den = 2 * a1
    if den.contains_zero():
        raise ZeroDivisionError("leading quadric coefficient straddles zero")
    dval = eval_poly_interval(collapse.denominator.coeffs, t_iv)
    if dval.contains_zero():
        raise ZeroDivisionError("Cramer denominator straddles zero")
    candidates = []
    for x1 in (((-b1 + sq) / den).round_out(round_bits),
               ((-b1 - sq) / den).round_out(round_bits)):
        vec = [x1]
        for num, slope in zip(collapse.numerators, collapse.slopes):
            val = (eval_poly_interval(num.coeffs, t_iv)
                   + eval_poly_interval(slope.coeffs, t_iv) * x1) / dval
            vec.append(val.round_out(round_bits))
        candidates.append(vec)
    return candidates


def _moments_dixon_kernel(system: ReducedSystem, elim: EliminationResult,
                          t_iv: RatInterval, round_bits: int) -> list[RatInterval]:
    """The transpose-kernel route: at a root, the chosen square submatrix
    drops rank and the kernel vector, scaled to 1 at the constant-monomial
    row, lists the unknown moment values."""
    dix = elim.dixon
    if dix is None:
        raise EliminationFailure("no stored decomposition for kernel recovery")
    names = system.moment_names
    nv = len(names)
    one_exp = tuple([0] * nv)
    unit_exps = [_unit(nv, i) for i in range(nv)]
    row_pos = {exp: i for i, exp in enumerate(dix.chosen_rows)}
    monomial_pos = {}
    for exp in [one_exp] + unit_exps:
        idx = dix.row_monomials.index(exp)
        if idx not in row_pos:
            raise EliminationFailure("monomial row missing from the square submatrix")
        monomial_pos[exp] = row_pos[idx]
    sub = dix.coeff_matrix.submatrix(dix.chosen_rows, dix.chosen_cols)
    n = sub.rows
    # Solve v^T sub = 0 with v[i0] = 1: transpose system with one column
    # moved to the right-hand side and one equation dropped.
    i0 = monomial_pos[one_exp]
    mid = t_iv.mid
    tr_mid = [[sub[r, c].evaluate(mid) for r in range(n)] for c in range(n)]
    rank, prows, _ = _rat_rank_pivots(tr_mid)
    if rank < n - 1:
        raise ZeroDivisionError("kernel dimension above one at midpoint")
    keep = sorted(prows[:n - 1])
    a = []
    b = []
    for c in keep:
        row = []
        for r in range(n):
            if r == i0:
                continue
            row.append(eval_poly_interval(sub[r, c].coeffs, t_iv).round_out(round_bits))
        a.append(row)
        b.append((-eval_poly_interval(sub[i0, c].coeffs, t_iv)).round_out(round_bits))
    w = interval_solve(a, b, round_bits)
    v = []
    pos = 0
    for r in range(n):
        if r == i0:
            v.append(RatInterval(1))
        else:
            v.append(w[pos])
            pos += 1
    return [v[monomial_pos[e]] for e in unit_exps]


# ---------------------------------------------------------------------------
# Residuals and the driver.
# ---------------------------------------------------------------------------

def extend_moments(params: DesignParams, mats, t_iv: RatInterval,
                   unknowns: list[RatInterval]) -> dict[int, RatInterval]:
    """All moment values m_0 .. m_(2M): powers of t, solved unknowns, closures."""
    L, M = params.L, params.M
    power_top = min(2 * L + 2, L + M)
    values: dict[int, RatInterval] = {0: RatInterval(1)}
    tp = RatInterval(1)
    for k in range(1, power_top + 1):
        tp = tp * t_iv
        values[k] = tp
    for i, k in enumerate(range(power_top + 1, L + M + 1)):
        values[k] = unknowns[i]
    for k in sorted(mats.closure):
        row = mats.closure[k]
        acc = RatInterval(row[0])
        for j in range(1, L + M + 1):
            if row[j]:
                acc = acc + row[j] * values[j]
        values[k] = acc
    return values


def full_system_residuals(params: DesignParams, values: dict[int, RatInterval]
                          ) -> list[RatInterval]:
    out = []
    for _, _, quad in full_system_equations(params):
        acc = RatInterval(0)
        for exp, c in quad.terms.items():
            term = RatInterval(c)
            for i, e in enumerate(exp):
                for _ in range(e):
                    term = term * values[i + 1]
            acc = acc + term
        out.append(acc)
    return out


def back_substitute(elim: EliminationResult, system: ReducedSystem,
                    root: RootInterval, precision_bits: int = 256,
                    max_bits: int = 4096) -> tuple[RootInterval, list[RatInterval]]:
    """Certified moment vector (m_0 .. m_{L+M}) at one root of the stripped
    polynomial, refining the root until the full system's residual
    enclosures are below 2^-(precision_bits - 16)."""
    params = elim.params
    mats = system.mats
    collapse = None
    if elim.backend == "diag_q4":
        collapse = q4_collapse(system)
    bits = precision_bits
    residual_bound = Fraction(1, 1 << max(precision_bits - 16, 8))
    width_bound = Fraction(1, 1 << precision_bits)
    lo, hi = root.lo, root.hi
    while bits <= max_bits:
        lo, hi = refine_interval(elim.stripped, lo, hi, Fraction(1, 1 << bits))
        t_iv = RatInterval(lo, hi)
        try:
            if elim.backend == "diag_q3":
                candidates = [_moments_linear_square(system, t_iv, bits + 64)]
            elif elim.backend == "region1_linear":
                candidates = [_moments_region1(system, t_iv, bits + 64)]
            elif elim.backend == "diag_q4":
                candidates = _moments_q4(system, collapse, t_iv, bits + 64)
            else:
                candidates = [_moments_dixon_kernel(system, elim, t_iv, bits + 64)]
        except ZeroDivisionError:
            bits *= 2
            continue
        alive = 0
        for unknowns in candidates:
            values = extend_moments(params, mats, t_iv, unknowns)
            residuals = full_system_residuals(params, values)
            if any(not r.contains_zero() for r in residuals):
                continue  # provably not a solution (this branch)
            alive += 1
            if all(r.mag() <= residual_bound for r in residuals) and \
                    all(u.width <= width_bound for u in unknowns):
                refined = RootInterval(lo, hi, root.multiplicity)
                return refined, [values[k] for k in range(params.L + params.M + 1)]
        if alive == 0:
            raise SpuriousRoot(
                f"residual excludes zero at root near {fraction_to_decimal(t_iv.mid, 12)}")
        bits *= 2
    raise SpuriousRoot("residuals did not certify below the bound")


def recover_coefficients(moments: list[RatInterval], mats) -> list[RatInterval]:
    """h = T (QT)^{-1} m, with an exact divisibility check by (1 + z^-1)^K."""
    params = mats.params
    width = params.L + params.M + 1
    if len(moments) != width:
        raise VerificationFailure("moment vector has wrong length")
    qtm = []
    for i in range(width):
        acc = RatInterval(0)
        for j in range(width):
            c = mats.qt_inverse[i][j]
            if c:
                acc = acc + c * moments[j]
        qtm.append(acc)
    coeffs = []
    for r in range(params.N):
        acc = RatInterval(0)
        for j in range(width):
            c = mats.T[r][j]
            if c:
                acc = acc + c * qtm[j]
        coeffs.append(acc)
    # Synthetic division by (1 + y)^K, y = z^-1, must leave zero remainders.
    rem = list(coeffs)
    for _ in range(params.K):
        new = []
        carry = RatInterval(0)
        for c in rem[:-1]:
            carry = c - carry
            new.append(carry)
        tail = rem[-1] - carry
        if not tail.contains_zero():
            raise VerificationFailure("tap vector not divisible by (1+z^-1)^K")
        rem = new
    return coeffs


def magnitude_response(coeffs: list[Fraction], n_samples: int = 512,
                       precision_bits: int = 256) -> list[tuple]:
    """Samples of |H(e^{i w})|^2 at n_samples points spanning [0, pi]."""
    if n_samples < 2:
        raise VerificationFailure("need at least two samples")
    with mpmath.workprec(precision_bits):
        hs = [mpmath.mpf(c.numerator) / c.denominator for c in coeffs]
        out = []
        for i in range(n_samples):
            w = mpmath.pi * i / (n_samples - 1)
            re = mpmath.mpf(0)
            im = mpmath.mpf(0)
            for n, h in enumerate(hs):
                re += h * mpmath.cos(n * w)
                im += h * mpmath.sin(n * w)
            out.append((w, re * re + im * im))
    return out


def classify_response(samples: list[tuple]) -> str:
    """Count strict sign changes of successive differences."""
    if len(samples) < 64:
        raise VerificationFailure("need at least 64 samples to classify")
    changes = 0
    prev = 0
    for (_, a), (_, b) in zip(samples, samples[1:]):
        d = b - a
        if d == 0:
            continue
        s = 1 if d > 0 else -1
        if prev and s != prev:
            changes += 1
        prev = s
    if changes == 0:
        return "monotone"
    if changes == 1:
        return "one_extremum"
    return "multi_extremum"


def solve_filters(elim: EliminationResult, precision_bits: int = 256,
                  samples: int = 512) -> list[FilterSolution]:
    """Back-substitute every real root of the stripped polynomial."""
    params = elim.params
    system = reduce_system(params)
    roots = sturm_real_roots(elim.stripped, 64)
    partners = pair_roots(roots, params)
    digits = max(12, precision_bits * 3 // 20)
    out = []
    for i, root in enumerate(roots):
        refined, moments = back_substitute(elim, system, root, precision_bits)
        coeffs = recover_coefficients(moments, system.mats)
        resp = magnitude_response([c.mid for c in coeffs], samples, precision_bits)
        out.append(FilterSolution(
            root=refined,
            t_decimal=fraction_to_decimal(refined.mid, digits),
            moments=moments,
            coeffs=coeffs,
            partner=partners[i],
            response_class=classify_response(resp),
            response=resp,
        ))
    return out
