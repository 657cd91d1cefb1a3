"""Elimination of the moment unknowns down to one polynomial in t.

Four back-ends produce the univariate moment polynomial:

* region1_linear -- all reduced equations are linear; the augmented
  determinant of the (overdetermined by one) linear system is univariate.
* diag_q3 (M = 2L+3) -- signed maximal minors of the linear part are
  substituted into the homogenized quadric; the known square factor from
  the repeated roots of the linear part's determinant is divided out.
* diag_q4 (M = 2L+4) -- Cramer solves the linear part in terms of the
  lowest unknown; the two remaining quadrics collapse (denominators
  cancel) to a pair of univariate-coefficient quadratics whose 4x4
  Sylvester determinant is the answer.
* dixon -- the staggered divided-difference determinant, expanded into
  row-monomials x coefficient matrix x column-monomials; determinants of
  maximal-rank square submatrices are multiples of the resultant, and
  the gcd over independent choices plus an exact inconsistency test on
  half-integer roots strips the extraneous factors.

Every stripped polynomial must be invariant (up to sign) under
t -> (K+L+M) - t; that symmetry is asserted, never assumed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .diffops import multiplicity_excess
from .errors import (DegenerateInput, DivisionError, EliminationFailure,
                     ParamError, VerificationFailure)
from .exactalg import MultiPoly, PolyMatrix, UniPoly, poly_gcd, squarefree_part
from .exactalg.polymatrix import _int_rank_pivots, _rat_rank_pivots
from .system import (DesignParams, ReducedSystem, build_moment_matrices,
                     delay_quadric, magnitude_quadric, moment_images,
                     reduce_system, time_reverse_poly)


@dataclass(frozen=True)
class EliminationResult:
    params: DesignParams
    raw: UniPoly
    stripped: UniPoly
    removed_factors: tuple  # (UniPoly, reason) pairs
    backend: str
    dixon: "DixonDecomposition | None" = None

    @property
    def degree(self) -> int:
        return self.stripped.degree


# ---------------------------------------------------------------------------
# Equation bookkeeping: a reduced equation as {moment exponents -> UniPoly(t)}.
# ---------------------------------------------------------------------------

def _eq_parts(eq: MultiPoly, names: Sequence[str]) -> dict[tuple, UniPoly]:
    idx = [eq.variables.index(n) for n in names]
    ti = eq.variables.index("t")
    buckets: dict[tuple, dict[int, Fraction]] = {}
    for exp, c in eq.terms.items():
        mexp = tuple(exp[i] for i in idx)
        buckets.setdefault(mexp, {})[exp[ti]] = c
    out = {}
    for mexp, coeffs in buckets.items():
        lst = [Fraction(0)] * (max(coeffs) + 1)
        for d, c in coeffs.items():
            lst[d] = c
        out[mexp] = UniPoly(lst)
    return out


def _unit(n: int, i: int) -> tuple:
    e = [0] * n
    e[i] = 1
    return tuple(e)


def _linear_rows(system: ReducedSystem) -> tuple[list[list[UniPoly]], list[UniPoly]]:
    """Coefficient rows and constant parts of the linear subsystem."""
    linear, _ = system.split_linear()
    names = system.moment_names
    n = len(names)
    rows, consts = [], []
    for eq in linear:
        parts = _eq_parts(eq, names)
        row = [parts.get(_unit(n, j), UniPoly.zero()) for j in range(n)]
        const = parts.get((0,) * n, UniPoly.zero())
        if any(sum(me) > 1 for me in parts):
            raise DegenerateInput("nonlinear term in linear subsystem")
        rows.append(row)
        consts.append(const)
    return rows, consts


def linear_subsystem_inconsistent(system: ReducedSystem, t0: Fraction) -> bool:
    """Exact rank test: coefficient rank < augmented rank at t = t0."""
    rows, consts = _linear_rows(system)
    if not rows:
        return False
    a = [[e.evaluate(t0) for e in row] for row in rows]
    aug = [row + [-c.evaluate(t0)] for row, c in zip(a, consts)]
    ra, _, _ = _rat_rank_pivots(a)
    raug, _, _ = _rat_rank_pivots(aug)
    return ra < raug


def _solve_parametric(a: list[list[Fraction]], b: list[Fraction]
                      ) -> tuple[list[Fraction], list[list[Fraction]]] | None:
    """General solution of a rational linear system, or None if inconsistent.

    Returns (particular solution, nullspace basis vectors).
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [a[r][:] + [b[r]] for r in range(rows)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(cols):
        piv = None
        for rr in range(r, rows):
            if m[rr][c] != 0:
                piv = rr
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for rr in range(rows):
            if rr != r and m[rr][c] != 0:
                f = m[rr][c]
                m[rr] = [x - f * y for x, y in zip(m[rr], m[r])]
        pivots.append((r, c))
        r += 1
        if r == rows:
            break
    for rr in range(r, rows):
        if m[rr][cols] != 0:
            return None
    pivot_cols = {c for _, c in pivots}
    free_cols = [c for c in range(cols) if c not in pivot_cols]
    particular = [Fraction(0)] * cols
    for rr, c in pivots:
        particular[c] = m[rr][cols]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * cols
        vec[fc] = Fraction(1)
        for rr, c in pivots:
            vec[c] = -m[rr][fc]
        basis.append(vec)
    return particular, basis


def _no_common_root(polys: list[MultiPoly], variables: tuple[str, ...]) -> bool:
    """True only when the system provably has no common complex root.

    Proof by an iterated-resultant cascade: every common root of the
    system is a common root of the pairwise resultants, so a cascade
    bottoming out in a nonzero constant is a contradiction.  Returns
    False whenever the cascade is inconclusive.
    """
    polys = [p for p in polys if not p.is_zero]
    if not polys:
        return False
    for p in polys:
        if p.total_degree_in(variables) == 0:
            return True  # nonzero constant equation
    active = [v for v in variables if any(p.degree_in(v) > 0 for p in polys)]
    if not active:
        return False
    if len(active) == 1:
        v = active[0]
        g = None
        for p in polys:
            u = p.to_unipoly(v)
            g = u.monic() if g is None else poly_gcd(g, u)
            if g.degree == 0:
                return True
        return False
    v = active[-1]
    with_v = [p for p in polys if p.degree_in(v) > 0]
    without_v = [p for p in polys if p.degree_in(v) == 0]
    if len(with_v) < 2:
        return False  # cannot eliminate v conclusively
    base = min(with_v, key=lambda p: p.degree_in(v))
    nxt = list(without_v)
    for p in with_v:
        if p is base:
            continue
        nxt.append(sylvester_resultant(p, base, v))
    return _no_common_root(nxt, variables)


def reduced_system_insolvable_at(system: ReducedSystem, t0: Fraction) -> bool:
    """Exact, one-sided test that the reduced system has no solution at t = t0.

    Starts from the linear-subsystem rank test; when the linear part is
    consistent, its solution set is parametrized exactly and substituted
    into the quadrics, whose joint insolvability is then proved (or left
    undecided) by the resultant cascade.
    """
    names = system.moment_names
    rows, consts = _linear_rows(system)
    if rows:
        a = [[e.evaluate(t0) for e in row] for row in rows]
        b = [-c.evaluate(t0) for c in consts]
        sol = _solve_parametric(a, b)
        if sol is None:
            return True
        particular, basis = sol
    else:
        particular = [Fraction(0)] * len(names)
        basis = [[Fraction(1) if j == i else Fraction(0) for j in range(len(names))]
                 for i in range(len(names))]
    _, quads = system.split_linear()
    if not quads:
        return False
    wvars = tuple(f"w{i}" for i in range(len(basis)))
    images = []
    for j in range(len(names)):
        acc = MultiPoly.constant(wvars, particular[j])
        for i, vec in enumerate(basis):
            if vec[j]:
                acc = acc + vec[j] * MultiPoly.var(wvars, f"w{i}")
        images.append(acc)
    polys = []
    for q in quads:
        parts = _eq_parts(q, names)
        acc = MultiPoly.zero(wvars)
        for mexp, coeff in parts.items():
            term = MultiPoly.constant(wvars, coeff.evaluate(t0))
            for j, e in enumerate(mexp):
                for _ in range(e):
                    term = term * images[j]
            acc = acc + term
        polys.append(acc)
    return _no_common_root(polys, wvars)


# ---------------------------------------------------------------------------
# Extraneous-factor stripping.
# ---------------------------------------------------------------------------

def strip_extraneous(raw: UniPoly, system: ReducedSystem | None = None,
                     hint: UniPoly | None = None,
                     companion_dets: Sequence[UniPoly] = (),
                     params: DesignParams | None = None,
                     ) -> tuple[UniPoly, tuple]:
    """Remove factors of raw that vanish on no solution of the system.

    Pipeline: exact division by a supplied known factor; gcd against
    determinants of alternative maximal-rank submatrices; exact division
    by (2t - i) factors at half-integers where the linear subsystem is
    inconsistent; final reversal-symmetry assertion.
    """
    if raw.is_zero:
        raise EliminationFailure("zero resultant")
    if params is None:
        if system is None:
            raise ValueError("need params or a reduced system")
        params = system.params
    removed = []
    cur = raw
    if hint is not None and hint.degree > 0:
        cur = cur.exact_div(hint)
        removed.append((hint.monic(), "known_delta_square"))
    for other in companion_dets:
        if other.is_zero:
            continue
        g = poly_gcd(cur, other)
        if g.degree < cur.degree:
            removed.append((cur.exact_div(g).monic(), "submatrix_gcd"))
            cur = g
    rev = params.reversal_sum
    # The correct polynomial is invariant under t -> rev - t, so it divides
    # the gcd with the reflection; factors whose mirror is absent are
    # provably extraneous.
    reflected = time_reverse_poly(cur, params)
    g = poly_gcd(cur, reflected)
    if g.degree < cur.degree:
        removed.append((cur.exact_div(g).monic(), "reflection_gcd"))
        cur = g
    if system is not None:
        for i in range(-2, 2 * rev + 3):
            t0 = Fraction(i, 2)
            if cur.evaluate(t0) != 0:
                continue
            if not reduced_system_insolvable_at(system, t0):
                continue
            factor = UniPoly([-i, 2])
            mult = 0
            while True:
                try:
                    cur = cur.exact_div(factor)
                    mult += 1
                except DivisionError:
                    break
                if cur.evaluate(t0) != 0:
                    break
            removed.append((factor ** mult, "inconsistent_linear_system"))
    cur = cur.primitive()
    if cur.leading < 0:
        cur = -cur
    mirrored = time_reverse_poly(cur, params)
    if mirrored != cur and mirrored != -cur:
        raise EliminationFailure(
            f"stripped polynomial is not reversal-symmetric for {params}")
    return cur, tuple(removed)


# ---------------------------------------------------------------------------
# Sylvester resultants.
# ---------------------------------------------------------------------------

def sylvester_resultant(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Determinant of the Sylvester matrix of p and q with respect to var."""
    if p.variables != q.variables:
        raise ValueError("variable lists differ")
    dp = p.degree_in(var)
    dq = q.degree_in(var)
    if dp <= 0 and dq <= 0:
        raise DegenerateInput("both polynomials constant in " + var)
    zero = MultiPoly.zero(p.variables)
    pc = p.coefficients_in(var)
    qc = q.coefficients_in(var)
    n = dp + dq
    rows = []
    for r in range(dq):
        rows.append([pc.get(dp - (c - r), zero) if 0 <= c - r <= dp else zero
                     for c in range(n)])
    for r in range(dp):
        rows.append([qc.get(dq - (c - r), zero) if 0 <= c - r <= dq else zero
                     for c in range(n)])
    return _det_multipoly(rows)


def _det_multipoly(rows: list[list[MultiPoly]]) -> MultiPoly:
    n = len(rows)
    if n == 0:
        raise DegenerateInput("empty matrix")
    variables = rows[0][0].variables
    minors: dict[tuple, MultiPoly] = {(): MultiPoly.constant(variables, 1)}
    for k in range(1, n + 1):
        nxt: dict[tuple, MultiPoly] = {}
        row = k - 1
        for cols in itertools.combinations(range(n), k):
            acc = MultiPoly.zero(variables)
            for pos, j in enumerate(cols):
                e = rows[row][j]
                if e.is_zero:
                    continue
                term = e * minors[cols[:pos] + cols[pos + 1:]]
                acc = acc + term if (row + pos) % 2 == 0 else acc - term
            nxt[cols] = acc
        minors = nxt
    return minors[tuple(range(n))]


def sylvester_resultant_quadratics(a1: UniPoly, b1: UniPoly, c1: UniPoly,
                                   a2: UniPoly, b2: UniPoly, c2: UniPoly) -> UniPoly:
    """Resultant of two quadratics with UniPoly coefficients (4x4 determinant)."""
    z = UniPoly.zero()
    m = PolyMatrix.from_rows([
        [a1, b1, c1, z],
        [z, a1, b1, c1],
        [a2, b2, c2, z],
        [z, a2, b2, c2],
    ])
    return m.det_fraction_free()


def iterated_sylvester(system: ReducedSystem) -> UniPoly:
    """Naive pairwise elimination of every moment unknown; oracle use only.

    The output is a (generally highly redundant) univariate polynomial
    that the true moment polynomial must divide.
    """
    eqs = list(system.equations)
    variables = system.variables
    for name in reversed(system.moment_names):
        have = [e for e in eqs if e.degree_in(name) > 0]
        keep = [e for e in eqs if e.degree_in(name) <= 0]
        if len(have) >= 2:
            base = have[-1]
            for other in have[:-1]:
                keep.append(sylvester_resultant(other, base, name))
        elif have:
            raise EliminationFailure(f"cannot eliminate {name}: appears once")
        eqs = [e for e in keep if not e.is_zero]
    acc = UniPoly.one()
    for e in eqs:
        acc = acc * e.to_unipoly("t")
    return acc


# ---------------------------------------------------------------------------
# Packed-key polynomials: the fast layer under the Dixon determinant.
# Keys are integers: t in the low T_BITS, then 4 bits per moment variable
# (originals first, then the barred copies).
# ---------------------------------------------------------------------------

_T_BITS = 16
_V_BITS = 4


class _Packing:
    def __init__(self, nvars: int):
        self.nvars = nvars
        self.t_mask = (1 << _T_BITS) - 1
        self.shifts = [_T_BITS + _V_BITS * i for i in range(2 * nvars)]
        self.v_mask = (1 << _V_BITS) - 1

    def pack_eq(self, eq: MultiPoly, names: Sequence[str]) -> dict[int, int]:
        ti = eq.variables.index("t")
        vi = [eq.variables.index(n) for n in names]
        out: dict[int, int] = {}
        for exp, c in eq.terms.items():
            if c.denominator != 1:
                raise DegenerateInput("equation is not integer-primitive")
            key = exp[ti]
            for slot, i in enumerate(vi):
                key |= exp[i] << self.shifts[slot]
            out[key] = out.get(key, 0) + c.numerator
        return {k: v for k, v in out.items() if v}

    def divided_difference(self, p: dict[int, int], slot: int) -> dict[int, int]:
        sh = self.shifts[slot]
        sh_bar = self.shifts[self.nvars + slot]
        mask = self.v_mask << sh
        out: dict[int, int] = {}
        for key, c in p.items():
            e = (key & mask) >> sh
            if e == 0:
                continue
            base = key & ~mask
            for a in range(e):
                k = base | ((e - 1 - a) << sh)
                k += a << sh_bar
                s = out.get(k, 0) + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return out

    def bar(self, p: dict[int, int], slot: int) -> dict[int, int]:
        """Rename variable `slot` to its barred copy."""
        sh = self.shifts[slot]
        sh_bar = self.shifts[self.nvars + slot]
        mask = self.v_mask << sh
        out: dict[int, int] = {}
        for key, c in p.items():
            e = (key & mask) >> sh
            if e:
                key = (key & ~mask) + (e << sh_bar)
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                del out[key]
        return out

    def split_key(self, key: int) -> tuple[int, tuple, tuple]:
        t = key & self.t_mask
        orig = tuple((key >> self.shifts[i]) & self.v_mask
                     for i in range(self.nvars))
        barred = tuple((key >> self.shifts[self.nvars + i]) & self.v_mask
                       for i in range(self.nvars))
        return t, orig, barred


def _pmul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if len(a) < len(b):
        a, b = b, a
    out: dict[int, int] = {}
    get = out.get
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            s = get(k, 0) + ca * cb
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def _padd_scaled(acc: dict[int, int], p: dict[int, int], sign: int) -> None:
    get = acc.get
    if sign > 0:
        for k, c in p.items():
            s = get(k, 0) + c
            if s:
                acc[k] = s
            else:
                del acc[k]
    else:
        for k, c in p.items():
            s = get(k, 0) - c
            if s:
                acc[k] = s
            else:
                del acc[k]


def _packed_det(rows: list[list[dict[int, int]]]) -> dict[int, int]:
    """Column-subset dynamic-programming determinant of packed polynomials.

    Rows are processed lightest-first (fewest terms), which keeps the
    intermediate minors small; the row permutation's parity is folded in.
    """
    n = len(rows)
    weight = [(sum(len(e) for e in row), i) for i, row in enumerate(rows)]
    order = [i for _, i in sorted(weight)]
    parity = _permutation_sign(order)
    minors: dict[tuple, dict[int, int]] = {(): {0: parity}}
    for level in range(1, n + 1):
        row = rows[order[level - 1]]
        nxt: dict[tuple, dict[int, int]] = {}
        for cols in itertools.combinations(range(n), level):
            acc: dict[int, int] = {}
            for pos, j in enumerate(cols):
                e = row[j]
                if not e:
                    continue
                prev = minors[cols[:pos] + cols[pos + 1:]]
                if not prev:
                    continue
                _padd_scaled(acc, _pmul(e, prev), 1 if (level - 1 + pos) % 2 == 0 else -1)
            nxt[cols] = acc
        minors = nxt
    return minors[tuple(range(n))]


def _permutation_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# Dixon decomposition.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DixonDecomposition:
    variables: tuple[str, ...]       # (t, unknowns...)
    row_monomials: tuple             # exponent tuples over the unknowns
    coeff_matrix: PolyMatrix
    col_monomials: tuple             # exponent tuples over the barred copies
    rank: int
    chosen_rows: tuple
    chosen_cols: tuple

    def monomial_row_index(self, exp: tuple) -> int:
        return self.row_monomials.index(exp)


def dixon_matrix(variables: Sequence[str], equations: Sequence[MultiPoly]
                 ) -> tuple[tuple, PolyMatrix, tuple]:
    """Expand the staggered divided-difference determinant as R * M * C.

    `variables` is (t, x_1, ..., x_v) with len(equations) == v + 1; the
    j-th row of the inner determinant is equation j followed by its
    successive divided differences, barring one variable at a time.
    """
    names = list(variables[1:])
    nv = len(names)
    if len(equations) != nv + 1:
        raise DegenerateInput("need one more equation than hidden unknowns")
    pk = _Packing(nv)
    rows = []
    for eq in equations:
        cur = pk.pack_eq(eq, names)
        row = [cur]
        for slot in range(nv):
            row.append(pk.divided_difference(cur, slot))
            cur = pk.bar(cur, slot)
        rows.append(row)
    delta = _packed_det(rows)
    buckets: dict[tuple, dict[tuple, dict[int, int]]] = {}
    for key, c in delta.items():
        t, orig, barred = pk.split_key(key)
        buckets.setdefault(orig, {}).setdefault(barred, {})[t] = c
    row_monos = tuple(sorted(buckets))
    col_set = set()
    for sub in buckets.values():
        col_set.update(sub)
    col_monos = tuple(sorted(col_set))
    entries = []
    for rm in row_monos:
        sub = buckets[rm]
        for cm in col_monos:
            coeffs = sub.get(cm)
            if not coeffs:
                entries.append(UniPoly.zero())
                continue
            lst = [0] * (max(coeffs) + 1)
            for d, c in coeffs.items():
                lst[d] = c
            entries.append(UniPoly.from_int_coeffs(lst))
    matrix = PolyMatrix(len(row_monos), len(col_monos), entries)
    return row_monos, matrix, col_monos


def dixon_decompose(system: ReducedSystem, seed: int = 0,
                    verify: bool = False) -> DixonDecomposition:
    return dixon_decompose_raw(system.variables, system.equations, seed, verify)


def dixon_decompose_raw(variables: Sequence[str], equations: Sequence[MultiPoly],
                        seed: int = 0, verify: bool = False) -> DixonDecomposition:
    row_monos, matrix, col_monos = dixon_matrix(variables, equations)
    nv = len(variables) - 1
    preferred = []
    wanted = [tuple([0] * nv)] + [_unit(nv, i) for i in range(nv)]
    for w in wanted:
        if w in row_monos:
            preferred.append(row_monos.index(w))
    rank, rows, cols = matrix.generic_rank_with_pivots(
        seed, preferred_rows=preferred, verify=verify)
    if rank == 0:
        raise EliminationFailure("Dixon matrix has rank zero")
    return DixonDecomposition(
        variables=tuple(variables), row_monomials=row_monos,
        coeff_matrix=matrix, col_monomials=col_monos,
        rank=rank, chosen_rows=tuple(rows), chosen_cols=tuple(cols))


def _alternate_submatrix(dix: DixonDecomposition, rng: random.Random,
                         avoid: set) -> tuple[tuple, tuple] | None:
    """Another maximal-rank submatrix, distinct from those already used."""
    n_rows = dix.coeff_matrix.rows
    for _ in range(8):
        x = rng.randint(10**4, 10**6)
        order = list(range(n_rows))
        rng.shuffle(order)
        r, rows, cols = _int_rank_pivots(dix.coeff_matrix.evaluate_int_rows(x), order)
        if r != dix.rank:
            continue
        key = (tuple(sorted(rows)), tuple(sorted(cols)))
        if key not in avoid:
            return key
    return None


def solve_dixon(params: DesignParams, seed: int = 0,
                max_companions: int = 6) -> EliminationResult:
    """Dixon back-end: gcd over independent maximal-rank submatrix
    determinants (pulled in until the gcd stabilizes), then the
    half-integer inconsistency strip and the symmetry gate."""
    system = reduce_system(params)
    raw = UniPoly.zero()
    for bump in range(4):
        dix = dixon_decompose(system, seed + bump)
        main = dix.coeff_matrix.submatrix(dix.chosen_rows, dix.chosen_cols)
        raw = main.det_interpolated()
        if not raw.is_zero:
            break
    if raw.is_zero:
        raise EliminationFailure("maximal-rank submatrix has zero determinant")
    rng = random.Random(seed ^ 0x5EED)
    used = {(dix.chosen_rows, dix.chosen_cols)}
    companions: list[UniPoly] = []
    g = raw.monic()
    while len(companions) < max_companions:
        alt = _alternate_submatrix(dix, rng, used)
        if alt is None:
            break
        used.add(alt)
        det_k = dix.coeff_matrix.submatrix(alt[0], alt[1]).det_interpolated()
        if det_k.is_zero:
            continue
        companions.append(det_k)
        g_next = poly_gcd(g, det_k)
        if len(companions) >= 2 and g_next.degree == g.degree:
            g = g_next
            break
        g = g_next
    stripped, removed = strip_extraneous(raw, system, companion_dets=companions)
    return EliminationResult(params=params, raw=raw, stripped=stripped,
                             removed_factors=removed, backend="dixon", dixon=dix)


# ---------------------------------------------------------------------------
# The M = 2L+3 diagonal: linear minors into the homogenized quadric.
# ---------------------------------------------------------------------------

def res_linear_quadric(aug_rows: list[list[UniPoly]], quad: MultiPoly,
                       names: Sequence[str]) -> UniPoly:
    """Resultant of (linear system | quadric): substitute the signed maximal
    minors of the augmented matrix into the quadric homogenized by z.

    aug_rows is the (n) x (n+1) augmented matrix [coefficients | constant]
    of the linear equations; names are the moment unknowns in column order.
    """
    n = len(aug_rows)
    if any(len(r) != n + 1 for r in aug_rows):
        raise DegenerateInput("augmented matrix must have one extra column")
    minors = []
    for drop in range(n + 1):
        cols = [c for c in range(n + 1) if c != drop]
        sub = PolyMatrix.from_rows([[row[c] for c in cols] for row in aug_rows])
        d = sub.det()
        minors.append(d if drop % 2 == 0 else -d)
    if all(m.is_zero for m in minors):
        raise EliminationFailure("all maximal minors vanish")
    parts = _eq_parts(quad, names)
    nn = len(names)
    acc = UniPoly.zero()
    z = minors[nn]
    for mexp, coeff in parts.items():
        total = sum(mexp)
        if total > 2:
            raise DegenerateInput("quadric has degree above two")
        term = coeff
        for i, e in enumerate(mexp):
            for _ in range(e):
                term = term * minors[i]
        for _ in range(2 - total):
            term = term * z
        acc = acc + term
    return acc


def solve_diagonal_q3(params: DesignParams, seed: int = 0) -> EliminationResult:
    K, L, M = params.K, params.L, params.M
    if M != 2 * L + 3:
        raise ParamError("this pipeline needs M = 2L + 3")
    system = reduce_system(params)
    rows, consts = _linear_rows(system)
    if len(rows) != L + 1:
        raise VerificationFailure("unexpected linear-part shape")
    aug = [row + [const] for row, const in zip(rows, consts)]
    _, quads = system.split_linear()
    if len(quads) != 1:
        raise VerificationFailure("expected a single quadric")
    raw = res_linear_quadric(aug, quads[0], system.moment_names)
    excess = multiplicity_excess(L, K)
    stripped, removed = strip_extraneous(raw, system, hint=excess * excess)
    if stripped.degree != 8 * L + 8:
        raise VerificationFailure(
            f"degree {stripped.degree} != {8 * L + 8} on the M=2L+3 diagonal")
    return EliminationResult(params=params, raw=raw, stripped=stripped,
                             removed_factors=removed, backend="diag_q3")


# ---------------------------------------------------------------------------
# The M = 2L+4 diagonal: Cramer substitution and a 4x4 Sylvester resultant.
# ---------------------------------------------------------------------------

def _x1_quadratic_parts(eq: MultiPoly, names: Sequence[str]) -> dict[tuple, UniPoly]:
    parts = _eq_parts(eq, names)
    for mexp in parts:
        if sum(mexp) > 2:
            raise DegenerateInput("equation degree above two in the unknowns")
    return parts


@dataclass(frozen=True)
class CramerCollapse:
    """Cramer data for the M = 2L+4 pipeline: the trailing unknowns are
    (numerator + slope * x1) / denominator, and the two leftover quadrics
    collapse to univariate-coefficient quadratics in x1."""

    denominator: UniPoly
    numerators: tuple          # per trailing unknown
    slopes: tuple              # per trailing unknown
    quad1: tuple               # (a, b, c) with a x1^2 + b x1 + c = 0
    quad2: tuple


def q4_collapse(system: ReducedSystem) -> CramerCollapse:
    names = system.moment_names            # m_{2L+3} .. m_{3L+4}
    rest = names[1:]
    rows, consts = _linear_rows(system)
    if len(rows) != len(rest):
        raise VerificationFailure("unexpected linear-part shape")
    nn = len(names)
    # Coefficient matrix over the trailing unknowns; x1 terms go right.
    cmat = PolyMatrix.from_rows([row[1:] for row in rows])
    d = cmat.det()
    if d.is_zero:
        raise EliminationFailure("linear part is singular over Q(t)")
    rhs_const = [-c for c in consts]
    rhs_x1 = [-row[0] for row in rows]
    n_col, p_col = [], []
    for j in range(len(rest)):
        def col_replaced(vec):
            return PolyMatrix.from_rows(
                [[vec[i] if c == j else rows[i][1 + c] for c in range(len(rest))]
                 for i in range(len(rows))]).det()
        n_col.append(col_replaced(rhs_const))
        p_col.append(col_replaced(rhs_x1))

    def collapse(eq: MultiPoly, power: int) -> tuple[UniPoly, UniPoly, UniPoly]:
        """Coefficients in x1 of eq * d^power after Cramer substitution."""
        parts = _x1_quadratic_parts(eq, names)
        out = [UniPoly.zero(), UniPoly.zero(), UniPoly.zero()]
        for mexp, coeff in parts.items():
            e1 = mexp[0]
            rest_idx = [j for j in range(1, nn) for _ in range(mexp[j])]
            # term = coeff * x1^e1 * prod (N_j + P_j x1) * d^(power - len(rest_idx))
            polys = [(coeff, e1)]
            for j in rest_idx:
                nj, pj = n_col[j - 1], p_col[j - 1]
                polys = [(base * nj, deg) for base, deg in polys] + \
                        [(base * pj, deg + 1) for base, deg in polys]
            scale = d ** (power - len(rest_idx))
            for base, deg in polys:
                if deg > 2:
                    raise VerificationFailure("substitution degree above two")
                out[deg] = out[deg] + base * scale
        return out[0], out[1], out[2]

    _, quads = system.split_linear()
    if len(quads) != 2:
        raise VerificationFailure("expected exactly two quadrics")
    e0, e1, e2 = collapse(quads[0], 1)
    try:
        quad1 = (e2.exact_div(d), e1.exact_div(d), e0.exact_div(d))
    except DivisionError as exc:
        raise VerificationFailure(f"denominator cancellation failed: {exc}") from exc
    f0, f1, f2 = collapse(quads[1], 2)
    sf = squarefree_part(d)
    d2 = d * d
    try:
        quad2 = ((f2 * sf).exact_div(d2), (f1 * sf).exact_div(d2),
                 (f0 * sf).exact_div(d2))
    except DivisionError as exc:
        raise VerificationFailure(f"denominator cancellation failed: {exc}") from exc
    return CramerCollapse(denominator=d, numerators=tuple(n_col),
                          slopes=tuple(p_col), quad1=quad1, quad2=quad2)


def solve_diagonal_q4(params: DesignParams, seed: int = 0) -> EliminationResult:
    K, L, M = params.K, params.L, params.M
    if M != 2 * L + 4 or L < 1:
        raise ParamError("this pipeline needs M = 2L + 4 with L >= 1")
    system = reduce_system(params)
    col = q4_collapse(system)
    raw = sylvester_resultant_quadratics(*col.quad1, *col.quad2)
    stripped, removed = strip_extraneous(raw, system)
    if stripped.degree != 12 * L + 14:
        raise VerificationFailure(
            f"degree {stripped.degree} != {12 * L + 14} on the M=2L+4 diagonal")
    return EliminationResult(params=params, raw=raw, stripped=stripped,
                             removed_factors=removed, backend="diag_q4")


# ---------------------------------------------------------------------------
# Region I: pure linear algebra.
# ---------------------------------------------------------------------------

def solve_region1(params: DesignParams, seed: int = 0) -> EliminationResult:
    K, L, M = params.K, params.L, params.M
    if params.region != "I":
        raise ParamError("parameters are not in the linear region")
    if M >= L + 2:
        system = reduce_system(params)
        rows, consts = _linear_rows(system)
        if len(rows) != len(system.moment_names) + 1:
            raise VerificationFailure("region-I system is not overdetermined by one")
        aug = PolyMatrix.from_rows(
            [row + [const] for row, const in zip(rows, consts)])
        raw = aug.det()
        stripped, removed = strip_extraneous(raw, system)
    else:
        # M = L or M = L+1: every unknown is closed; one consistency equation.
        mats = build_moment_matrices(params)
        variables = ("t",)
        images = moment_images(params, mats, variables)
        quad = magnitude_quadric(L + 1) if M == L + 1 else delay_quadric(L)
        mapping = {v: images[int(v[1:])] for v in quad.variables}
        raw = quad.substitute(mapping, variables).to_unipoly("t")
        stripped, removed = strip_extraneous(raw, None, params=params)
    if stripped.is_zero or stripped.degree < 0:
        raise EliminationFailure("empty consistency polynomial")
    return EliminationResult(params=params, raw=raw, stripped=stripped,
                             removed_factors=removed, backend="region1_linear")


# ---------------------------------------------------------------------------
# Back-end selection.
# ---------------------------------------------------------------------------

def select_backend(params: DesignParams) -> str:
    q = params.M - 2 * params.L
    if params.region == "I":
        return "region1_linear"
    if q == 3:
        return "diag_q3"
    if q == 4 and params.L >= 1:
        return "diag_q4"
    return "dixon"


def eliminate(params: DesignParams, seed: int = 0,
              backend: str | None = None) -> EliminationResult:
    backend = backend or select_backend(params)
    if backend == "region1_linear":
        return solve_region1(params, seed)
    if backend == "diag_q3":
        return solve_diagonal_q3(params, seed)
    if backend == "diag_q4":
        return solve_diagonal_q4(params, seed)
    if backend == "dixon":
        return solve_dixon(params, seed)
    raise ParamError(f"unknown backend {backend!r}")
