"""Matrices with univariate-polynomial entries, plus exact rational linear algebra.

Determinants are computed fraction-free: rows are scaled to integer
coefficients, then single-step (Bareiss) elimination keeps every
intermediate entry a true minor, avoiding rational-function blowup.
A cofactor expansion and an evaluation/interpolation determinant are
provided as independent routes for cross-checking and for large sparse
matrices respectively.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import DegenerateInput, DivisionError, ShapeError
from .unipoly import UniPoly, _zstrip, poly_gcd


def _zmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _zstrip(out)


def _zsub(a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] -= c
    return _zstrip(out)


def _zdivexact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Exact quotient in Z[t]; raises DivisionError if not exact."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return []
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    dq = len(rem) - 1 - db
    if dq < 0:
        raise DivisionError("degree too small for exact division")
    quot = [0] * (dq + 1)
    for k in range(dq, -1, -1):
        c = rem[k + db]
        if c == 0:
            continue
        q, r = divmod(c, lead)
        if r:
            raise DivisionError("non-integer quotient coefficient")
        quot[k] = q
        for i in range(db + 1):
            rem[k + i] -= q * b[i]
    if any(rem):
        raise DivisionError("nonzero remainder in exact division")
    return _zstrip(quot)


class PolyMatrix:
    """Rectangular matrix of UniPoly entries, row-major and immutable."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = [e if isinstance(e, UniPoly) else UniPoly.constant(e)
                   for e in entries]
        if len(entries) != rows * cols:
            raise ShapeError(f"{rows}x{cols} matrix needs {rows * cols} entries")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(entries))

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    def __reduce__(self):
        return (PolyMatrix, (self.rows, self.cols, self.entries))

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "PolyMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ShapeError("ragged rows")
        return PolyMatrix(r, c, [e for row in rows for e in row])

    @staticmethod
    def identity(n: int) -> "PolyMatrix":
        return PolyMatrix(n, n, [UniPoly.one() if i == j else UniPoly.zero()
                                 for i in range(n) for j in range(n)])

    def __getitem__(self, rc) -> UniPoly:
        r, c = rc
        return self.entries[r * self.cols + c]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def row(self, r: int) -> tuple[UniPoly, ...]:
        return self.entries[r * self.cols:(r + 1) * self.cols]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(len(rows), len(cols),
                          [self[r, c] for r in rows for c in cols])

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.cols, self.rows,
                          [self[r, c] for c in range(self.cols) for r in range(self.rows)])

    def evaluate(self, x: Fraction) -> list[list[Fraction]]:
        return [[self[r, c].evaluate(x) for c in range(self.cols)]
                for r in range(self.rows)]

    def max_degree(self) -> int:
        return max((e.degree for e in self.entries), default=-1)

    # -- determinants -------------------------------------------------------

    def _int_rows(self) -> tuple[list[list[list[int]]], Fraction]:
        """Rows as integer coefficient lists plus the accumulated scale:
        det(int matrix) = scale * det(self)."""
        mat = []
        scale = Fraction(1)
        for r in range(self.rows):
            den = 1
            for c in range(self.cols):
                for coef in self[r, c].coeffs:
                    den = den * coef.denominator // math.gcd(den, coef.denominator)
            scale *= den
            mat.append([[int(coef * den) for coef in self[r, c].coeffs]
                        for c in range(self.cols)])
        return mat, scale

    def det_fraction_free(self) -> UniPoly:
        """Exact determinant via single-step fraction-free elimination."""
        if self.rows != self.cols:
            raise ShapeError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return UniPoly.one()
        if n == 1:
            return self[0, 0]
        mat, scale = self._int_rows()
        sign = 1
        prev: list[int] = [1]
        for k in range(n - 1):
            if not mat[k][k]:
                for i in range(k + 1, n):
                    if mat[i][k]:
                        mat[k], mat[i] = mat[i], mat[k]
                        sign = -sign
                        break
                else:
                    return UniPoly.zero()
            piv = mat[k][k]
            for i in range(k + 1, n):
                rik = mat[i][k]
                for j in range(k + 1, n):
                    num = _zsub(_zmul(piv, mat[i][j]), _zmul(rik, mat[k][j]))
                    mat[i][j] = _zdivexact(num, prev) if prev != [1] else num
                mat[i][k] = []
            prev = piv
        det = UniPoly.from_int_coeffs(mat[n - 1][n - 1])
        if sign < 0:
            det = -det
        return det / scale

    def det_cofactor(self) -> UniPoly:
        """Laplace expansion with shared minors, for cross-checks and n <= 4."""
        if self.rows != self.cols:
            raise ShapeError("determinant of a non-square matrix")
        n = self.rows
        minors: dict[tuple, UniPoly] = {(): UniPoly.one()}
        for k in range(1, n + 1):
            nxt: dict[tuple, UniPoly] = {}
            row = k - 1
            for cols in itertools.combinations(range(n), k):
                acc = UniPoly.zero()
                for pos, j in enumerate(cols):
                    e = self[row, j]
                    if e.is_zero:
                        continue
                    rest = cols[:pos] + cols[pos + 1:]
                    term = e * minors[rest]
                    acc = acc + term if (row + pos) % 2 == 0 else acc - term
                nxt[cols] = acc
            minors = nxt
        return minors[tuple(range(n))]

    def det(self) -> UniPoly:
        """Cofactor for tiny matrices, fraction-free elimination otherwise."""
        if self.rows != self.cols:
            raise ShapeError("determinant of a non-square matrix")
        if self.rows <= 4:
            return self.det_cofactor()
        return self.det_fraction_free()

    def det_degree_bound(self) -> int:
        """Tight Laplace bound on the determinant degree: the maximum over
        permutations of the summed entry degrees (an assignment problem)."""
        n = self.rows
        degs = [[self[r, c].degree for c in range(n)] for r in range(n)]
        return _max_assignment(degs)

    def det_interpolated(self) -> UniPoly:
        """Exact determinant by evaluation at integer nodes + Newton interpolation.

        The node count comes from the assignment-problem degree bound,
        which is rigorous for any Laplace expansion term.
        """
        if self.rows != self.cols:
            raise ShapeError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return UniPoly.one()
        bound = self.det_degree_bound()
        if bound < 0:
            return UniPoly.zero()
        mat, scale = self._int_rows()
        nodes: list[int] = []
        k = 0
        while len(nodes) < bound + 1:
            nodes.append(k)
            if k > 0 and len(nodes) < bound + 1:
                nodes.append(-k)
            k += 1
        values = []
        for x in nodes:
            num = [[_zeval(e, x) for e in row] for row in mat]
            values.append(Fraction(_int_det(num)))
        coeffs = _newton_interpolate(nodes, values)
        return UniPoly(coeffs) / scale

    # -- rank over the rational-function field ------------------------------

    def rank_over_function_field(self, seed: int = 0) -> int:
        rank, _, _ = self.generic_rank_with_pivots(seed)
        return rank

    def evaluate_int_rows(self, x: int) -> list[list[int]]:
        """Evaluation at an integer with rows scaled integral (rank-safe)."""
        out = []
        for r in range(self.rows):
            den = 1
            for c in range(self.cols):
                for coef in self[r, c].coeffs:
                    den = den * coef.denominator // math.gcd(den, coef.denominator)
            row = []
            for c in range(self.cols):
                acc = 0
                for coef in reversed(self[r, c].coeffs):
                    acc = acc * x + int(coef * den)
                row.append(acc)
            out.append(row)
        return out

    def generic_rank_with_pivots(self, seed: int = 0,
                                 preferred_rows: Sequence[int] | None = None,
                                 verify: bool = True,
                                 ) -> tuple[int, list[int], list[int]]:
        """Rank over Q(t) with a witness pivot minor.

        Eliminates exactly at two random integer evaluation points; with
        `verify` the located pivot minor's determinant is recomputed
        symbolically and must be nonzero.  Deterministic for a fixed seed.
        """
        if all(e.is_zero for e in self.entries):
            return 0, [], []
        rng = random.Random(seed)
        attempts = 0
        while True:
            attempts += 1
            if attempts > 8:
                raise DegenerateInput("rank did not stabilize over random points")
            x1 = rng.randint(10**4, 10**6)
            x2 = rng.randint(10**4, 10**6)
            if x1 == x2:
                continue
            r1, rows1, cols1 = _int_rank_pivots(self.evaluate_int_rows(x1), preferred_rows)
            r2, _, _ = _int_rank_pivots(self.evaluate_int_rows(x2), preferred_rows)
            if r1 != r2:
                continue
            rows, cols = sorted(rows1), sorted(cols1)
            if verify:
                minor = self.submatrix(rows, cols)
                d = minor.det_interpolated() if r1 > 8 else minor.det()
                if d.is_zero:
                    continue
            return r1, rows, cols

    # -- Smith normal form --------------------------------------------------

    def smith_normal_form(self) -> list[UniPoly]:
        """Diagonal entries e_1 | e_2 | ... via monic gcds of k x k minors."""
        if self.rows != self.cols:
            raise ShapeError("Smith normal form of a non-square matrix")
        n = self.rows
        out: list[UniPoly] = []
        prev_gcd = UniPoly.one()
        for k in range(1, n + 1):
            g = UniPoly.zero()
            for rows in itertools.combinations(range(n), k):
                for cols in itertools.combinations(range(n), k):
                    d = self.submatrix(rows, cols).det()
                    if d.is_zero:
                        continue
                    g = d.monic() if g.is_zero else poly_gcd(g, d)
                    if g.degree == 0:
                        break
                if g.degree == 0:
                    break
            if g.is_zero:
                out.extend(UniPoly.zero() for _ in range(n - k + 1))
                return out
            out.append(g.exact_div(prev_gcd).monic())
            prev_gcd = g
        return out


def _max_assignment(degrees: list[list[int]]) -> int:
    """Maximum of sum(deg[i][perm(i)]) over permutations; -1 if every
    permutation passes through a zero (degree < 0) entry."""
    n = len(degrees)
    if n == 0:
        return 0
    from scipy.optimize import linear_sum_assignment

    forbidden = -10 ** 9
    cost = [[forbidden if degrees[r][c] < 0 else degrees[r][c]
             for c in range(n)] for r in range(n)]
    rows, cols = linear_sum_assignment(cost, maximize=True)
    total = 0
    for r, c in zip(rows, cols):
        if degrees[r][c] < 0:
            return -1
        total += degrees[r][c]
    return total


def _zeval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _int_det(mat: list[list[int]]) -> int:
    """Bareiss determinant of an integer matrix (mutates its copy)."""
    n = len(mat)
    if n == 0:
        return 1
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = m[k][k]
        for i in range(k + 1, n):
            rik = m[i][k]
            mi = m[i]
            mk = m[k]
            for j in range(k + 1, n):
                mi[j] = (piv * mi[j] - rik * mk[j]) // prev
            mi[k] = 0
        prev = piv
    return sign * m[n - 1][n - 1]


def _newton_interpolate(nodes: Sequence[int], values: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients (ascending) of the interpolating polynomial."""
    n = len(nodes)
    dd = list(values)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - j])
    # Horner over the Newton basis: acc <- acc*(t - x_i) + dd[i].
    acc = [Fraction(0)] * n
    acc[0] = dd[n - 1]
    deg = 0
    for i in range(n - 2, -1, -1):
        x = nodes[i]
        new = [Fraction(0)] * n
        for d in range(deg + 1):
            new[d + 1] += acc[d]
            new[d] -= acc[d] * x
        new[0] += dd[i]
        acc = new
        deg += 1
    return acc


def _int_rank_pivots(mat: list[list[int]],
                     preferred_rows: Sequence[int] | None = None
                     ) -> tuple[int, list[int], list[int]]:
    """Fraction-free elimination rank of an integer matrix with pivot sets.

    Pivot choice is deterministic: preferred rows first, then by index;
    within a row the largest-magnitude eligible entry.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    m = [row[:] for row in mat]
    pref = list(preferred_rows or [])
    pref_set = set(pref)
    order = pref + [r for r in range(rows) if r not in pref_set]
    used_cols: set[int] = set()
    pivoted: set[int] = set()
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    prev = 1
    for r in order:
        best_c = -1
        best = 0
        for c in range(cols):
            if c in used_cols:
                continue
            v = m[r][c]
            if v and (best_c < 0 or abs(v) > abs(best)):
                best_c, best = c, v
        if best_c < 0:
            continue
        pivot_rows.append(r)
        pivot_cols.append(best_c)
        used_cols.add(best_c)
        pivoted.add(r)
        # Single-step fraction-free update of every non-pivoted row; the
        # division by the previous pivot is exact (these are true minors).
        for rr in range(rows):
            if rr in pivoted:
                continue
            f = m[rr][best_c]
            mrr = m[rr]
            mr = m[r]
            for c in range(cols):
                if c not in used_cols:
                    mrr[c] = (best * mrr[c] - f * mr[c]) // prev
            mrr[best_c] = 0
        prev = best
    return len(pivot_rows), pivot_rows, pivot_cols


def _rat_rank_pivots(mat: list[list[Fraction]],
                     preferred_rows: Sequence[int] | None = None
                     ) -> tuple[int, list[int], list[int]]:
    """Gaussian elimination rank with the pivot row/column sets used.

    Pivot choice is deterministic: preferred rows first (in order), then
    the remaining rows by index; within a row the largest-magnitude entry.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    m = [row[:] for row in mat]
    pref = list(preferred_rows or [])
    pref_set = set(pref)
    order = pref + [r for r in range(rows) if r not in pref_set]
    used_cols: set[int] = set()
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    for r in order:
        best_c = -1
        best = Fraction(0)
        for c in range(cols):
            if c in used_cols:
                continue
            v = m[r][c]
            if v != 0 and (best_c < 0 or abs(v) > abs(best)):
                best_c, best = c, v
        if best_c < 0:
            continue
        pivot_rows.append(r)
        pivot_cols.append(best_c)
        used_cols.add(best_c)
        inv = 1 / best
        for rr in range(rows):
            if rr == r or m[rr][best_c] == 0:
                continue
            f = m[rr][best_c] * inv
            mrr = m[rr]
            mr = m[r]
            for c in range(cols):
                if c not in used_cols:
                    mrr[c] -= f * mr[c]
            mrr[best_c] = Fraction(0)
    return len(pivot_rows), pivot_rows, pivot_cols
