"""Construction of the filter design polynomial systems.

A design is fixed by integers (K, L, M): K zeros of the transfer function
at z = -1, group-delay flatness of order 2L and magnitude flatness of
order 2M at omega = 0.  With the filter moments m_k = sum n^k h[n] as
unknowns the conditions are quadrics in the m_k; moments above index
L + M are linear combinations of the lower ones (the closure), which is
what makes elimination down to a single variable possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InternalError, ParamError
from .exactalg import MultiPoly, UniPoly


@dataclass(frozen=True)
class DesignParams:
    """Filter design parameters; N = K + L + M + 1 taps."""

    K: int
    L: int
    M: int

    def __post_init__(self):
        if self.K < 1:
            raise ParamError("K must be a positive integer")
        if self.L < 0:
            raise ParamError("L must be nonnegative")
        if self.M < 1:
            raise ParamError("M must be a positive integer")
        if self.L > self.M:
            raise ParamError("L must not exceed M")

    @property
    def N(self) -> int:
        return self.K + self.L + self.M + 1

    @property
    def region(self) -> str:
        """'I' when the reduced system is linear, 'II' when it is not."""
        return "I" if (self.M - 1) // 2 <= self.L else "II"

    @property
    def reversal_sum(self) -> int:
        """Time reversal sends t to this value minus t."""
        return self.K + self.L + self.M

    @property
    def center(self) -> Fraction:
        return Fraction(self.reversal_sum, 2)


def _moment_vars(upto: int) -> tuple[str, ...]:
    return tuple(f"m{k}" for k in range(1, upto + 1))


def magnitude_quadric(i: int) -> MultiPoly:
    """Quadric expressing flatness of the squared magnitude at order 2i.

    C(2i,i) m_i^2 + 2 sum_{l<i} C(2i,l) (-1)^(i+l) m_l m_{2i-l}, with m_0 = 1.
    """
    if i < 1:
        raise ParamError("magnitude quadric needs i >= 1")
    variables = _moment_vars(2 * i)
    nv = len(variables)

    def mono(*ks):
        exp = [0] * nv
        for k in ks:
            if k > 0:
                exp[k - 1] += 1
        return tuple(exp)

    terms: dict[tuple, Fraction] = {mono(i, i): Fraction(math.comb(2 * i, i))}
    for l in range(i):
        c = 2 * math.comb(2 * i, l) * (-1) ** (i + l)
        key = mono(l, 2 * i - l)
        terms[key] = terms.get(key, Fraction(0)) + c
    return MultiPoly(variables, terms)


def delay_quadric(j: int) -> MultiPoly:
    """Quadric expressing group-delay flatness at order 2j, content 1.

    sum_{l=0..j} (1 - 2l/(2j+1)) C(2j+1,l) (-1)^l m_l m_{2j+1-l}, m_0 = 1,
    cleared of its rational content.
    """
    if j < 1:
        raise ParamError("delay quadric needs j >= 1")
    variables = _moment_vars(2 * j + 1)
    nv = len(variables)
    terms: dict[tuple, Fraction] = {}
    for l in range(j + 1):
        c = (1 - Fraction(2 * l, 2 * j + 1)) * math.comb(2 * j + 1, l) * (-1) ** l
        exp = [0] * nv
        for k in (l, 2 * j + 1 - l):
            if k > 0:
                exp[k - 1] += 1
        key = tuple(exp)
        terms[key] = terms.get(key, Fraction(0)) + c
    return MultiPoly(variables, terms).primitive()


# ---------------------------------------------------------------------------
# Moment closure: m_k for k > L + M as linear forms in m_0 .. m_{L+M}.
# ---------------------------------------------------------------------------

def _rat_inverse(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            raise InternalError("singular matrix in closure construction")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@dataclass(frozen=True)
class MomentMatrices:
    """Tap/moment transfer matrices and the cached closure rows.

    h = T p writes the length-N tap vector through the K-fold zero at
    z = -1; m = Q h takes moments.  Then h = T (QT)^{-1} m, and any higher
    moment is a power row times that product.
    """

    params: DesignParams
    T: tuple
    Q: tuple
    qt_inverse: tuple
    closure: dict  # k -> row of L+M+1 rationals against (m_0, ..., m_{L+M})

    def closure_row(self, k: int) -> tuple[Fraction, ...]:
        return self.closure[k]

    @property
    def max_closed_index(self) -> int:
        return max(self.closure) if self.closure else self.params.L + self.params.M


@lru_cache(maxsize=None)
def build_moment_matrices(params: DesignParams) -> MomentMatrices:
    K, L, M = params.K, params.L, params.M
    N = params.N
    width = L + M + 1
    T = [[Fraction(math.comb(K, r - c)) if 0 <= r - c <= K else Fraction(0)
          for c in range(N - K)] for r in range(N)]
    Q = [[Fraction(n ** i) for n in range(N)] for i in range(width)]
    QT = [[sum(Q[i][r] * T[r][c] for r in range(N)) for c in range(N - K)]
          for i in range(width)]
    QTinv = _rat_inverse(QT)
    # T (QT)^{-1}, an N x (L+M+1) matrix.
    TQTinv = [[sum(T[r][c] * QTinv[c][j] for c in range(N - K))
               for j in range(width)] for r in range(N)]
    closure = {}
    for k in range(L + M + 1, max(2 * M, 2 * L + 2) + 1):
        power_row = [Fraction(n ** k) for n in range(N)]
        row = tuple(sum(power_row[r] * TQTinv[r][j] for r in range(N))
                    for j in range(width))
        closure[k] = row
    return MomentMatrices(
        params=params,
        T=tuple(tuple(r) for r in T),
        Q=tuple(tuple(r) for r in Q),
        qt_inverse=tuple(tuple(r) for r in QTinv),
        closure=closure,
    )


def moment_images(params: DesignParams, mats: MomentMatrices,
                  variables: tuple[str, ...]) -> dict[int, MultiPoly]:
    """Every moment index as a polynomial over (t, unknown moments).

    m_k = t^k up to the power range, an unknown variable through L+M,
    and the closure row above that (with the same rules applied inside).
    """
    K, L, M = params.K, params.L, params.M
    power_top = min(2 * L + 2, L + M)
    images: dict[int, MultiPoly] = {0: MultiPoly.constant(variables, 1)}
    for k in range(1, power_top + 1):
        images[k] = MultiPoly.var(variables, "t", k)
    for k in range(power_top + 1, L + M + 1):
        images[k] = MultiPoly.var(variables, f"m{k}")
    for k in sorted(mats.closure):
        row = mats.closure[k]
        acc = MultiPoly.constant(variables, row[0])
        for j in range(1, L + M + 1):
            if row[j]:
                acc = acc + row[j] * images[j]
        images[k] = acc
    return images


@dataclass(frozen=True)
class ReducedSystem:
    """The quadrics left after closure and power substitutions.

    Equations are indexed by their magnitude-flatness order i (ascending)
    and live in the variables (t, m_{2L+3}, ..., m_{L+M}); each equation
    is integer-primitive.  Equations of order i <= 2L+2 are linear in the
    moment unknowns, the rest are genuinely quadratic.
    """

    params: DesignParams
    variables: tuple[str, ...]
    equations: tuple[MultiPoly, ...]
    sources: tuple[int, ...]
    mats: MomentMatrices

    @property
    def moment_names(self) -> tuple[str, ...]:
        return self.variables[1:]

    def split_linear(self) -> tuple[list[MultiPoly], list[MultiPoly]]:
        linear, quadratic = [], []
        names = self.moment_names
        for eq in self.equations:
            if names and eq.total_degree_in(names) > 1:
                quadratic.append(eq)
            else:
                linear.append(eq)
        return linear, quadratic

    def linear_matrix_at(self, t0: Fraction) -> tuple[list[list[Fraction]], list[Fraction]]:
        """Coefficient matrix and right-hand side of the linear subsystem at t = t0."""
        linear, _ = self.split_linear()
        names = self.moment_names
        rows = []
        rhs = []
        for eq in linear:
            row = []
            for name in names:
                coeff = _coeff_of_var(eq, name)
                row.append(coeff.to_unipoly("t").evaluate(t0))
            const = _constant_part(eq, names)
            rows.append(row)
            rhs.append(-const.to_unipoly("t").evaluate(t0))
        return rows, rhs


def _coeff_of_var(eq: MultiPoly, name: str) -> MultiPoly:
    """Coefficient of a degree-1 occurrence of one moment variable."""
    by_deg = eq.coefficients_in(name)
    return by_deg.get(1, MultiPoly.zero(eq.variables))


def _constant_part(eq: MultiPoly, names) -> MultiPoly:
    out = {}
    idx = [eq.variables.index(n) for n in names]
    for exp, c in eq.terms.items():
        if all(exp[i] == 0 for i in idx):
            out[exp] = c
    return MultiPoly(eq.variables, out)


def reduce_system(params: DesignParams) -> ReducedSystem:
    """Reduced design system: one quadric per order i = L+2 .. M."""
    K, L, M = params.K, params.L, params.M
    if M <= L:
        raise ParamError("reduction needs M > L")
    mats = build_moment_matrices(params)
    variables = ("t",) + tuple(f"m{k}" for k in range(2 * L + 3, L + M + 1))
    images = moment_images(params, mats, variables)
    name_map = {f"m{k}": img for k, img in images.items()}
    equations = []
    sources = []
    for i in range(L + 2, M + 1):
        quad = magnitude_quadric(i)
        mapping = {v: name_map[v] for v in quad.variables}
        eq = quad.substitute(mapping, variables)
        equations.append(eq.primitive())
        sources.append(i)
    return ReducedSystem(params=params, variables=variables,
                         equations=tuple(equations), sources=tuple(sources),
                         mats=mats)


def time_reverse_poly(p: UniPoly, params: DesignParams) -> UniPoly:
    """p evaluated at (K+L+M) - t, expanded exactly."""
    return p.compose_linear(Fraction(-1), Fraction(params.reversal_sum))


def full_system_equations(params: DesignParams) -> list[tuple[str, int, MultiPoly]]:
    """All magnitude and delay quadrics of the design, for residual checks."""
    out = []
    for i in range(1, params.M + 1):
        out.append(("magnitude", i, magnitude_quadric(i)))
    for j in range(1, params.L + 1):
        out.append(("delay", j, delay_quadric(j)))
    return out
