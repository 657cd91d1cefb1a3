from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatfir.errors import DegenerateInput, DivisionError
from flatfir.exactalg import UniPoly, poly_gcd, squarefree_decomposition, squarefree_part

T = UniPoly.t()


def test_construction_normalizes_trailing_zeros():
    assert UniPoly([1, 2, 0, 0]).coeffs == (F(1), F(2))
    assert UniPoly([0, 0]).is_zero
    assert UniPoly().degree == -1
    assert UniPoly([5]).degree == 0


def test_product_difference_of_squares():
    assert (T - 1) * (T + 1) == UniPoly([-1, 0, 1])


def test_exact_div_examples():
    assert UniPoly([-1, 0, 1]).exact_div(T - 1) == T + 1
    big = (2 * T - 7) ** 2 * (2 * T - 9) ** 2
    assert big.exact_div(2 * T - 7) == (2 * T - 7) * (2 * T - 9) ** 2


def test_exact_div_nonzero_remainder_raises():
    with pytest.raises(DivisionError):
        (T * T + 1).exact_div(T - 1)


def test_gcd_examples():
    assert poly_gcd(UniPoly([-1, 0, 1]), T - 1) == T - 1
    p = 3 * (T - 2) * (T + 5)
    assert poly_gcd(p, UniPoly.zero()) == p.monic()
    g = poly_gcd((2 * T - 7) * (2 * T - 9), (2 * T - 9) * (2 * T - 11))
    assert g == T - F(9, 2)


def test_gcd_both_zero_raises():
    with pytest.raises(DegenerateInput):
        poly_gcd(UniPoly.zero(), UniPoly.zero())


def test_squarefree_part():
    assert squarefree_part((T - 1) ** 2 * (T - 2)) == ((T - 1) * (T - 2)).monic()
    p = UniPoly([1, 0, 1])
    assert squarefree_part(p) == p
    with pytest.raises(DegenerateInput):
        squarefree_part(UniPoly.zero())


def test_squarefree_decomposition_reconstructs():
    p = (T - 1) ** 3 * (T + 2) ** 2 * (T - 5)
    decomp = squarefree_decomposition(p)
    assert {(f.degree, m) for f, m in decomp} == {(1, 3), (1, 2), (1, 1)}
    rebuilt = UniPoly.constant(p.leading)
    for f, m in decomp:
        rebuilt = rebuilt * f ** m
    assert rebuilt == p


def test_evaluate_compose_derivative():
    p = 3 * T ** 2 - T + 5
    assert p.evaluate(F(1, 2)) == F(3, 4) - F(1, 2) + 5
    assert p.compose_linear(F(-1), F(7)) == 3 * (7 - T) ** 2 - (7 - T) + 5
    assert p.derivative() == 6 * T - 1


def test_content_and_primitive():
    p = UniPoly([F(4, 3), F(8, 3)])
    assert p.content() == F(4, 3)
    assert p.primitive() == UniPoly([1, 2])
    assert (-p).primitive() == UniPoly([-1, -2])


small_fractions = st.fractions(
    min_value=-5, max_value=5, max_denominator=6)
polys = st.lists(small_fractions, min_size=0, max_size=5).map(UniPoly)


@settings(max_examples=150, deadline=None)
@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=80, deadline=None)
@given(polys, polys)
def test_divmod_invariant(a, b):
    if b.is_zero:
        return
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero or r.degree < b.degree


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_gcd_divides_both(a, b):
    if a.is_zero and b.is_zero:
        return
    g = poly_gcd(a, b)
    if not a.is_zero:
        a.exact_div(g)
    if not b.is_zero:
        b.exact_div(g)
    assert g.leading == 1
