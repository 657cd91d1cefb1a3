from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatfir.errors import DivisionError
from flatfir.exactalg import MultiPoly, UniPoly

V = ("t", "x", "y")


def mono(c, t=0, x=0, y=0):
    return MultiPoly(V, {(t, x, y): c})


def test_zero_coefficients_dropped():
    p = MultiPoly(V, {(1, 0, 0): 1}) - MultiPoly(V, {(1, 0, 0): 1})
    assert p.is_zero and p.terms == {}


def test_arity_mismatch_rejected():
    with pytest.raises(ValueError):
        MultiPoly(V, {(1, 0): 1})


def test_mul_and_degrees():
    p = mono(2, x=1) + mono(3, t=2)
    q = mono(1, y=1) - mono(1, x=1)
    r = p * q
    assert r.degree_in("x") == 2
    assert r.total_degree_in(("x", "y")) == 2
    assert r == (mono(2, x=1, y=1) - mono(2, x=2)
                 + mono(3, t=2, y=1) - mono(3, t=2, x=1))


def test_coefficients_in():
    p = mono(2, x=2) + mono(5, x=1, t=1) + mono(7)
    cs = p.coefficients_in("x")
    assert cs[2] == mono(2)
    assert cs[1] == mono(5, t=1)
    assert cs[0] == mono(7)


def test_substitute():
    p = mono(1, x=2) + mono(1, y=1)
    w = ("u",)
    img = {"t": MultiPoly.constant(w, 1),
           "x": MultiPoly.var(w, "u"),
           "y": MultiPoly.constant(w, 3)}
    q = p.substitute(img, w)
    assert q == MultiPoly(w, {(2,): 1, (0,): 3})


def test_divided_difference_exact():
    vars2 = ("x", "X")
    p = MultiPoly(vars2, {(3, 0): 2, (1, 0): -1, (0, 0): 4})
    dd = p.divided_difference("x", "X")
    # (p(X) - p(x)) / (X - x) for 2x^3 - x + 4: 2(X^2 + Xx + x^2) - 1
    expect = MultiPoly(vars2, {(0, 2): 2, (1, 1): 2, (2, 0): 2, (0, 0): -1})
    assert dd == expect
    diff = p.rename("x", "X") - p
    lin = MultiPoly(vars2, {(0, 1): 1, (1, 0): -1})
    assert dd * lin == diff


def test_exact_div():
    p = mono(1, x=1) + mono(1, y=1)
    q = p * p
    assert q.exact_div(p) == p
    with pytest.raises(DivisionError):
        (q + mono(1)).exact_div(p)


def test_to_unipoly_roundtrip():
    p = mono(3, t=2) + mono(-1, t=1) + mono(7)
    u = p.to_unipoly("t")
    assert u == UniPoly([7, -1, 3])
    assert MultiPoly.from_unipoly(u, V, "t") == p
    with pytest.raises(ValueError):
        (p + mono(1, x=1)).to_unipoly("t")


def test_primitive_content():
    p = mono(F(4, 6), x=1) + mono(F(2, 3))
    prim = p.primitive()
    assert prim.content() == 1
    assert prim == mono(1, x=1) + mono(1)


coeffs = st.integers(min_value=-4, max_value=4)
exps = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
mpolys = st.dictionaries(exps, coeffs, max_size=4).map(lambda d: MultiPoly(V, d))


@settings(max_examples=120, deadline=None)
@given(mpolys, mpolys, mpolys)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None)
@given(mpolys, mpolys)
def test_exact_div_roundtrip(a, b):
    if b.is_zero:
        return
    assert (a * b).exact_div(b) == a
