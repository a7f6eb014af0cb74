from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from residue_audit.exact import (
    ExactScalar,
    I,
    MissingAssignment,
    Poly,
    a,
    da,
    h1,
    omega,
    pi,
    poly_sum,
    scurv,
    xi,
)

ATOMS = [a(1, 1), a(1, 2), a(2, 1), da(1, 1), h1, scurv, xi(1)]

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)
scalars = st.builds(ExactScalar, fractions, fractions)


@st.composite
def polys(draw):
    out = Poly()
    for _ in range(draw(st.integers(0, 4))):
        term = Poly.const(draw(scalars))
        for atom in draw(st.lists(st.sampled_from(ATOMS), max_size=3)):
            term = term * Poly.atom(atom)
        out = out + term
    return out


def test_scalar_field_ops():
    z = ExactScalar(1, 2)
    assert z * I == ExactScalar(-2, 1)
    assert z / ExactScalar(3, -1) == ExactScalar(Fraction(1, 10), Fraction(7, 10))
    assert z * z.conjugate() == ExactScalar(5)
    assert I ** 4 == ExactScalar(1)
    assert str(ExactScalar(Fraction(-1, 2), 1)) == "(-1/2+i)"
    with pytest.raises(ZeroDivisionError):
        z / ExactScalar(0)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert (p - p).is_zero()


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_leibniz_rule(p, q):
    for atom in (a(1, 1), h1):
        assert (p * q).diff(atom) == p.diff(atom) * q + p * q.diff(atom)


def test_canonical_print_is_degree_then_lex():
    p = (
        Poly.atom(a(2, 1)) * Poly.atom(h1)
        + Poly.atom(a(1, 1), 2)
        + Poly.const(ExactScalar(1, 2))
        + Poly.atom(da(1, 2))
        + Poly.atom(scurv) * Poly.atom(pi) * Poly.atom(omega)
    )
    assert str(p) == "(1+2*i) + da(1,2) + h1*a(2,1) + a(1,1)^2 + s*pi*Omega"
    parts = [Poly({m: c}) for m, c in p.sorted_terms()]
    assert str(poly_sum(reversed(parts))) == str(p)


def test_subs_and_eval():
    p = Poly.atom(h1) * Poly.atom(a(1, 1)) + Poly.const(3)
    assert p.subs({h1: Poly.const(2)}) == Poly.atom(a(1, 1)).scale(2) + Poly.const(3)
    assert p.eval_numeric({h1: 0.5, a(1, 1): 4.0}) == pytest.approx(5.0)
    with pytest.raises(MissingAssignment):
        p.eval_numeric({h1: 1.0})


def test_zero_terms_are_dropped():
    p = Poly.atom(h1) - Poly.atom(h1)
    assert p.is_zero() and str(p) == "0"
    assert Poly.const(0).is_zero()
