import cmath
import random
from fractions import Fraction

import pytest

from residue_audit.clifford import CliffordElem
from residue_audit.dsl import parse_symbol
from residue_audit.exact import Poly, h1, omega, pi, xi
from residue_audit.oracle import OracleConfig, numeric_contour, symbol_at
from residue_audit.symbols import (
    BoundarySymbol,
    SymbolError,
    build_symbol,
    d_xi_n,
    integrate_gamma_plus,
    inverse_defects,
    pi_minus,
    pi_plus,
    sphere_average,
    sphere_reduce,
    sphere_reduce_symbol,
    symbol_mul,
)

from conftest import make_symbol


def test_projections_split_and_are_idempotent(rng):
    for _ in range(60):
        x = make_symbol(rng)
        plus = pi_plus(x)
        assert plus + pi_minus(x) == x
        assert pi_plus(plus) == plus
        assert pi_minus(plus).is_zero()


def test_pi_plus_of_inverse_symbol():
    x = build_symbol("sigma-1(D^-1)", 4)
    out = pi_plus(x)
    assert out.p == 1 and out.q == 0
    expected = parse_symbol("(1/2*xi(1)*c(e1) + 1/2*xi(2)*c(e2) + 1/2*xi(3)*c(e3) + 1/2*i*c(e4))/(xin-i)")
    assert out == expected


def test_polynomial_part_rejected():
    x = BoundarySymbol.xin_poly(4, [1, 2, 3], 1, 0)
    with pytest.raises(SymbolError):
        pi_plus(x)


@pytest.mark.parametrize(
    "text,value",
    [
        ("1/((xin-i)*(xin+i))", Poly.atom(pi)),
        ("xin/((xin-i)^3*(xin+i)^2)", Poly.atom(pi).scale(Fraction(1, 8))),
        ("1/(xin+i)^2", Poly()),
        ("(-5*i*xin + 3*xin^2 + i*xin^3 + 1)/((xin-i)^5*(xin+i)^3)", Poly.atom(pi).scale(Fraction(1, 16))),
    ],
)
def test_integrate_gamma_plus_examples(text, value):
    assert integrate_gamma_plus(parse_symbol(text)) == value


def test_integrate_gamma_plus_against_contour():
    rng = random.Random(7)
    cfg = OracleConfig()
    assign = {h1: 0.7}
    for _ in range(25):
        x = make_symbol(rng, scalar=True)
        if x.degree() > x.p + x.q - 2:
            continue
        exact = integrate_gamma_plus(x).eval_numeric({**assign, pi: cmath.pi})
        num = numeric_contour(lambda z: symbol_at(x, z, assign), cfg)
        assert abs(num - exact) <= 1e-9 * (1 + abs(exact))


def test_xi_derivative_product_rule(rng):
    for _ in range(20):
        x, y = make_symbol(rng, proper=False), make_symbol(rng, proper=False)
        assert d_xi_n(x * y) == d_xi_n(x) * y + x * d_xi_n(y)


def test_sphere_moments():
    assert sphere_average(Poly.atom(xi(1), 2), 3) == Poly.atom(omega).scale(Fraction(1, 3))
    assert sphere_average(Poly.atom(xi(1)), 3).is_zero()
    four = sphere_average(Poly.atom(xi(1), 2) * Poly.atom(xi(2), 2), 5, with_omega=False)
    assert four == Poly.const(1).scale(Fraction(1, 35))
    with pytest.raises(SymbolError):
        sphere_average(Poly.atom(xi(4)), 3)


def test_sphere_reduce_normal_form():
    r = sphere_reduce(Poly.atom(xi(1), 2) + Poly.atom(xi(2), 2) + Poly.atom(xi(3), 2), 3)
    assert r == Poly.const(1)


@pytest.mark.parametrize("n", [4, 6])
def test_inverse_composition_vanishes(n):
    defects = inverse_defects(n)
    assert set(defects) == {0, -1}
    assert all(d.is_zero() for d in defects.values())


def test_inverse_negative_control():
    defects = inverse_defects(4, zero_sigma0=True)
    assert not defects[-1].is_zero()


def test_principal_symbol_inverse():
    n = 4
    s1 = build_symbol("sigma1(D)", n)
    inv = build_symbol("sigma-1(D^-1)", n)
    assert sphere_reduce_symbol(symbol_mul(s1, inv)) == BoundarySymbol.constant(CliffordElem.scalar(n, 1))
