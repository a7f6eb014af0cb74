import random

import pytest

from residue_audit.dsl import DSLError, format_symbol, parse_poly, parse_symbol
from residue_audit.exact import Poly
from residue_audit.symbols import SYMBOL_NAMES, build_symbol, pi_plus

from conftest import make_symbol


def test_inverse_symbol_from_text():
    assert parse_symbol("i*c(xi)/|xi|^2") == build_symbol("sigma-1(D^-1)", 4)


def test_projection_printout():
    out = format_symbol(parse_symbol("pip(i*c(xi)/|xi|^2)"))
    assert out == "(1/2*xi(1)*c(e1) + 1/2*xi(2)*c(e2) + 1/2*xi(3)*c(e3) + 1/2*i*c(e4))/(xin-i)"


@pytest.mark.parametrize(
    "text,expected",
    [
        ("c(e1)*c(e1)+1", "0"),
        ("c(e1)*c(e2)*c(e1)", "c(e2)"),
        ("sph(xi(1)^2)", "1/3*Omega"),
        ("res(1/((xin-i)*(xin+i)))", "pi"),
        ("2^-1", "1/2"),
        ("-(h1 - h1)", "0"),
        ("dxn(c(X1))", "da(1,1)*c(e1) + da(1,2)*c(e2) + da(1,3)*c(e3) + da(1,4)*c(e4)"),
    ],
)
def test_evaluation(text, expected):
    assert format_symbol(parse_symbol(text)) == expected


@pytest.mark.parametrize("n", [4, 6])
@pytest.mark.parametrize("name", SYMBOL_NAMES)
def test_round_trip_named_symbols(name, n):
    x = build_symbol(name, n)
    assert parse_symbol(format_symbol(x), n) == x


def test_round_trip_random_symbols():
    rng = random.Random(11)
    for _ in range(40):
        x = make_symbol(rng, proper=False)
        assert parse_symbol(format_symbol(x)) == x
        if x.degree() < x.p + x.q:
            assert parse_symbol(format_symbol(pi_plus(x))) == pi_plus(x)


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("1/(xin-2)", "divisor must factor"),
        ("c(e1)/c(e2)", "Clifford-valued"),
        ("a(1,", "line 1, column 5"),
        ("foo(1)", "unknown identifier 'foo'"),
        ("h1 +\n  c(e1) $", "line 2"),
        ("c(e5)", "e5"),
    ],
)
def test_errors_are_located(text, fragment):
    with pytest.raises(DSLError) as info:
        parse_symbol(text)
    assert fragment in str(info.value)


def test_poly_text_round_trip():
    text = "-1/2*da(1,1) + 3/8*h1*a(1,1)*a(2,1)*pi*Omega"
    p = parse_poly(text)
    assert str(p) == text
    assert parse_poly(str(p)) == p
    assert parse_poly("0") == Poly()
