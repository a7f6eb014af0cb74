"""A small expression language for boundary symbols, plus the canonical printer.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-' | '+') factor | atom ('^' int)?
    atom   := int | 'i' | 'h1' | 's' | 'pi' | 'Omega' | 'xin'
            | 'a(' j ',' k ')' | 'da(' j ',' k ')' | 'xi(' k ')'
            | 'c(' vec ')' | '|xi|^2'
            | fn '(' expr ')' | '(' expr ')'
    fn     := 'pip' | 'pim' | 'dxin' | 'dxn' | 'tr' | 'res' | 'sph'
    vec    := 'e' int | 'xi' | "xi'" | 'dxn' | 'X' int

Division is only allowed by expressions that reduce, on |xi'| = 1, to a
nonzero constant times (xin - i)^a (xin + i)^b.  ``res`` integrates over the
real xin line and ``sph`` averages over |xi'| = 1 (introducing ``Omega``).

:func:`format_symbol` prints a symbol in a form :func:`parse_symbol` reads
back to an equal symbol; :func:`parse_poly` reads the canonical
:class:`~residue_audit.exact.Poly` strings used in reports.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .clifford import CliffordElem, vector_X
from .exact import (
    A,
    DA,
    HPRIME,
    OMEGA,
    PI,
    SCURV,
    XI,
    Atom,
    ExactScalar,
    I,
    Poly,
)
from .symbols import (
    BoundarySymbol,
    DEFAULT_TABLE,
    DerivativeTable,
    SymbolError,
    c_xi,
    c_xi_prime,
    d_x_n,
    d_xi_n,
    integrate_gamma_plus_clifford,
    pi_minus,
    pi_plus,
    sphere_average_symbol,
    sphere_reduce,
    sphere_reduce_symbol,
    trace_symbol,
)

__all__ = ["DSLError", "parse_symbol", "parse_poly", "format_symbol", "format_clifford"]


class DSLError(ValueError):
    """Syntax or evaluation error, with 1-based line and column when known."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f" at line {line}, column {col}" if line else ""
        super().__init__(message + where)


# ---------------------------------------------------------------- lexer

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<norm>\|xi\|\^2)
  | (?P<name>[A-Za-z][A-Za-z0-9]*'?)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _lex(text: str) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            line, col = _line_col(text, pos)
            raise DSLError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind != "ws":
            out.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    out.append(_Tok("eof", "", len(text)))
    return out


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


# ---------------------------------------------------------------- parser -> AST
# AST nodes are tuples: ("num", int) ("name", str) ("atom", Atom) ("vec", str, int)
# ("norm",) ("call", fn, node) ("neg", node) ("bin", op, left, right) ("pow", node, int)

_FUNCS = ("pip", "pim", "dxin", "dxn", "tr", "res", "sph")
_CONSTS = ("i", "h1", "s", "pi", "Omega", "xin")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _lex(text)
        self.k = 0

    def _err(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.toks[self.k]
        line, col = _line_col(self.text, tok.pos)
        raise DSLError(msg, line, col)

    def peek(self) -> _Tok:
        return self.toks[self.k]

    def take(self, text: str | None = None, kind: str | None = None) -> _Tok:
        tok = self.toks[self.k]
        if text is not None and tok.text != text:
            self._err(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        if kind is not None and tok.kind != kind:
            self._err(f"expected {kind}, found {tok.text or 'end of input'!r}")
        self.k += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.peek().kind != "eof":
            self._err(f"unexpected {self.peek().text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            node = ("bin", op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek().text in ("*", "/"):
            op = self.take().text
            node = ("bin", op, node, self.factor())
        return node

    def factor(self):
        tok = self.peek()
        if tok.text in ("-", "+"):
            self.take()
            inner = self.factor()
            return ("neg", inner) if tok.text == "-" else inner
        node = self.atom()
        if self.peek().text == "^":
            self.take()
            sign = 1
            if self.peek().text == "-":
                self.take()
                sign = -1
            node = ("pow", node, sign * int(self.take(kind="num").text))
        return node

    def _int(self) -> int:
        return int(self.take(kind="num").text)

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return ("num", int(tok.text))
        if tok.kind == "norm":
            self.take()
            return ("norm",)
        if tok.text == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if tok.kind != "name":
            self._err(f"unexpected {tok.text or 'end of input'!r}")
        self.take()
        name = tok.text
        if name in _CONSTS:
            return ("name", name)
        if name in ("a", "da"):
            self.take("(")
            j = self._int()
            self.take(",")
            k = self._int()
            self.take(")")
            return ("atom", Atom(A if name == "a" else DA, j, k))
        if name == "xi":
            self.take("(")
            k = self._int()
            self.take(")")
            return ("atom", Atom(XI, k))
        if name == "c":
            self.take("(")
            vt = self.take(kind="name")
            v = vt.text
            if v in ("xi", "xi'", "dxn"):
                node = ("vec", v, 0)
            elif re.fullmatch(r"[eX]\d+", v):
                node = ("vec", v[0], int(v[1:]))
            else:
                self._err(f"unknown vector {v!r}", vt)
            self.take(")")
            return node
        if name in _FUNCS:
            self.take("(")
            inner = self.expr()
            self.take(")")
            return ("call", name, inner)
        self._err(f"unknown identifier {name!r}", tok)


# ---------------------------------------------------------------- evaluation


def _divide(x: BoundarySymbol, d: BoundarySymbol) -> BoundarySymbol:
    n = x.n
    if d.is_zero():
        raise DSLError("division by zero")
    if not d.is_scalar():
        raise DSLError("division by a Clifford-valued expression is not supported")
    # reduce the divisor's numerator on |xi'| = 1 and factor it as c (xin-i)^a (xin+i)^b
    coeffs = []
    for c in d.num:
        p = sphere_reduce(c.scalar_part(), n - 1)
        if p and not p.is_constant():
            raise DSLError(f"divisor coefficient {p} is not a constant")
        coeffs.append(p.constant_value() if p else ExactScalar(0))
    probe = BoundarySymbol.xin_poly(n, coeffs)
    a = b = 0
    while probe.degree() > 0:
        reduced = BoundarySymbol(n, probe.num, 1, 0)
        if reduced.p == 0:
            a += 1
            probe = BoundarySymbol(n, reduced.num)
            continue
        reduced = BoundarySymbol(n, probe.num, 0, 1)
        if reduced.q == 0:
            b += 1
            probe = BoundarySymbol(n, reduced.num)
            continue
        raise DSLError("divisor must factor as const*(xin-i)^a*(xin+i)^b on |xi'|=1")
    const = probe.num[0].scalar_part().constant_value()
    # 1/d = (xin-i)^(d.p - a) (xin+i)^(d.q - b) / const
    pe, qe = d.p - a, d.q - b
    inv = BoundarySymbol.scalar(n, ExactScalar(1) / const)
    if pe > 0:
        inv = _times_linear(inv, I, pe)
    if qe > 0:
        inv = _times_linear(inv, -I, qe)
    inv = BoundarySymbol(n, inv.num, inv.p + max(-pe, 0), inv.q + max(-qe, 0))
    return x * inv


def _times_linear(x: BoundarySymbol, root: ExactScalar, e: int) -> BoundarySymbol:
    lin = BoundarySymbol.xin_poly(x.n, [-root, 1])
    for _ in range(e):
        x = x * lin
    return x


def _ipow(x: BoundarySymbol, e: int) -> BoundarySymbol:
    if e < 0:
        return _divide(BoundarySymbol.scalar(x.n, 1), _ipow(x, -e))
    out = BoundarySymbol.scalar(x.n, 1)
    for _ in range(e):
        out = out * x
    return out


class _SymbolEval:
    def __init__(self, n: int, table: DerivativeTable):
        self.n = n
        self.table = table

    def scalar_poly(self, p) -> BoundarySymbol:
        return BoundarySymbol.scalar(self.n, p)

    def __call__(self, node) -> BoundarySymbol:
        n = self.n
        kind = node[0]
        if kind == "num":
            return self.scalar_poly(node[1])
        if kind == "name":
            name = node[1]
            if name == "i":
                return self.scalar_poly(Poly.const(I))
            if name == "xin":
                return BoundarySymbol.xin_poly(n, [0, 1])
            atom = {"h1": Atom(HPRIME), "s": Atom(SCURV), "pi": Atom(PI), "Omega": Atom(OMEGA)}[name]
            return self.scalar_poly(Poly.atom(atom))
        if kind == "atom":
            atom = node[1]
            if atom.kind == XI and not 1 <= atom.i < n:
                raise DSLError(f"xi({atom.i}) outside 1..{n - 1}")
            if atom.kind in (A, DA) and not 1 <= atom.j <= n:
                raise DSLError(f"frame index {atom.j} outside 1..{n}")
            return self.scalar_poly(Poly.atom(atom))
        if kind == "norm":
            return BoundarySymbol.norm_power(n, -1)
        if kind == "vec":
            v, k = node[1], node[2]
            if v == "xi":
                return c_xi(n)
            if v == "xi'":
                return BoundarySymbol.constant(c_xi_prime(n))
            if v == "dxn":
                return BoundarySymbol.constant(CliffordElem.generator(n, n))
            if v == "e":
                if not 1 <= k <= n:
                    raise DSLError(f"generator e{k} outside 1..{n}")
                return BoundarySymbol.constant(CliffordElem.generator(n, k))
            if not k >= 1:
                raise DSLError(f"vector X{k} must have a positive index")
            return BoundarySymbol.constant(vector_X(n, k))
        if kind == "neg":
            return -self(node[1])
        if kind == "pow":
            return _ipow(self(node[1]), node[2])
        if kind == "bin":
            op, left, right = node[1], self(node[2]), self(node[3])
            if op == "+":
                return left + right
            if op == "-":
                return left - right
            if op == "*":
                return left * right
            return _divide(left, right)
        if kind == "call":
            fn, arg = node[1], self(node[2])
            try:
                if fn == "pip":
                    return pi_plus(arg)
                if fn == "pim":
                    return pi_minus(arg)
                if fn == "dxin":
                    return d_xi_n(arg)
                if fn == "dxn":
                    # a second dxn is rejected, so the |xi'| = 1 form is final here
                    return sphere_reduce_symbol(d_x_n(arg, self.table))
                if fn == "tr":
                    return trace_symbol(arg)
                if fn == "res":
                    return BoundarySymbol.constant(integrate_gamma_plus_clifford(arg))
                if fn == "sph":
                    return sphere_average_symbol(arg)
            except SymbolError as exc:
                raise DSLError(f"{fn}: {exc}") from None
        raise DSLError(f"cannot evaluate node {kind!r}")


def parse_symbol(text: str, n: int = 4, table: DerivativeTable = DEFAULT_TABLE) -> BoundarySymbol:
    """Parse and evaluate ``text`` as a rank-``n`` boundary symbol."""
    if n % 2 or n < 2:
        raise DSLError(f"rank must be a positive even integer, got {n}")
    tree = _Parser(text).parse()
    try:
        return _SymbolEval(n, table)(tree)
    except SymbolError as exc:
        raise DSLError(str(exc)) from None


def _poly_eval(node) -> Poly:
    kind = node[0]
    if kind == "num":
        return Poly.const(node[1])
    if kind == "name":
        name = node[1]
        if name == "i":
            return Poly.const(I)
        if name == "xin":
            raise DSLError("xin is not allowed in a plain polynomial")
        return Poly.atom({"h1": Atom(HPRIME), "s": Atom(SCURV), "pi": Atom(PI), "Omega": Atom(OMEGA)}[name])
    if kind == "atom":
        return Poly.atom(node[1])
    if kind == "neg":
        return -_poly_eval(node[1])
    if kind == "pow":
        if node[2] < 0:
            raise DSLError("negative powers are not polynomial")
        return _poly_eval(node[1]) ** node[2]
    if kind == "bin":
        op = node[1]
        left, right = _poly_eval(node[2]), _poly_eval(node[3])
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if not right.is_constant() or not right:
            raise DSLError("polynomial division only by nonzero constants")
        return left.scale(ExactScalar(1) / right.constant_value())
    raise DSLError(f"{kind!r} is not allowed in a plain polynomial")


def parse_poly(text: str) -> Poly:
    """Parse a canonical polynomial string such as ``-3/8*h1*a(1,1)*a(2,1)*pi*Omega``."""
    return _poly_eval(_Parser(text).parse())


# ---------------------------------------------------------------- printing


def _blade_str(mask: int) -> str:
    parts = []
    k = 1
    while mask:
        if mask & 1:
            parts.append(f"c(e{k})")
        mask >>= 1
        k += 1
    return "*".join(parts)


def _coeff_times(coeff: Poly, rest: str) -> str:
    """Render coeff*rest, dropping unit coefficients."""
    if not rest:
        return str(coeff)
    if coeff == Poly.const(1):
        return rest
    if coeff == Poly.const(-1):
        return "-" + rest
    body = str(coeff)
    if len(coeff.terms) > 1:
        body = f"({body})"
    return f"{body}*{rest}"


def format_clifford(x: CliffordElem) -> str:
    """Canonical string of a Clifford element (blades by grade, then index set)."""
    if x.is_zero():
        return "0"
    parts = []
    for mask in sorted(x.coeffs, key=lambda m: (bin(m).count("1"), _mask_key(m))):
        parts.append(_coeff_times(x.coeffs[mask], _blade_str(mask)))
    return _join(parts)


def _mask_key(mask: int) -> tuple:
    return tuple(k for k in range(mask.bit_length()) if mask >> k & 1)


def _join(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _xin_str(k: int) -> str:
    return "" if k == 0 else ("xin" if k == 1 else f"xin^{k}")


def format_symbol(x: BoundarySymbol) -> str:
    """Canonical printed form, readable by :func:`parse_symbol`."""
    if x.is_zero():
        return "0"
    parts = []
    for k, c in enumerate(x.num):
        if c.is_zero():
            continue
        for mask in sorted(c.coeffs, key=lambda m: (bin(m).count("1"), _mask_key(m))):
            rest = "*".join(s for s in (_xin_str(k), _blade_str(mask)) if s)
            parts.append(_coeff_times(c.coeffs[mask], rest))
    num = _join(parts)
    den = []
    if x.p:
        den.append("(xin-i)" + (f"^{x.p}" if x.p > 1 else ""))
    if x.q:
        den.append("(xin+i)" + (f"^{x.q}" if x.q > 1 else ""))
    if not den:
        return num
    if len(parts) > 1 or " " in num or num.startswith("-"):
        num = f"({num})"
    d = den[0] if len(den) == 1 else "(" + "*".join(den) + ")"
    return f"{num}/{d}"
