"""Metric forms in the frame vectors X_1..X_l.

Boundary and interior values are polynomials in the frame components
``a(j,k)`` (and ``da(j,k)``), but they are naturally sums over perfect
matchings of products ``g(X_p, X_q)`` and of their normal derivatives.
:func:`recognize` reads such a form off a polynomial and checks the
reconstruction exactly; :func:`format_gform` prints it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .clifford import perfect_matchings
from .exact import A, DA, HPRIME, OMEGA, PI, SCURV, ExactScalar, Poly, a, da

__all__ = ["GForm", "g_pair", "g_product", "normal_derivative", "recognize", "format_gform", "format_value", "poly_latex"]

Matching = tuple  # tuple of (p, q) pairs with p < q


def g_pair(n: int, p: int, q: int) -> Poly:
    """g(X_p, X_q) = sum_k a(p,k) a(q,k)."""
    out = Poly()
    for k in range(1, n + 1):
        out = out + Poly.atom(a(p, k)) * Poly.atom(a(q, k))
    return out


@lru_cache(maxsize=None)
def g_product(n: int, matching: Matching) -> Poly:
    out = Poly.const(1)
    for p, q in matching:
        out = out * g_pair(n, p, q)
    return out


def normal_derivative(p: Poly) -> Poly:
    """d/dx_n by the Leibniz rule, a(j,k) -> da(j,k); other atoms are constant."""
    out = Poly()
    for atom in p.atoms():
        if atom.kind == A:
            out = out + p.diff(atom) * Poly.atom(da(atom.i, atom.j))
        elif atom.kind == DA:
            raise ValueError("second normal derivatives of the frame are not modelled")
    return out


@lru_cache(maxsize=None)
def _dn_product(n: int, matching: Matching) -> Poly:
    return normal_derivative(g_product(n, matching))


def _witness(matching: Matching, derivative: bool) -> tuple:
    # distinct summation index per pair so that exactly one matching produces it
    atoms = []
    for t, (p, q) in enumerate(matching, start=1):
        atoms.append((da(p, t) if derivative and t == 1 else a(p, t), 1))
        atoms.append((a(q, t), 1))
    return tuple(sorted(atoms))


def _split_frame(p: Poly) -> dict:
    """Group ``p`` by its frame part: {frame monomial: coefficient Poly}."""
    groups: dict = {}
    for mono, c in p.terms.items():
        frame = tuple(x for x in mono if x[0].kind in (A, DA))
        rest = tuple(x for x in mono if x[0].kind not in (A, DA))
        groups.setdefault(frame, {})[rest] = c
    return {k: Poly(v) for k, v in groups.items()}


@dataclass(frozen=True)
class GForm:
    """sum_mu plain[mu] * prod g  +  sum_mu normal[mu] * dn[prod g]."""

    n: int
    l: int
    plain: tuple
    normal: tuple

    def to_poly(self) -> Poly:
        out = Poly()
        for mu, c in self.plain:
            out = out + c * g_product(self.n, mu)
        for mu, c in self.normal:
            out = out + c * _dn_product(self.n, mu)
        return out

    def is_zero(self) -> bool:
        return not self.plain and not self.normal


def recognize(p: Poly, n: int, l: int) -> GForm | None:
    """Express ``p`` as a metric form in X_1..X_l, or return None."""
    if l % 2:
        return GForm(n, l, (), ()) if p.is_zero() else None
    if l // 2 > n:
        return None
    groups = _split_frame(p)
    plain, normal = [], []
    for _, pairs in perfect_matchings(tuple(range(1, l + 1))):
        mu = tuple(tuple(pair) for pair in pairs)
        c = groups.get(_witness(mu, False))
        if c:
            plain.append((mu, c))
        if l:
            c = groups.get(_witness(mu, True))
            if c:
                normal.append((mu, c))
    form = GForm(n, l, tuple(plain), tuple(normal))
    return form if form.to_poly() == p else None


# ---------------------------------------------------------------- printing


def _g_str(mu: Matching, latex: bool) -> str:
    if not mu:
        return "1"
    if latex:
        return "".join(f"g(X_{p},X_{q})" for p, q in mu)
    return "*".join(f"g(X{p},X{q})" for p, q in mu)


_LATEX_ATOMS = {HPRIME: "h'(0)", SCURV: "s", PI: "\\pi", OMEGA: "\\Omega"}


def _atom_latex(atom, e: int) -> str:
    if atom.kind in _LATEX_ATOMS:
        base = _LATEX_ATOMS[atom.kind]
    elif atom.kind == A:
        base = f"a_{{{atom.i}{atom.j}}}"
    elif atom.kind == DA:
        base = f"\\partial_{{x_n}}a_{{{atom.i}{atom.j}}}"
    else:
        base = str(atom)
    return base if e == 1 else f"{base}^{{{e}}}"


def _rational_latex(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"\\frac{{{abs(q.numerator)}}}{{{q.denominator}}}"


def poly_latex(p: Poly) -> str:
    """LaTeX for a polynomial with real or purely imaginary coefficients."""
    if p.is_zero():
        return "0"
    out = ""
    for mono, c in p.sorted_terms():
        body = " ".join(_atom_latex(atom, e) for atom, e in mono)
        if c.im == 0:
            q, unit = c.re, ""
        elif c.re == 0:
            q, unit = c.im, "i"
        else:
            q, unit = None, ""
        if q is None:
            term = f"({c})"
            sign = "+"
        else:
            sign = "-" if q < 0 else "+"
            mag = _rational_latex(abs(q))
            term = "" if mag == "1" and (body or unit) else mag
            term = " ".join(t for t in (term, unit) if t)
        term = " ".join(t for t in (term, body) if t)
        if not out:
            out = ("-" if sign == "-" else "") + term
        else:
            out += f" {sign} {term}"
    return out


_poly_latex = poly_latex


def _group(items: tuple, derivative: bool, latex: bool) -> list[str]:
    """Print one family, factoring a common coefficient up to sign when possible."""
    if not items:
        return []
    lead = items[0][1]
    signs = []
    for _, c in items:
        if c == lead:
            signs.append(1)
        elif c == -lead:
            signs.append(-1)
        else:
            signs = None
            break
    fmt = _poly_latex if latex else str

    def wrap(body: str) -> str:
        if not derivative:
            return body
        return f"\\partial_{{x_n}}[{body}]" if latex else f"dn[{body}]"

    def coeff_times(c: Poly, body: str) -> str:
        if c == Poly.const(1):
            return body
        if c == Poly.const(-1):
            return "-" + body
        text = fmt(c)
        if len(c.terms) > 1:
            text = f"({text})"
        return f"{text}{' ' if latex else '*'}{body}"

    if signs is not None and len(items) > 1:
        inner = ""
        for (mu, _), s in zip(items, signs):
            piece = _g_str(mu, latex)
            inner += piece if not inner and s > 0 else (" + " if s > 0 else " - ") + piece
        inner = inner.strip()
        if inner.startswith("- "):
            inner = "-" + inner[2:]
        if not derivative and lead != Poly.const(1):
            inner = f"[{inner}]"
        return [coeff_times(lead, wrap(inner))]
    return [coeff_times(c, wrap(_g_str(mu, latex))) for mu, c in items]


def format_gform(form: GForm, latex: bool = False) -> str:
    parts = _group(form.plain, False, latex) + _group(form.normal, True, latex)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def format_value(p: Poly, n: int, l: int, latex: bool = False, unit: Poly | None = None) -> str:
    """Print ``p`` as a metric form when possible, else as a raw polynomial.

    With ``unit`` (for example tr[id]) the value is printed as form*unit.
    """
    scaled = p
    if unit is not None:
        if not unit.is_constant():
            raise ValueError("unit must be a constant")
        scaled = p.scale(ExactScalar(1) / unit.constant_value())
    form = recognize(scaled, n, l)
    if form is None:
        return str(p)
    body = format_gform(form, latex)
    if unit is None:
        return body
    if form.is_zero():
        return "0"
    tag = "\\mathrm{tr}[\\mathrm{id}]" if latex else "tr_id"
    if " + " in body or " - " in body:
        body = f"({body})"
    return f"{body}{' ' if latex else '*'}{tag}"
