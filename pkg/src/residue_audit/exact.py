"""Exact coefficient ring: Gaussian rationals and sparse polynomials over named atoms.

Every quantity handled by the symbolic engine lives in this ring.  A
:class:`Poly` is a finite sum of monomials in a fixed family of atoms
(``h1`` for h'(0), frame components ``a(j,k)`` and their normal
derivatives ``da(j,k)``, tangential covariables ``xi(k)``, the normal
covariable ``xin``, the scalar curvature ``s`` and the transcendental
markers ``pi`` and ``Omega``).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, NamedTuple

__all__ = [
    "ExactScalar",
    "Atom",
    "Poly",
    "HPRIME",
    "A",
    "DA",
    "XI",
    "XIN",
    "SCURV",
    "PI",
    "OMEGA",
    "MissingAssignment",
    "h1",
    "a",
    "da",
    "xi",
    "xin",
    "scurv",
    "pi",
    "omega",
    "poly_mul",
    "poly_eval_numeric",
    "poly_sum",
    "const",
    "var",
    "I",
    "ONE",
]


class ExactScalar:
    """Complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, ExactScalar):
            if im:
                raise TypeError("cannot combine ExactScalar with an imaginary part")
            self.re, self.im = re.re, re.im
            return
        if isinstance(re, complex):
            re, im = _float_to_fraction(re.real), _float_to_fraction(re.imag) + Fraction(im)
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Rational)):
            out = cls.__new__(cls)
            out.re = Fraction(value)
            out.im = _ZERO
            return out
        if isinstance(value, complex):
            return cls(value)
        raise TypeError(f"cannot interpret {value!r} as an exact scalar")

    @staticmethod
    def _raw(re: Fraction, im: Fraction) -> "ExactScalar":
        out = ExactScalar.__new__(ExactScalar)
        out.re = re
        out.im = im
        return out

    def __add__(self, other):
        try:
            o = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactScalar._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactScalar._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return ExactScalar.coerce(other) - self

    def __neg__(self):
        return ExactScalar._raw(-self.re, -self.im)

    def __mul__(self, other):
        try:
            o = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.im and not o.im:
            return ExactScalar._raw(self.re * o.re, _ZERO)
        return ExactScalar._raw(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = ExactScalar.coerce(other)
        den = o.re * o.re + o.im * o.im
        if not den:
            raise ZeroDivisionError("division by exact zero")
        return ExactScalar._raw(
            (self.re * o.re + self.im * o.im) / den, (self.im * o.re - self.re * o.im) / den
        )

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return ExactScalar(1) / self**(-k)
        out = ExactScalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "ExactScalar":
        return ExactScalar._raw(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ExactScalar({self})"

    def __str__(self):
        if not self.im:
            return _frac_str(self.re)
        if not self.re:
            return _imag_str(self.im)
        sign = "-" if self.im < 0 else "+"
        return f"({_frac_str(self.re)}{sign}{_imag_str(abs(self.im))})"


_ZERO = Fraction(0)
I = ExactScalar(0, 1)
ONE = ExactScalar(1)


def _float_to_fraction(x: float) -> Fraction:
    if x != int(x):
        raise TypeError(f"refusing to convert non-integral float {x!r} to an exact scalar")
    return Fraction(int(x))


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _imag_str(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    return f"{_frac_str(q)}*i"


# ---------------------------------------------------------------- atoms

HPRIME, A, DA, XI, XIN, SCURV, PI, OMEGA = range(8)

_KIND_NAMES = {
    HPRIME: "HPRIME",
    A: "A",
    DA: "DA",
    XI: "XI",
    XIN: "XIN",
    SCURV: "SCURV",
    PI: "PI",
    OMEGA: "OMEGA",
}


class Atom(NamedTuple):
    """A symbolic indeterminate.  Tuple order is the canonical print order."""

    kind: int
    i: int = 0
    j: int = 0

    @property
    def kind_name(self) -> str:
        return _KIND_NAMES[self.kind]

    def __str__(self):
        k = self.kind
        if k == HPRIME:
            return "h1"
        if k == A:
            return f"a({self.i},{self.j})"
        if k == DA:
            return f"da({self.i},{self.j})"
        if k == XI:
            return f"xi({self.i})"
        if k == XIN:
            return "xin"
        if k == SCURV:
            return "s"
        if k == PI:
            return "pi"
        return "Omega"


class MissingAssignment(KeyError):
    def __init__(self, atom: Atom):
        super().__init__(f"missing assignment for atom {atom}")
        self.atom = atom

    def __str__(self):
        return self.args[0]


# ---------------------------------------------------------------- polynomials

Monomial = tuple  # tuple[tuple[Atom, int], ...], sorted by atom


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for atom, e in m2:
        d[atom] = d.get(atom, 0) + e
    return tuple(sorted(d.items()))


def _mono_key(m: Monomial):
    return (sum(e for _, e in m), m)


class Poly:
    """Sparse multivariate polynomial with :class:`ExactScalar` coefficients.

    ``terms`` maps canonical monomials (sorted tuples of ``(Atom, exponent)``)
    to nonzero coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, ExactScalar] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    @staticmethod
    def _raw(terms: dict) -> "Poly":
        out = Poly.__new__(Poly)
        out.terms = terms
        out._hash = None
        return out

    # -- constructors
    @classmethod
    def const(cls, value) -> "Poly":
        c = ExactScalar.coerce(value)
        return cls._raw({(): c} if c else {})

    @classmethod
    def atom(cls, atom: Atom, exp: int = 1) -> "Poly":
        if exp == 0:
            return cls.const(1)
        return cls._raw({((atom, exp),): ONE})

    @classmethod
    def coerce(cls, value) -> "Poly":
        if isinstance(value, Poly):
            return value
        if isinstance(value, Atom):
            return cls.atom(value)
        return cls.const(value)

    # -- queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> ExactScalar:
        return self.terms.get((), ExactScalar(0))

    def atoms(self) -> set:
        return {atom for m in self.terms for atom, _ in m}

    def degree_in(self, atom: Atom) -> int:
        best = 0
        for m in self.terms:
            for a_, e in m:
                if a_ == atom and e > best:
                    best = e
        return best

    # -- arithmetic
    def __add__(self, other):
        try:
            o = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.terms:
            return self
        if not self.terms:
            return o
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        try:
            o = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            return poly_mul(self, other)
        try:
            c = ExactScalar.coerce(other)
        except TypeError:
            if isinstance(other, Atom):
                return poly_mul(self, Poly.atom(other))
            return NotImplemented
        return self.scale(c)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c) -> "Poly":
        c = ExactScalar.coerce(c)
        if not c:
            return Poly._raw({})
        if c == ONE:
            return self
        return Poly._raw({m: v * c for m, v in self.terms.items()})

    def __truediv__(self, other):
        c = ExactScalar.coerce(other)
        return self.scale(ExactScalar(1) / c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomial")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            try:
                other = Poly.coerce(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- transformations
    def map_monomials(self, fn) -> "Poly":
        """Apply ``fn(monomial, coeff) -> iterable of (monomial, coeff)`` and collect."""
        out: dict = {}
        for m, c in self.terms.items():
            for m2, c2 in fn(m, c):
                if not c2:
                    continue
                v = out.get(m2)
                if v is None:
                    out[m2] = c2
                else:
                    v = v + c2
                    if v:
                        out[m2] = v
                    else:
                        del out[m2]
        return Poly._raw(out)

    def diff(self, atom: Atom) -> "Poly":
        def fn(m, c):
            for idx, (a_, e) in enumerate(m):
                if a_ == atom:
                    rest = m[:idx] + (((a_, e - 1),) if e > 1 else ()) + m[idx + 1 :]
                    return ((rest, c * e),)
            return ()

        return self.map_monomials(fn)

    def subs(self, mapping: Mapping[Atom, "Poly"]) -> "Poly":
        mapping = {k: Poly.coerce(v) for k, v in mapping.items()}
        out = Poly()
        cache: dict = {}
        for m, c in self.terms.items():
            kept = []
            factor = Poly.const(c)
            for a_, e in m:
                if a_ in mapping:
                    key = (a_, e)
                    if key not in cache:
                        cache[key] = mapping[a_] ** e
                    factor = factor * cache[key]
                else:
                    kept.append((a_, e))
            out = out + factor * Poly._raw({tuple(kept): ONE})
        return out

    def collect(self, atom: Atom) -> dict[int, "Poly"]:
        """Split into ``{exponent: coefficient}`` with respect to ``atom``."""
        groups: dict[int, dict] = {}
        for m, c in self.terms.items():
            e = 0
            rest = m
            for idx, (a_, k) in enumerate(m):
                if a_ == atom:
                    e = k
                    rest = m[:idx] + m[idx + 1 :]
                    break
            groups.setdefault(e, {})[rest] = c
        return {e: Poly._raw(t) for e, t in groups.items()}

    def coefficient_of(self, monomial: Monomial) -> ExactScalar:
        return self.terms.get(tuple(sorted(monomial)), ExactScalar(0))

    def eval_numeric(self, assignment: Mapping[Atom, complex]) -> complex:
        return poly_eval_numeric(self, assignment)

    # -- printing
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: _mono_key(mc[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            parts.append(_term_str(m, c))
        out = parts[0]
        for p in parts[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def __repr__(self):
        return f"Poly({self})"


def _mono_str(m: Monomial) -> str:
    return "*".join(str(a_) if e == 1 else f"{a_}^{e}" for a_, e in m)


def _term_str(m: Monomial, c: ExactScalar) -> str:
    if not m:
        return str(c)
    body = _mono_str(m)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{c}*{body}"


def poly_mul(p: Poly, q: Poly) -> Poly:
    """Exact product of two polynomials in canonical form."""
    if not p.terms or not q.terms:
        return Poly._raw({})
    out: dict = {}
    get = out.get
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            m = _mono_mul(m1, m2)
            v = get(m)
            out[m] = c1 * c2 if v is None else v + c1 * c2
    return Poly._raw({m: c for m, c in out.items() if c})


def poly_eval_numeric(p: Poly, assignment: Mapping[Atom, complex]) -> complex:
    """Evaluate ``p`` in floating point; every atom must be assigned."""
    total = 0j
    for m, c in p.terms.items():
        v = complex(c)
        for atom, e in m:
            try:
                x = assignment[atom]
            except KeyError:
                raise MissingAssignment(atom) from None
            v *= x**e
        total += v
    return total


# ---------------------------------------------------------------- shorthands

h1 = Atom(HPRIME)
xin = Atom(XIN)
scurv = Atom(SCURV)
pi = Atom(PI)
omega = Atom(OMEGA)


def a(j: int, alpha: int) -> Atom:
    return Atom(A, j, alpha)


def da(j: int, alpha: int) -> Atom:
    return Atom(DA, j, alpha)


def xi(k: int) -> Atom:
    return Atom(XI, k)


def const(value) -> Poly:
    return Poly.const(value)


def var(atom: Atom) -> Poly:
    return Poly.atom(atom)


def poly_sum(items: Iterable[Poly]) -> Poly:
    out = Poly()
    for p in items:
        out = out + p
    return out
