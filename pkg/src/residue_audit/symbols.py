"""Boundary symbols: Clifford-valued rational functions of the normal covariable xi_n.

A :class:`BoundarySymbol` is ``num(xi_n) / ((xi_n - i)^p (xi_n + i)^q)`` where
``num`` is a polynomial in ``xi_n`` whose coefficients are Clifford elements
over :class:`~residue_audit.exact.Poly`.  Tangential covariables stay inside
the coefficients as ``xi(k)`` atoms.

Everything is evaluated at a boundary point x0 with |xi'| = 1 in the
denominators: ``(1 + xi_n^2)^m`` stands for ``|xi|^(2m)``.  Numerators keep
``|xi'|^2`` as the explicit sum of ``xi(k)^2`` so that the normal derivative
(which needs the radial behaviour in xi') stays exact; the sphere relation is
only imposed by :func:`sphere_average` or :func:`sphere_reduce`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence

from .clifford import CliffordElem, clifford_from_vector, clifford_trace, vector_X
from .exact import (
    A,
    DA,
    HPRIME,
    XI,
    ExactScalar,
    Poly,
    Atom,
    I,
    da,
    h1,
    omega,
    pi as pi_atom,
    xi as xi_atom,
)

__all__ = [
    "SymbolError",
    "BoundarySymbol",
    "DerivativeTable",
    "DEFAULT_TABLE",
    "symbol_mul",
    "d_xi_n",
    "d_x_n",
    "d_x_tangential",
    "pi_plus",
    "pi_minus",
    "trace_symbol",
    "integrate_gamma_plus",
    "integrate_gamma_plus_clifford",
    "sphere_average",
    "sphere_average_symbol",
    "sphere_reduce",
    "sphere_reduce_symbol",
    "build_symbol",
    "apply_L",
    "L_word",
    "dL_word",
    "inverse_defects",
    "sum_symbols",
    "SYMBOL_NAMES",
    "c_xi",
    "c_xi_prime",
    "norm_xi_prime",
]


class SymbolError(ValueError):
    """Precondition failure in the symbol calculus."""


# ---------------------------------------------------------------- xi_n polynomials
# A numerator is a tuple of CliffordElems, index = power of xi_n.


def _strip(u: Sequence[CliffordElem]) -> tuple:
    u = list(u)
    while u and u[-1].is_zero():
        u.pop()
    return tuple(u)


def _padd(u, v, n):
    size = max(len(u), len(v))
    out = []
    for k in range(size):
        x = u[k] if k < len(u) else None
        y = v[k] if k < len(v) else None
        if x is None:
            out.append(y)
        elif y is None:
            out.append(x)
        else:
            out.append(x + y)
    return _strip(out)


def _pmul(u, v, n):
    if not u or not v:
        return ()
    out = [CliffordElem.zero(n) for _ in range(len(u) + len(v) - 1)]
    for i_, x in enumerate(u):
        if x.is_zero():
            continue
        for j_, y in enumerate(v):
            if y.is_zero():
                continue
            out[i_ + j_] = out[i_ + j_] + x * y
    return _strip(out)


def _pscale(u, c):
    return _strip([x.scale(c) for x in u])


def _pmul_scalar_poly(u, coeffs: Sequence[ExactScalar], n):
    """Multiply by a polynomial in xi_n with exact scalar coefficients."""
    if not u:
        return ()
    out = [CliffordElem.zero(n) for _ in range(len(u) + len(coeffs) - 1)]
    for i_, x in enumerate(u):
        if x.is_zero():
            continue
        for j_, c in enumerate(coeffs):
            if c:
                out[i_ + j_] = out[i_ + j_] + x.scale(c)
    return _strip(out)


def _linear_power(root: ExactScalar, e: int) -> list:
    """Coefficients of (xi_n - root)^e, lowest power first."""
    return [ExactScalar(comb(e, k)) * (-root) ** (e - k) for k in range(e + 1)]


def _peval(u, z: ExactScalar, n) -> CliffordElem:
    out = CliffordElem.zero(n)
    zk = ExactScalar(1)
    for x in u:
        if not x.is_zero():
            out = out + x.scale(zk)
        zk = zk * z
    return out


def _pdiv_linear(u, root: ExactScalar, n):
    """Quotient of u by (xi_n - root); caller guarantees exact divisibility."""
    if not u:
        return ()
    d = len(u) - 1
    q = [None] * d
    carry = CliffordElem.zero(n)
    for k in range(d, 0, -1):
        carry = u[k] + carry.scale(root) if k < d else u[k]
        q[k - 1] = carry
    return _strip(q)


def _pderiv(u):
    return _strip([u[k].scale(k) for k in range(1, len(u))])


def _taylor_shift(u, root: ExactScalar, n):
    """Coefficients of u(root + t) in powers of t."""
    size = len(u)
    out = []
    for k in range(size):
        acc = CliffordElem.zero(n)
        for j_ in range(k, size):
            if u[j_].is_zero():
                continue
            acc = acc + u[j_].scale(ExactScalar(comb(j_, k)) * root ** (j_ - k))
        out.append(acc)
    return _strip(out)


def _pmap(u, fn):
    return _strip([x.map_coeffs(fn) for x in u])


# ---------------------------------------------------------------- symbols


class BoundarySymbol:
    """``num(xi_n) / ((xi_n - i)^p (xi_n + i)^q)`` with Clifford coefficients."""

    __slots__ = ("n", "num", "p", "q")

    def __init__(self, n: int, num: Sequence[CliffordElem] = (), p: int = 0, q: int = 0):
        if p < 0 or q < 0:
            raise SymbolError("pole orders must be nonnegative")
        for x in num:
            if x.n != n:
                raise SymbolError(f"rank mismatch: coefficient of rank {x.n} in rank-{n} symbol")
        self.n = n
        num = _strip(num)
        if not num:
            p = q = 0
        else:
            # cancel common factors (xi_n - i), then (xi_n + i)
            while p and _peval(num, I, n).is_zero():
                num = _pdiv_linear(num, I, n)
                p -= 1
            while q and _peval(num, -I, n).is_zero():
                num = _pdiv_linear(num, -I, n)
                q -= 1
        self.num = num
        self.p = p
        self.q = q

    # -- constructors
    @classmethod
    def constant(cls, value: CliffordElem) -> "BoundarySymbol":
        return cls(value.n, (value,))

    @classmethod
    def scalar(cls, n: int, value) -> "BoundarySymbol":
        return cls(n, (CliffordElem.scalar(n, value),))

    @classmethod
    def xin_poly(cls, n: int, coeffs: Sequence, p: int = 0, q: int = 0) -> "BoundarySymbol":
        return cls(n, [c if isinstance(c, CliffordElem) else CliffordElem.scalar(n, c) for c in coeffs], p, q)

    @classmethod
    def norm_power(cls, n: int, m: int) -> "BoundarySymbol":
        """|xi|^(-2m) at |xi'| = 1 (m may be negative for numerator powers)."""
        if m >= 0:
            return cls(n, (CliffordElem.scalar(n, 1),), m, m)
        out = cls.scalar(n, 1)
        base = cls(n, _norm2_num(n))
        for _ in range(-m):
            out = out * base
        return out

    # -- queries
    def is_zero(self) -> bool:
        return not self.num

    def degree(self) -> int:
        return len(self.num) - 1

    def is_scalar(self) -> bool:
        return all(x.is_scalar() for x in self.num)

    def atoms(self) -> set:
        out = set()
        for x in self.num:
            out |= x.atoms()
        return out

    def coefficient(self, k: int) -> CliffordElem:
        return self.num[k] if k < len(self.num) else CliffordElem.zero(self.n)

    # -- arithmetic
    def _check(self, other: "BoundarySymbol"):
        if self.n != other.n:
            raise SymbolError(f"rank mismatch: {self.n} vs {other.n}")

    def _raised(self, P: int, Q: int):
        u = self.num
        if P > self.p:
            u = _pmul_scalar_poly(u, _linear_power(I, P - self.p), self.n)
        if Q > self.q:
            u = _pmul_scalar_poly(u, _linear_power(-I, Q - self.q), self.n)
        return u

    def __add__(self, other):
        if not isinstance(other, BoundarySymbol):
            other = _as_symbol(self.n, other)
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        P, Q = max(self.p, other.p), max(self.q, other.q)
        return BoundarySymbol(self.n, _padd(self._raised(P, Q), other._raised(P, Q), self.n), P, Q)

    __radd__ = __add__

    def __neg__(self):
        return BoundarySymbol(self.n, _pscale(self.num, -1), self.p, self.q)

    def __sub__(self, other):
        if not isinstance(other, BoundarySymbol):
            other = _as_symbol(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return _as_symbol(self.n, other) - self

    def __mul__(self, other):
        if isinstance(other, BoundarySymbol):
            return symbol_mul(self, other)
        if isinstance(other, CliffordElem):
            return symbol_mul(self, BoundarySymbol.constant(other))
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, CliffordElem):
            return symbol_mul(BoundarySymbol.constant(other), self)
        return self.scale(other)

    def scale(self, value) -> "BoundarySymbol":
        return BoundarySymbol(self.n, _pscale(self.num, value), self.p, self.q)

    def __eq__(self, other):
        if not isinstance(other, BoundarySymbol):
            return NotImplemented
        return (self.n, self.num, self.p, self.q) == (other.n, other.num, other.p, other.q)

    def __hash__(self):
        return hash((self.n, self.num, self.p, self.q))

    def map_coeffs(self, fn) -> "BoundarySymbol":
        """Apply a Poly -> Poly map to every coefficient (must commute with xi_n)."""
        return BoundarySymbol(self.n, _pmap(self.num, fn), self.p, self.q)

    def __repr__(self):
        from .dsl import format_symbol

        return f"BoundarySymbol(n={self.n}, {format_symbol(self)})"

    def __str__(self):
        from .dsl import format_symbol

        return format_symbol(self)


def _as_symbol(n: int, value) -> BoundarySymbol:
    if isinstance(value, BoundarySymbol):
        return value
    if isinstance(value, CliffordElem):
        return BoundarySymbol.constant(value)
    return BoundarySymbol.scalar(n, value)


def symbol_mul(x: BoundarySymbol, y: BoundarySymbol) -> BoundarySymbol:
    """Pointwise (noncommutative) product; pole orders add."""
    x._check(y)
    return BoundarySymbol(x.n, _pmul(x.num, y.num, x.n), x.p + y.p, x.q + y.q)


def d_xi_n(x: BoundarySymbol, times: int = 1) -> BoundarySymbol:
    """Exact derivative in xi_n by the quotient rule."""
    for _ in range(times):
        if x.is_zero():
            return x
        n, p, q = x.n, x.p, x.q
        # d/dxi [N (xi-i)^-p (xi+i)^-q] = [N'(xi-i)(xi+i) - pN(xi+i) - qN(xi-i)] / (...)^(p+1, q+1)
        one = ExactScalar(1)
        top = _pmul_scalar_poly(_pderiv(x.num), [one, 0, one], n)
        if p:
            top = _padd(top, _pmul_scalar_poly(x.num, [-p * I, ExactScalar(-p)], n), n)
        if q:
            top = _padd(top, _pmul_scalar_poly(x.num, [q * I, ExactScalar(-q)], n), n)
        x = BoundarySymbol(n, top, p + 1, q + 1)
    return x


# ---------------------------------------------------------------- derivative table


@dataclass(frozen=True)
class DerivativeTable:
    """First-order jet of the geometry at the boundary point x0.

    With g = h(x_n)^-1 g_boundary + dx_n^2 and an orthonormal frame:

    * d/dx_i of anything vanishes at x0 for tangential i;
    * d/dx_n c(xi') = (xi_prime_rate * h'(0)) c(xi') and
      d/dx_n |xi'|^2 = (2 * xi_prime_rate * h'(0)) |xi'|^2, i.e. every
      tangential covariable carries weight ``xi_prime_rate * h'(0)``;
    * d/dx_n a(j,alpha) = da(j,alpha), frame generators are constant;
    * sigma_0(D)(x0) = H = h_coeff * h'(0) c(e_n);
    * Gamma^n = gamma_n * h'(0), Gamma^k = 0, delta^n = 0,
      delta^k = delta_coeff * h'(0) c(e_k) c(e_n),
      d_n g^{ab} = dg_coeff * h'(0) delta^{ab} on tangential indices.
    """

    xi_prime_rate: Fraction = Fraction(1, 2)
    h_coeff: Fraction = Fraction(-3, 4)
    gamma_n: Fraction = Fraction(5, 2)
    delta_coeff: Fraction = Fraction(1, 4)
    dg_coeff: Fraction = Fraction(1)

    def H(self, n: int) -> CliffordElem:
        return CliffordElem.generator(n, n).scale(Poly.atom(h1) * self.h_coeff)

    def delta(self, n: int, k: int) -> CliffordElem:
        if k == n:
            return CliffordElem.zero(n)
        return (CliffordElem.generator(n, k) * CliffordElem.generator(n, n)).scale(
            Poly.atom(h1) * self.delta_coeff
        )

    def Gamma(self, n: int, k: int) -> Poly:
        return Poly.atom(h1) * self.gamma_n if k == n else Poly()


DEFAULT_TABLE = DerivativeTable()


def _xi_degree(monomial) -> int:
    return sum(e for atom, e in monomial if atom.kind == XI)


def _euler_xi(p: Poly) -> Poly:
    """sum over monomials of (xi'-degree) * monomial."""
    return p.map_monomials(lambda m, c: ((m, c * _xi_degree(m)),))


def _frame_derivative(p: Poly) -> Poly:
    """Leibniz rule with a(j,alpha) -> da(j,alpha)."""
    out = Poly()
    for atom in p.atoms():
        if atom.kind == A:
            out = out + p.diff(atom) * Poly.atom(Atom(DA, atom.i, atom.j))
    return out


def _norm_xi_prime_poly(n: int) -> Poly:
    out = Poly()
    for k in range(1, n):
        out = out + Poly.atom(xi_atom(k), 2)
    return out


def _norm2_num(n: int) -> tuple:
    """Numerator coefficients of |xi|^2 = |xi'|^2 + xi_n^2."""
    return (
        CliffordElem.scalar(n, _norm_xi_prime_poly(n)),
        CliffordElem.zero(n),
        CliffordElem.scalar(n, 1),
    )


def d_x_n(x: BoundarySymbol, table: DerivativeTable = DEFAULT_TABLE) -> BoundarySymbol:
    """Normal derivative at x0.

    The denominator must be a pure power of |xi|^2 (p == q); the numerator is
    differentiated with the table's weight on tangential covariables and the
    frame rule a -> da.  Symbols that already carry h'(0) or da atoms would
    need second-order jet data and are rejected.
    """
    if x.is_zero():
        return x
    n = x.n
    for atom in x.atoms():
        if atom.kind in (DA, HPRIME):
            raise SymbolError("derivative table exhausted: second normal derivative requested")
    if x.p != x.q:
        raise SymbolError("d_x_n needs a denominator that is a power of |xi|^2 (p == q)")
    m = x.p
    rate = Poly.atom(h1) * table.xi_prime_rate
    # (rate) * xi'.grad_xi' acting on N / |xi|^(2m), plus the frame part
    dnum = _strip(
        [c.map_coeffs(lambda p: _euler_xi(p) * rate + _frame_derivative(p)) for c in x.num]
    )
    norm2 = _norm2_num(n)
    top = _pmul(dnum, norm2, n)
    if m:
        radial = CliffordElem.scalar(n, _norm_xi_prime_poly(n) * rate * (-2 * m))
        top = _padd(top, _pmul(x.num, (radial,), n), n)
    return BoundarySymbol(n, top, m + 1, m + 1)


def d_x_tangential(x: BoundarySymbol, k: int, table: DerivativeTable = DEFAULT_TABLE) -> BoundarySymbol:
    """d/dx_k for k < n vanishes at x0 in the chosen coordinates."""
    if not 1 <= k < x.n:
        raise SymbolError(f"tangential index {k} outside 1..{x.n - 1}")
    return BoundarySymbol(x.n)


# ---------------------------------------------------------------- projections and residues


def _principal_part(x: BoundarySymbol, root: ExactScalar, order: int, other_order: int):
    """Laurent coefficients s_0..s_{order-1} of num/(xi+root)^other at xi = root.

    Returns the list ``s`` with ``x = sum_m s_m (xi-root)^(m-order) + regular``.
    """
    n = x.n
    shifted = _taylor_shift(x.num, root, n)  # num(root + t)
    # (xi - other_root)^(-other) with other_root = -root: (2 root + t)^(-other)
    base = 2 * root
    series = [
        ExactScalar(_binom_neg(other_order, m_)) * base ** (-other_order - m_) for m_ in range(order)
    ]
    out = []
    for m_ in range(order):
        acc = CliffordElem.zero(n)
        for k in range(0, m_ + 1):
            if k < len(shifted) and series[m_ - k]:
                acc = acc + shifted[k].scale(series[m_ - k])
        out.append(acc)
    return out


def _binom_neg(q: int, m: int) -> int:
    """Coefficient of u^m in (1 + u)^(-q)."""
    return (-1) ** m * comb(q + m - 1, m) if q else (1 if m == 0 else 0)


def _check_proper(x: BoundarySymbol):
    if x.num and x.degree() >= x.p + x.q:
        raise SymbolError("polynomial part present: pi_plus needs a proper rational symbol")


def _assemble(x: BoundarySymbol, coeffs, root: ExactScalar, order: int, plus: bool) -> BoundarySymbol:
    n = x.n
    # sum_m s_m (xi - root)^m  as a polynomial in xi
    total = ()
    for m_, s in enumerate(coeffs):
        if s.is_zero():
            continue
        total = _padd(total, _pmul_scalar_poly((s,), _linear_power(root, m_), n), n)
    if plus:
        return BoundarySymbol(n, total, order, 0)
    return BoundarySymbol(n, total, 0, order)


def pi_plus(x: BoundarySymbol) -> BoundarySymbol:
    """Keep the partial-fraction terms with poles at xi_n = +i."""
    _check_proper(x)
    if x.is_zero() or x.p == 0:
        return BoundarySymbol(x.n)
    return _assemble(x, _principal_part(x, I, x.p, x.q), I, x.p, True)


def pi_minus(x: BoundarySymbol) -> BoundarySymbol:
    """Complementary projection: the terms with poles at xi_n = -i."""
    _check_proper(x)
    if x.is_zero() or x.q == 0:
        return BoundarySymbol(x.n)
    mirrored = BoundarySymbol.__new__(BoundarySymbol)
    mirrored.n, mirrored.num, mirrored.p, mirrored.q = x.n, x.num, x.q, x.p
    return _assemble(x, _principal_part(mirrored, -I, x.q, x.p), -I, x.q, False)


def trace_symbol(x: BoundarySymbol) -> BoundarySymbol:
    """Apply the Clifford trace to every coefficient."""
    n = x.n
    return BoundarySymbol(n, [CliffordElem.scalar(n, clifford_trace(c)) for c in x.num], x.p, x.q)


def integrate_gamma_plus_clifford(x: BoundarySymbol) -> CliffordElem:
    """Integral over the real xi_n line, closed through the upper half plane."""
    if x.is_zero():
        return CliffordElem.zero(x.n)
    if x.degree() > x.p + x.q - 2:
        raise SymbolError("non-integrable at infinity: numerator degree too high")
    if x.p == 0:
        return CliffordElem.zero(x.n)
    residue = _principal_part(x, I, x.p, x.q)[x.p - 1]
    return residue.scale(Poly.atom(pi_atom) * (2 * I))


def integrate_gamma_plus(x: BoundarySymbol) -> Poly:
    """2 pi i Res_{xi_n = i} of a scalar symbol, as a Poly in the ``pi`` atom."""
    if not x.is_scalar():
        raise SymbolError("integrate_gamma_plus expects scalar (traced) coefficients")
    return integrate_gamma_plus_clifford(x).scalar_part()


# ---------------------------------------------------------------- sphere


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def _moment(exps: Sequence[int], m: int) -> Fraction:
    if any(e % 2 for e in exps):
        return Fraction(0)
    d = sum(exps) // 2
    num = 1
    for e in exps:
        num *= _double_factorial(e - 1)
    den = 1
    for t in range(1, d + 1):
        den *= m + 2 * t - 2
    return Fraction(num, den)


def sphere_average(p: Poly, m: int, with_omega: bool = True) -> Poly:
    """Integrate the xi' dependence over the unit sphere in R^m.

    Each xi-monomial is replaced by its mean over the sphere times the
    ``Omega`` atom (the total sphere volume).  With ``with_omega=False`` the
    plain mean is returned.
    """
    om = Poly.atom(omega) if with_omega else Poly.const(1)

    def fn(mono, c):
        rest = []
        exps = []
        for atom, e in mono:
            if atom.kind == XI:
                if not 1 <= atom.i <= m:
                    raise SymbolError(f"xi({atom.i}) outside the ambient dimension {m}")
                exps.append(e)
            else:
                rest.append((atom, e))
        w = _moment(exps, m)
        if not w:
            return ()
        return ((tuple(rest), c * w),)

    return p.map_monomials(fn) * om


def sphere_average_symbol(x: BoundarySymbol, with_omega: bool = True) -> BoundarySymbol:
    m = x.n - 1
    return x.map_coeffs(lambda p: sphere_average(p, m, with_omega))


def sphere_reduce(p: Poly, m: int) -> Poly:
    """Normal form modulo xi_1^2 + ... + xi_m^2 - 1 (xi_m has degree < 2)."""
    last = xi_atom(m)
    sub = Poly.const(1)
    for k in range(1, m):
        sub = sub - Poly.atom(xi_atom(k), 2)
    powers = {0: Poly.const(1)}
    out = Poly()
    for e, coeff in p.collect(last).items():
        qd, r = divmod(e, 2)
        if qd not in powers:
            powers[qd] = sub**qd
        out = out + coeff * powers[qd] * Poly.atom(last, r)
    return out


def sphere_reduce_symbol(x: BoundarySymbol) -> BoundarySymbol:
    m = x.n - 1
    return x.map_coeffs(lambda p: sphere_reduce(p, m))


# ---------------------------------------------------------------- builders


def c_xi_prime(n: int) -> CliffordElem:
    """c(xi') = sum_{k<n} xi_k c(e_k)."""
    return clifford_from_vector([Poly.atom(xi_atom(k)) for k in range(1, n)] + [Poly()])


def norm_xi_prime(n: int) -> Poly:
    return _norm_xi_prime_poly(n)


def c_xi(n: int) -> BoundarySymbol:
    """c(xi) = c(xi') + xi_n c(e_n) as a polynomial symbol."""
    return BoundarySymbol(n, (c_xi_prime(n), CliffordElem.generator(n, n)))


SYMBOL_NAMES = (
    "sigma1(D)",
    "sigma0(D)",
    "sigma-1(D^-1)",
    "sigma-2(D^-1)",
    "sigma-2(D^-2)",
    "sigma-3(D^-2)",
)


def build_symbol(name: str, n: int, table: DerivativeTable = DEFAULT_TABLE) -> BoundarySymbol:
    """Symbols of D, D^-1 and D^-2 at x0 (first-order jet from ``table``)."""
    if n not in (4, 6):
        raise SymbolError(f"symbols are provided for n in {{4, 6}}, got {n}")
    cx = c_xi(n)
    inv_norm = BoundarySymbol.norm_power(n, 1)
    if name == "sigma1(D)":
        return cx.scale(I)
    if name == "sigma0(D)":
        return BoundarySymbol.constant(table.H(n))
    if name == "sigma-1(D^-1)":
        return (cx * inv_norm).scale(I)
    if name == "sigma-2(D^-1)":
        H = BoundarySymbol.constant(table.H(n))
        cn = BoundarySymbol.constant(CliffordElem.generator(n, n))
        hp = Poly.atom(h1)
        dc_xi_prime = BoundarySymbol.constant(c_xi_prime(n).scale(hp * table.xi_prime_rate))
        d_norm = BoundarySymbol.scalar(n, norm_xi_prime(n) * hp * (2 * table.xi_prime_rate))
        norm2 = BoundarySymbol.norm_power(n, -1)
        first = cx * H * cx * BoundarySymbol.norm_power(n, 2)
        # only j = n survives at x0
        second = cx * cn * (dc_xi_prime * norm2 - cx * d_norm) * BoundarySymbol.norm_power(n, 3)
        return first + second
    if name == "sigma-2(D^-2)":
        return inv_norm
    if name == "sigma-3(D^-2)":
        hp = Poly.atom(h1)
        # xi_k (Gamma^k - 2 delta^k), summed over all k
        lin = CliffordElem.zero(n)
        for k in range(1, n):
            term = CliffordElem.scalar(n, table.Gamma(n, k)) - table.delta(n, k).scale(2)
            lin = lin + term.scale(Poly.atom(xi_atom(k)))
        tang = BoundarySymbol.constant(lin)
        normal = BoundarySymbol(
            n,
            (
                CliffordElem.zero(n),
                CliffordElem.scalar(n, table.Gamma(n, n)) - table.delta(n, n).scale(2),
            ),
        )
        first = (tang + normal) * BoundarySymbol.norm_power(n, 2)
        # xi^j xi_a xi_b d_j g^{ab}: only j = n, tangential a = b
        metric = BoundarySymbol(
            n,
            (CliffordElem.zero(n), CliffordElem.scalar(n, norm_xi_prime(n) * hp * table.dg_coeff)),
        )
        second = metric * BoundarySymbol.norm_power(n, 3)
        return first.scale(-I) + second.scale(-2 * I)
    raise SymbolError(f"unknown symbol name {name!r}; expected one of {SYMBOL_NAMES}")


@lru_cache(maxsize=None)
def L_word(n: int, l: int) -> CliffordElem:
    """L = c(X_1) c(X_2) ... c(X_l) with symbolic frame components."""
    if not 0 <= l <= n:
        raise SymbolError(f"word length l={l} outside 0..{n}")
    out = CliffordElem.scalar(n, 1)
    for j in range(1, l + 1):
        out = out * vector_X(n, j)
    return out


def apply_L(l: int, x: BoundarySymbol) -> BoundarySymbol:
    """Left-multiply by L = c(X_1)...c(X_l)."""
    return BoundarySymbol.constant(L_word(x.n, l)) * x


@lru_cache(maxsize=None)
def dL_word(n: int, l: int) -> CliffordElem:
    """d/dx_n of L at x0: sum over j of the word with c(X_j) replaced by c(dX_j/dx_n)."""
    if not 0 <= l <= n:
        raise SymbolError(f"word length l={l} outside 0..{n}")
    out = CliffordElem.zero(n)
    for j in range(1, l + 1):
        w = CliffordElem.scalar(n, 1)
        for jj in range(1, l + 1):
            w = w * (vector_X(n, jj, da) if jj == j else vector_X(n, jj))
        out = out + w
    return out


def sum_symbols(items: Iterable[BoundarySymbol], n: int) -> BoundarySymbol:
    out = BoundarySymbol(n)
    for x in items:
        out = out + x
    return out


def inverse_defects(
    n: int, table: DerivativeTable = DEFAULT_TABLE, zero_sigma0: bool = False
) -> dict[int, BoundarySymbol]:
    """Orders 0 and -1 of sigma(D) # sigma(D^-1) - 1, reduced on |xi'| = 1.

    Both entries vanish when the D^-1 symbols are consistent with ``table``.
    Only the normal direction contributes to the composition term at x0.
    ``zero_sigma0`` drops sigma_0(D) from the composition (a negative control).
    """
    s1 = build_symbol("sigma1(D)", n, table)
    s0 = build_symbol("sigma0(D)", n, table)
    if zero_sigma0:
        s0 = BoundarySymbol(n)
    m1 = build_symbol("sigma-1(D^-1)", n, table)
    m2 = build_symbol("sigma-2(D^-1)", n, table)
    order0 = s1 * m1 - BoundarySymbol.scalar(n, 1)
    order1 = s1 * m2 + s0 * m1 + (d_xi_n(s1) * d_x_n(m1, table)).scale(-I)
    return {0: sphere_reduce_symbol(order0), -1: sphere_reduce_symbol(order1)}
