"""Rank-n Clifford algebra over :class:`Poly` with c(e_i)c(e_j) + c(e_j)c(e_i) = -2 delta_ij.

Basis words are stored as bitmasks: bit ``k-1`` set means the generator
``c(e_k)`` occurs.  The trace functional is the normalised spinor trace,
``tau(1) = 2**(n/2)`` and ``tau(e_S) = 0`` for every nonempty word.

A concrete matrix representation (:func:`gamma_rep`) is provided only as a
brute-force oracle; nothing in the symbolic path depends on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exact import ExactScalar, Poly, a as a_atom, poly_eval_numeric

__all__ = [
    "CliffordElem",
    "GammaRep",
    "clifford_mul",
    "clifford_trace",
    "clifford_trace_pair",
    "clifford_from_vector",
    "wick_trace",
    "perfect_matchings",
    "gamma_rep",
    "matrix_of",
    "matrix_trace_oracle",
    "word",
    "vector_X",
]


def _popcount(x: int) -> int:
    return bin(x).count("1")


@lru_cache(maxsize=None)
def _blade_sign(s: int, t: int) -> int:
    """Sign of e_S e_T = sign * e_{S xor T} under e_i^2 = -1."""
    swaps = 0
    tt = t
    while tt:
        low = tt & -tt
        # generators of S sitting to the right of this T generator after reordering
        swaps += _popcount(s & ~((low << 1) - 1))
        tt ^= low
    swaps += _popcount(s & t)
    return -1 if swaps & 1 else 1


def _mask_to_indices(mask: int) -> tuple[int, ...]:
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


class CliffordElem:
    """Element of the rank-``n`` Clifford algebra with :class:`Poly` coefficients."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[int, Poly] | None = None):
        self.n = n
        self.coeffs = {m: Poly.coerce(c) for m, c in (coeffs or {}).items() if c}

    @staticmethod
    def _raw(n: int, coeffs: dict) -> "CliffordElem":
        out = CliffordElem.__new__(CliffordElem)
        out.n = n
        out.coeffs = coeffs
        return out

    @classmethod
    def scalar(cls, n: int, value) -> "CliffordElem":
        p = Poly.coerce(value)
        return cls._raw(n, {0: p} if p else {})

    @classmethod
    def zero(cls, n: int) -> "CliffordElem":
        return cls._raw(n, {})

    @classmethod
    def generator(cls, n: int, k: int) -> "CliffordElem":
        if not 1 <= k <= n:
            raise ValueError(f"generator index {k} outside 1..{n}")
        return cls._raw(n, {1 << (k - 1): Poly.const(1)})

    # -- queries
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def grades(self) -> set[int]:
        return {_popcount(m) for m in self.coeffs}

    def is_scalar(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {0}

    def scalar_part(self) -> Poly:
        return self.coeffs.get(0, Poly())

    def grade_part(self, k: int) -> "CliffordElem":
        return CliffordElem._raw(self.n, {m: c for m, c in self.coeffs.items() if _popcount(m) == k})

    def vector_components(self) -> list[Poly]:
        """Components of a grade-1 element, in generator order."""
        if any(_popcount(m) != 1 for m in self.coeffs):
            raise ValueError("element is not grade-1")
        return [self.coeffs.get(1 << k, Poly()) for k in range(self.n)]

    def atoms(self) -> set:
        out = set()
        for c in self.coeffs.values():
            out |= c.atoms()
        return out

    # -- arithmetic
    def _check(self, other: "CliffordElem"):
        if self.n != other.n:
            raise ValueError(f"rank mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, CliffordElem):
            other = CliffordElem.scalar(self.n, other)
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return CliffordElem._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return CliffordElem._raw(self.n, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, CliffordElem):
            other = CliffordElem.scalar(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return CliffordElem.scalar(self.n, other) - self

    def __mul__(self, other):
        if isinstance(other, CliffordElem):
            return clifford_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        # scalars and Polys commute with everything
        return self.scale(other)

    def scale(self, value) -> "CliffordElem":
        p = Poly.coerce(value)
        if not p:
            return CliffordElem._raw(self.n, {})
        if p.is_constant():
            c = p.constant_value()
            return CliffordElem._raw(self.n, {m: v.scale(c) for m, v in self.coeffs.items()})
        out = {}
        for m, v in self.coeffs.items():
            w = v * p
            if w:
                out[m] = w
        return CliffordElem._raw(self.n, out)

    def map_coeffs(self, fn) -> "CliffordElem":
        out = {}
        for m, c in self.coeffs.items():
            w = fn(c)
            if w:
                out[m] = w
        return CliffordElem._raw(self.n, out)

    def __eq__(self, other):
        if not isinstance(other, CliffordElem):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m in sorted(self.coeffs, key=lambda m: (_popcount(m), _mask_to_indices(m))):
            c = self.coeffs[m]
            w = "*".join(f"c(e{k})" for k in _mask_to_indices(m))
            if not w:
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*{w}")
        return " + ".join(parts)

    def __repr__(self):
        return f"CliffordElem(n={self.n}, {self})"


def clifford_mul(x: CliffordElem, y: CliffordElem) -> CliffordElem:
    """Canonical-form product, bilinear over Poly."""
    x._check(y)
    out: dict = {}
    for s, cs in x.coeffs.items():
        for t, ct in y.coeffs.items():
            term = cs * ct
            if not term:
                continue
            if _blade_sign(s, t) < 0:
                term = -term
            m = s ^ t
            v = out.get(m)
            out[m] = term if v is None else v + term
    return CliffordElem._raw(x.n, {m: c for m, c in out.items() if c})


def clifford_trace(x: CliffordElem) -> Poly:
    """tau(x): 2**(n/2) times the scalar part."""
    return x.scalar_part().scale(2 ** (x.n // 2))


def clifford_trace_pair(x: CliffordElem, y: CliffordElem) -> Poly:
    """tau(x y) without forming the full product."""
    x._check(y)
    out = Poly()
    for s, cs in x.coeffs.items():
        ct = y.coeffs.get(s)
        if ct is None:
            continue
        term = cs * ct
        out = out + (term if _blade_sign(s, s) > 0 else -term)
    return out.scale(2 ** (x.n // 2))


def clifford_from_vector(components: Sequence) -> CliffordElem:
    """sum_alpha components[alpha] * c(e_alpha)."""
    n = len(components)
    coeffs = {}
    for k, c in enumerate(components):
        p = Poly.coerce(c)
        if p:
            coeffs[1 << k] = p
    return CliffordElem._raw(n, coeffs)


def word(n: int, *indices: int) -> CliffordElem:
    """c(e_{i1}) c(e_{i2}) ... as a CliffordElem (indices in any order)."""
    out = CliffordElem.scalar(n, 1)
    for k in indices:
        out = out * CliffordElem.generator(n, k)
    return out


def vector_X(n: int, j: int, atom_fn=a_atom) -> CliffordElem:
    """c(X_j) = sum_alpha a_{j alpha} c(e_alpha) with symbolic components."""
    return clifford_from_vector([Poly.atom(atom_fn(j, alpha)) for alpha in range(1, n + 1)])


def perfect_matchings(items: Sequence[int]):
    """Yield ``(sign, pairs)`` for every perfect matching of ``items``.

    The sign is that of the permutation listing the pairs in order, each pair
    written (first, partner).
    """
    if not items:
        yield 1, ()
        return
    first, rest = items[0], items[1:]
    for k, partner in enumerate(rest):
        sign = -1 if k % 2 else 1
        remaining = rest[:k] + rest[k + 1 :]
        for s, pairs in perfect_matchings(remaining):
            yield sign * s, ((first, partner),) + pairs


def _dot(u: list[Poly], v: list[Poly]) -> Poly:
    out = Poly()
    for x, y in zip(u, v):
        if x and y:
            out = out + x * y
    return out


def wick_trace(vectors: Sequence[CliffordElem]) -> Poly:
    """Trace of a product of grade-1 elements via the signed pairing sum."""
    if not vectors:
        raise ValueError("empty product")
    n = vectors[0].n
    if len(vectors) % 2:
        return Poly()
    comps = [v.vector_components() for v in vectors]
    gram: dict = {}

    def g(p, q):
        key = (p, q)
        if key not in gram:
            gram[key] = _dot(comps[p], comps[q])
        return gram[key]

    total = Poly()
    k = len(vectors) // 2
    for sign, pairs in perfect_matchings(tuple(range(len(vectors)))):
        term = Poly.const(sign * (-1) ** k)
        for p, q in pairs:
            term = term * g(p, q)
            if not term:
                break
        total = total + term
    return total.scale(2 ** (n // 2))


# ---------------------------------------------------------------- matrix oracle


@dataclass(frozen=True)
class GammaRep:
    """Matrices gamma_1..gamma_n of size 2**(n/2) with gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij.

    All entries lie in {0, +-1, +-i}, so complex128 arithmetic on products of
    them is exact.
    """

    n: int
    gammas: tuple

    @property
    def dim(self) -> int:
        return 2 ** (self.n // 2)

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def word_matrix(self, mask: int) -> np.ndarray:
        return _word_matrix(self.n, mask)

    def exact_entries(self, k: int) -> list[list[ExactScalar]]:
        m = self.gammas[k - 1]
        return [[ExactScalar(int(z.real), int(z.imag)) for z in row] for row in m]


@lru_cache(maxsize=None)
def gamma_rep(n: int) -> GammaRep:
    """Iterated tensor products of i*sigma_x, i*sigma_y with sigma_z strings."""
    if n % 2 or n < 2:
        raise ValueError(f"gamma_rep needs an even rank >= 2, got {n}")
    if n > 10:
        raise ValueError("gamma_rep supports n <= 10")
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    e2 = np.eye(2, dtype=complex)
    half = n // 2
    mats = []
    for k in range(half):
        for s in (sx, sy):
            m = np.eye(1, dtype=complex)
            for factor in [sz] * k + [s] + [e2] * (half - k - 1):
                m = np.kron(m, factor)
            m = 1j * m
            m.setflags(write=False)
            mats.append(m)
    return GammaRep(n, tuple(mats))


@lru_cache(maxsize=None)
def _word_matrix(n: int, mask: int) -> np.ndarray:
    rep = gamma_rep(n)
    m = rep.identity()
    for k in _mask_to_indices(mask):
        m = m @ rep.gammas[k - 1]
    m.setflags(write=False)
    return m


def matrix_of(x: CliffordElem, assignment: Mapping) -> np.ndarray:
    """Numeric matrix of ``x`` in the gamma representation."""
    rep = gamma_rep(x.n)
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for mask, c in x.coeffs.items():
        out += poly_eval_numeric(c, assignment) * _word_matrix(x.n, mask)
    return out


def matrix_trace_oracle(x: CliffordElem, assignment: Mapping) -> complex:
    return complex(np.trace(matrix_of(x, assignment)))


def product(elems: Iterable[CliffordElem]) -> CliffordElem:
    it = iter(elems)
    out = next(it)
    for e in it:
        out = out * e
    return out
