"""Interior and boundary terms of the generalized residue, case by case.

Two settings ship: ``DIM4_DINV`` (n = 4, pi^+(L D^-1) o pi^+(D^-1)) and
``DIM6_DM2`` (n = 6, pi^+(L D^-2) o pi^+(D^-2)).  The boundary term is a sum
over cases (r, l, |alpha|, j, k) fixed by an order constraint; each case is

    (-i)^(|alpha|+j+k+1) / (alpha! (j+k+1)!)
      * int_{|xi'|=1} int_R tr[ d_xn^j d_xi'^alpha d_xin^k pi^+ sigma_r(L D^-p)
                                * d_x'^alpha d_xin^(j+1) d_xn^k sigma_l(D^-p) ] dxin

reported as a polynomial coefficient of dx' (the ``pi`` and ``Omega`` atoms
appear explicitly).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterable

from .clifford import CliffordElem, clifford_trace_pair, wick_trace, vector_X
from .dsl import parse_symbol
from .exact import ExactScalar, I, Poly, h1, pi, scurv
from .expected import CHECKPOINT_TEXT, PaperExpected
from .gform import g_pair, normal_derivative
from .reports import VerificationReport
from .symbols import (
    DEFAULT_TABLE,
    BoundarySymbol,
    DerivativeTable,
    L_word,
    SymbolError,
    apply_L,
    build_symbol,
    c_xi,
    d_x_n,
    d_x_tangential,
    d_xi_n,
    dL_word,
    integrate_gamma_plus,
    integrate_gamma_plus_clifford,
    inverse_defects,
    norm_xi_prime,
    pi_plus,
    sphere_average_symbol,
    trace_symbol,
)

__all__ = [
    "Setting",
    "SETTINGS",
    "CaseSpec",
    "enumerate_cases",
    "find_case",
    "boundary_case",
    "boundary_total",
    "interior_term",
    "theorem_report",
    "case_reports",
    "verify_symbol_inverse",
    "CHECKPOINTS",
    "checkpoint_value",
    "checkpoint_expected",
    "audit",
]


@dataclass(frozen=True)
class Setting:
    key: str
    n: int
    power: int
    symbols: tuple  # ((order, symbol name), ...) for D^-power, principal first

    @property
    def orders(self) -> tuple:
        return tuple(o for o, _ in self.symbols)

    def symbol_name(self, order: int) -> str:
        return dict(self.symbols)[order]


DIM4_DINV = Setting("DIM4_DINV", 4, 1, ((-1, "sigma-1(D^-1)"), (-2, "sigma-2(D^-1)")))
DIM6_DM2 = Setting("DIM6_DM2", 6, 2, ((-2, "sigma-2(D^-2)"), (-3, "sigma-3(D^-2)")))
SETTINGS = {s.key: s for s in (DIM4_DINV, DIM6_DM2)}


def _setting(setting) -> Setting:
    if isinstance(setting, Setting):
        return setting
    try:
        return SETTINGS[setting]
    except KeyError:
        raise ValueError(f"unknown setting {setting!r}; expected one of {sorted(SETTINGS)}") from None


@dataclass(frozen=True)
class CaseSpec:
    setting: str
    r: int
    ell: int
    k: int
    j: int
    alpha: int
    label: str

    def prefactor(self) -> ExactScalar:
        # alpha! = 1 for |alpha| <= 1, the only multi-indices that occur
        return (-I) ** (self.alpha + self.j + self.k + 1) / factorial(self.j + self.k + 1)


def enumerate_cases(setting) -> list[CaseSpec]:
    """All (r, l, |alpha|, j, k) allowed by r + l - k - j - |alpha| = 1 - n.

    Labels: with both orders principal the single derivative decides
    (aI: |alpha|, aII: j, aIII: k); of the two mixed cases ``b`` is the one
    whose left order is -2 and ``c`` the other.
    """
    s = _setting(setting)
    principal = s.orders[0]
    out = []
    for r in s.orders:
        for ell in s.orders:
            budget = r + ell + s.n - 1
            if budget < 0:
                continue
            for alpha in range(budget + 1):
                for j in range(budget - alpha + 1):
                    k = budget - alpha - j
                    if r == ell == principal:
                        if budget != 1:
                            raise SymbolError("unexpected derivative budget for the principal pair")
                        label = "aI" if alpha else ("aII" if j else "aIII")
                    else:
                        label = "b" if r == -2 else "c"
                    out.append(CaseSpec(s.key, r, ell, k, j, alpha, label))
    order = {"aI": 0, "aII": 1, "aIII": 2, "b": 3, "c": 4}
    return sorted(out, key=lambda c: order[c.label])


def find_case(setting, label: str) -> CaseSpec:
    for c in enumerate_cases(setting):
        if c.label == label:
            return c
    raise ValueError(f"no case {label!r} in {setting}")


def _check_l(s: Setting, l: int):
    if not 1 <= l <= s.n:
        raise ValueError(f"l={l} outside 1..{s.n}")


def _right_symbol(s: Setting, case: CaseSpec, table: DerivativeTable) -> BoundarySymbol | None:
    right = build_symbol(s.symbol_name(case.ell), s.n, table)
    if case.alpha:
        # every tangential x-derivative of the jet vanishes at x0
        parts = [d_x_tangential(right, t, table) for t in range(1, s.n)]
        if all(p.is_zero() for p in parts):
            return None
        raise SymbolError("derivative table exhausted: tangential x-derivatives are not modelled")
    for _ in range(case.k):
        right = d_x_n(right, table)
    return d_xi_n(right, case.j + 1)


@lru_cache(maxsize=None)
def _kernels(key: str, label: str, table: DerivativeTable) -> tuple:
    """Integrated kernels (C_L, C_dL) with value = tau(L C_L) + tau(dL C_dL)."""
    s = SETTINGS[key]
    case = find_case(key, label)
    right = _right_symbol(s, case, table)
    zero = CliffordElem.zero(s.n)
    if right is None:
        return zero, zero
    base = build_symbol(s.symbol_name(case.r), s.n, table)
    # d_xn (L S) = dL S + L d_xn S; track the L and dL parts separately
    parts = {0: base}
    for _ in range(case.j):
        if 1 in parts:
            raise SymbolError("derivative table exhausted: second normal derivative of L")
        parts = {0: d_x_n(parts[0], table), 1: parts[0]}
    out = []
    for which in (0, 1):
        if which not in parts:
            out.append(zero)
            continue
        left = d_xi_n(pi_plus(parts[which]), case.k)
        integrand = sphere_average_symbol(left * right)
        out.append(integrate_gamma_plus_clifford(integrand).scale(case.prefactor()))
    return tuple(out)


def _direct(s: Setting, case: CaseSpec, l: int, table: DerivativeTable) -> Poly:
    right = _right_symbol(s, case, table)
    if right is None:
        return Poly()
    left = apply_L(l, build_symbol(s.symbol_name(case.r), s.n, table))
    for _ in range(case.j):
        left = d_x_n(left, table)
    left = d_xi_n(pi_plus(left), case.k)
    t = sphere_average_symbol(trace_symbol(left * right))
    return integrate_gamma_plus(t).scale(case.prefactor())


def boundary_case(setting, case: CaseSpec | str, l: int, route: str = "factored",
                  table: DerivativeTable = DEFAULT_TABLE) -> Poly:
    """Coefficient of dx' for one boundary case.

    ``route="factored"`` integrates the L-independent kernels once and pairs
    them with the words L and dL; ``route="direct"`` multiplies L in first and
    runs the whole chain on the product (slow for large l, kept as a check).
    """
    s = _setting(setting)
    _check_l(s, l)
    if isinstance(case, str):
        case = find_case(s.key, case)
    if route == "direct":
        return _direct(s, case, l, table)
    if route != "factored":
        raise ValueError(f"unknown route {route!r}")
    c_l, c_dl = _kernels(s.key, case.label, table)
    value = clifford_trace_pair(L_word(s.n, l), c_l)
    if not c_dl.is_zero():
        value = value + clifford_trace_pair(dL_word(s.n, l), c_dl)
    return value


def boundary_total(setting, l: int, table: DerivativeTable = DEFAULT_TABLE) -> Poly:
    s = _setting(setting)
    out = Poly()
    for case in enumerate_cases(s):
        out = out + boundary_case(s, case, l, table=table)
    return out


def interior_term(setting, l: int) -> Poly:
    """(n-2)(4 pi)^(n/2)/(n/2-1)! * (-1/12) * s * tr[c(X_1)...c(X_l)]."""
    s = _setting(setting)
    _check_l(s, l)
    n = s.n
    const = ExactScalar((n - 2) * 4 ** (n // 2)) / factorial(n // 2 - 1) * ExactScalar(-1) / 12
    tr = wick_trace([vector_X(n, j) for j in range(1, l + 1)])
    return (tr * Poly.atom(scurv) * Poly.atom(pi, n // 2)).scale(const)


def case_reports(setting, l: int, expected: PaperExpected | None = None) -> list[VerificationReport]:
    """Exact comparison of every case, the total and the interior term."""
    s = _setting(setting)
    expected = expected or PaperExpected()
    out = []
    total = Poly()
    for case in enumerate_cases(s):
        value = boundary_case(s, case, l)
        total = total + value
        e = expected.get(s.key, case.label, l)
        out.append(VerificationReport.compare(s.key, l, case.label, value, e.value, tag=e.tag))
    e = expected.get(s.key, "TOTAL", l)
    out.append(VerificationReport.compare(s.key, l, "TOTAL", total, e.value, tag=e.tag))
    e = expected.get(s.key, "INTERIOR", l)
    out.append(VerificationReport.compare(s.key, l, "INTERIOR", interior_term(s, l), e.value, tag=e.tag))
    return out


@dataclass
class TheoremReport:
    interior: VerificationReport
    boundary: VerificationReport

    @property
    def exact_match(self) -> bool:
        return self.interior.exact_match and self.boundary.exact_match

    @property
    def components(self) -> list[VerificationReport]:
        return [self.interior, self.boundary]


def theorem_report(setting, l: int, expected: PaperExpected | None = None) -> TheoremReport:
    s = _setting(setting)
    expected = expected or PaperExpected()
    ei = expected.get(s.key, "THEOREM_INTERIOR", l)
    eb = expected.get(s.key, "THEOREM_BOUNDARY", l)
    return TheoremReport(
        VerificationReport.compare(s.key, l, "THEOREM_INTERIOR", interior_term(s, l), ei.value, tag=ei.tag),
        VerificationReport.compare(s.key, l, "THEOREM_BOUNDARY", boundary_total(s, l), eb.value, tag=eb.tag),
    )


def verify_symbol_inverse(n: int = 4, table: DerivativeTable = DEFAULT_TABLE,
                          zero_sigma0: bool = False) -> list[VerificationReport]:
    """Orders 0 and -1 of sigma(D) # sigma(D^-1) - 1 must vanish exactly."""
    out = []
    zero = BoundarySymbol(n)
    for order, defect in inverse_defects(n, table, zero_sigma0).items():
        out.append(
            VerificationReport.compare(
                f"n={n}", None, f"inverse order {order}", defect, zero, kind="symbol", n=n,
                note="" if defect.is_zero() else "nonzero composition defect",
            )
        )
    return out


# ---------------------------------------------------------------- checkpoints


@dataclass(frozen=True)
class CheckpointSpec:
    """tr[left * right] as a function of xin, averaged over |xi'| = 1.

    Each side is (symbol, with_L, x_derivs, pi_plus, xi_derivs) applied in
    the order: multiply by L, d_xn, pi^+, d_xin.  The symbol ``E2`` is the
    h'-part h' c(xi) c(dxn) c(xi) |xi'|^2 / |xi|^6 of sigma_-2(D^-1); ``E1``
    is sigma_-2(D^-1) + E2.
    """

    tag: str
    setting: str
    left: tuple
    right: tuple


CHECKPOINTS = {
    "33": CheckpointSpec("33", "DIM4_DINV", ("sigma-1(D^-1)", True, 1, True, 0), ("sigma-1(D^-1)", False, 0, False, 2)),
    "39": CheckpointSpec("39", "DIM4_DINV", ("sigma-1(D^-1)", True, 0, True, 1), ("sigma-1(D^-1)", False, 1, False, 1)),
    "55": CheckpointSpec("55", "DIM4_DINV", ("E2", True, 0, True, 0), ("sigma-1(D^-1)", False, 0, False, 1)),
    "56": CheckpointSpec("56", "DIM4_DINV", ("E1", True, 0, True, 0), ("sigma-1(D^-1)", False, 0, False, 1)),
    "71": CheckpointSpec("71", "DIM4_DINV", ("sigma-1(D^-1)", True, 0, True, 0), ("sigma-2(D^-1)", False, 0, False, 1)),
    "871": CheckpointSpec("871", "DIM6_DM2", ("sigma-2(D^-2)", True, 1, True, 0), ("sigma-2(D^-2)", False, 0, False, 2)),
    "c21": CheckpointSpec("c21", "DIM6_DM2", ("sigma-2(D^-2)", True, 0, True, 2), ("sigma-2(D^-2)", False, 1, False, 0)),
    "c25": CheckpointSpec("c25", "DIM6_DM2", ("sigma-2(D^-2)", True, 0, True, 1), ("sigma-3(D^-2)", False, 0, False, 0)),
    "c32": CheckpointSpec("c32", "DIM6_DM2", ("sigma-2(D^-2)", False, 0, True, 1), ("sigma-3(D^-2)", True, 0, False, 0)),
}


def _e2_symbol(n: int) -> BoundarySymbol:
    cx = c_xi(n)
    cn = BoundarySymbol.constant(CliffordElem.generator(n, n))
    w = norm_xi_prime(n) * Poly.atom(h1)
    return (cx * cn * cx * BoundarySymbol.norm_power(n, 3)).map_coeffs(lambda p: p * w)


def _named_symbol(name: str, n: int, table: DerivativeTable) -> BoundarySymbol:
    if name == "E2":
        return _e2_symbol(n)
    if name == "E1":
        return build_symbol("sigma-2(D^-1)", n, table) + _e2_symbol(n)
    return build_symbol(name, n, table)


def _side(spec: tuple, n: int, l: int, table: DerivativeTable) -> BoundarySymbol:
    name, with_l, x_derivs, plus, xi_derivs = spec
    x = _named_symbol(name, n, table)
    if with_l:
        x = apply_L(l, x)
    for _ in range(x_derivs):
        x = d_x_n(x, table)
    if plus:
        x = pi_plus(x)
    return d_xi_n(x, xi_derivs)


def checkpoint_value(tag: str, l: int = 2, table: DerivativeTable = DEFAULT_TABLE) -> BoundarySymbol:
    """Engine value of a checkpoint: sphere mean of the trace, a function of xin."""
    spec = CHECKPOINTS[tag]
    n = SETTINGS[spec.setting].n
    t = trace_symbol(_side(spec.left, n, l, table) * _side(spec.right, n, l, table))
    return sphere_average_symbol(t, with_omega=False)


def checkpoint_expected(tag: str) -> BoundarySymbol:
    """Printed checkpoint value (l = 2)."""
    setting, texts = CHECKPOINT_TEXT[tag]
    n = SETTINGS[setting].n
    out = BoundarySymbol(n)
    g = g_pair(n, 1, 2)
    factors = {"g": g, "d": normal_derivative(g)}
    for key, text in texts.items():
        f = factors[key]
        out = out + parse_symbol(text, n).map_coeffs(lambda p: p * f)
    return out


# ---------------------------------------------------------------- audit


def audit(setting, l: int, cfg=None, expected: PaperExpected | None = None,
          labels: Iterable[str] | None = None, checkpoints: bool = True) -> list[VerificationReport]:
    """Exact comparison plus numeric adjudication for cases, totals and checkpoints.

    Raises :class:`~residue_audit.reports.EngineInconsistency` when the engine
    disagrees with the numeric oracle.
    """
    from .oracle import OracleConfig, adjudicate_case, adjudicate_checkpoint, adjudicate_interior

    s = _setting(setting)
    cfg = cfg or OracleConfig()
    wanted = set(labels) if labels else None
    out = []
    for rep in case_reports(s, l, expected):
        if wanted and rep.case not in wanted and rep.case not in ("TOTAL", "INTERIOR"):
            continue
        if rep.case == "INTERIOR":
            adjudicate_interior(rep, s.key, l, cfg)
        else:
            adjudicate_case(rep, s.key, l, cfg)
        out.append(rep)
    if checkpoints and l == 2:
        for tag, spec in CHECKPOINTS.items():
            if spec.setting != s.key:
                continue
            rep = VerificationReport.compare(
                s.key, l, f"checkpoint {tag}", checkpoint_value(tag), checkpoint_expected(tag),
                tag=tag, kind="symbol", n=s.n,
            )
            adjudicate_checkpoint(rep, spec, cfg)
            out.append(rep)
    return out
