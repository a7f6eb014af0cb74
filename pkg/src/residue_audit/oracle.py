"""Independent floating-point oracle.

Nothing here touches the exact engine's symbol calculus.  Symbols are
evaluated as gamma matrices in an explicit model of the geometry near the
boundary point,

    h(x) = 1 + h' x,   c(xi)(x) = sqrt(h) c(xi') + xi_n c(e_n),
    |xi|^2(x) = h |xi'|^2 + xi_n^2,   L(x) = prod_j c(a_j + x d_j),

normal derivatives are central differences in x, and everything in xi_n goes
through Laurent coefficients on a circle about +i (computed by FFT): pi^+
keeps the negative powers, xi_n-derivatives differentiate the series, and
the Gamma^+ integral is the trapezoid rule on the same circle.  The xi'
sphere uses a product Gauss rule (or Monte Carlo as a cross-check).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import roots_jacobi

from .exact import A, DA, HPRIME, OMEGA, PI, SCURV, Atom, Poly

__all__ = [
    "OracleConfig",
    "OracleError",
    "numeric_contour",
    "gamma_matrices",
    "sphere_rule",
    "sphere_monte_carlo",
    "sphere_volume",
    "random_sample",
    "atom_assignment",
    "oracle_boundary_case",
    "oracle_interior",
    "oracle_checkpoint",
    "symbol_at",
    "compare_case",
    "adjudicate_case",
    "adjudicate_interior",
    "adjudicate_checkpoint",
]

_DIMS = {"DIM4_DINV": 4, "DIM6_DM2": 6}
# (left order, right order, j, k) per case; the model has no x' dependence so aI is zero
_CASES = {
    "DIM4_DINV": {"aII": (-1, -1, 1, 0), "aIII": (-1, -1, 0, 1), "b": (-2, -1, 0, 0), "c": (-1, -2, 0, 0)},
    "DIM6_DM2": {"aII": (-2, -2, 1, 0), "aIII": (-2, -2, 0, 1), "b": (-2, -3, 0, 0), "c": (-3, -2, 0, 0)},
}


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    seed: int = 0
    trials: int = 20
    contour_radius: float = 0.5
    contour_samples: int = 4096
    sphere_samples: int = 20000  # Monte Carlo cross-check only
    sphere_degree: int = 8  # product rule is exact for polynomials up to this degree
    laurent_nodes: int = 32
    fd_step: float = 1e-3
    tol: float = 1e-9
    case_tol: float = 1e-6
    mc_sigma: float = 3.0
    test_points: tuple = (-1.3, 0.4, 2.1)

    def __post_init__(self):
        if not 0 < self.contour_radius < 1:
            raise OracleError("contour_radius must lie in (0, 1) so the circle about +i excludes -i")
        if self.trials < 1:
            raise OracleError("trials must be at least 1")
        if self.contour_samples < 8 or self.laurent_nodes < 16:
            raise OracleError("too few contour samples")


def _rel(x: complex, ref: complex) -> float:
    return abs(x - ref) / (1 + abs(ref))


# ---------------------------------------------------------------- contour


def numeric_contour(f: Callable, cfg: OracleConfig = OracleConfig(), center: complex = 1j) -> complex:
    """Trapezoid rule for the integral of ``f`` over the circle |z - center| = radius."""
    k = cfg.contour_samples
    theta = 2 * np.pi * np.arange(k) / k
    w = cfg.contour_radius * np.exp(1j * theta)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = np.asarray(f(center + w), dtype=complex)
    if vals.shape != w.shape:
        vals = np.broadcast_to(vals, w.shape)
    if not np.all(np.isfinite(vals)):
        raise OracleError("contour hits singularity")
    mags = np.abs(vals)
    # a pole on the circle between nodes shows up as one huge sample
    if mags.max() > 1e12 * (1 + np.median(mags)):
        raise OracleError("contour hits singularity")
    return complex(np.sum(vals * 1j * w) * (2 * np.pi / k))


# ---------------------------------------------------------------- gamma matrices and sphere


@lru_cache(maxsize=None)
def gamma_matrices(n: int) -> np.ndarray:
    """Anti-Hermitian generators with gamma_k^2 = -1, shape (n, 2^(n/2), 2^(n/2))."""
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    one = np.eye(2, dtype=complex)
    m = n // 2
    out = []
    for k in range(m):
        for s in (sx, sy):
            factors = [sz] * k + [s] + [one] * (m - k - 1)
            mat = factors[0]
            for f in factors[1:]:
                mat = np.kron(mat, f)
            out.append(1j * mat)
    return np.array(out)


def sphere_volume(m: int) -> float:
    """Volume of the unit sphere in R^m."""
    return 2 * math.pi ** (m / 2) / gamma_fn(m / 2)


@lru_cache(maxsize=None)
def sphere_rule(m: int, degree: int) -> tuple:
    """Product Gauss rule on the unit sphere in R^m, exact up to ``degree``."""
    q = degree // 2 + 1
    k = degree + 1
    phi = 2 * np.pi * np.arange(k) / k
    pts = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    wts = np.full(k, 2 * np.pi / k)
    for dim in range(3, m + 1):
        # xi = (t, sqrt(1 - t^2) psi), weight (1 - t^2)^((dim - 3)/2) dt
        alpha = (dim - 3) / 2
        t, wt = roots_jacobi(q, alpha, alpha)
        s = np.sqrt(1 - t**2)
        new_pts = np.concatenate(
            [np.repeat(t, len(pts))[:, None], (s[:, None, None] * pts[None]).reshape(-1, dim - 1)], axis=1
        )
        wts = (wt[:, None] * wts[None]).reshape(-1)
        pts = new_pts
    return pts, wts


def sphere_monte_carlo(m: int, samples: int, rng: np.random.Generator) -> tuple:
    pts = rng.standard_normal((samples, m))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return pts, np.full(samples, sphere_volume(m) / samples)


# ---------------------------------------------------------------- the model


class _Model:
    """Numeric symbols at normal offset x on a batch of (xi', xi_n) points."""

    def __init__(self, n: int, h1: float, fd_step: float):
        self.n = n
        self.h = float(h1)
        self.gam = gamma_matrices(n)
        self.dim = self.gam.shape[1]
        self.fd = fd_step

    def ddx(self, fn: Callable, x: float = 0.0):
        d = self.fd
        return (fn(x - 2 * d) - 8 * fn(x - d) + 8 * fn(x + d) - fn(x + 2 * d)) / (12 * d)

    def cxp(self, x, xp):
        # (P, dim, dim)
        return np.sqrt(1 + self.h * x) * np.einsum("pk,kab->pab", xp, self.gam[: self.n - 1])

    def cxi(self, x, xp, eta):
        return self.cxp(x, xp)[:, None] + eta[None, :, None, None] * self.gam[-1]

    def norm2(self, x, xp, eta):
        return (1 + self.h * x) * np.sum(xp**2, axis=1)[:, None] + eta[None, :] ** 2

    def symbol(self, name: str, x, xp, eta):
        """Symbol ``name`` at offset x; lower-order symbols only at x = 0."""
        eye = np.eye(self.dim)
        if name == "sigma-1(D^-1)":
            return 1j * self.cxi(x, xp, eta) / self.norm2(x, xp, eta)[..., None, None]
        if name == "sigma-2(D^-2)":
            return eye / self.norm2(x, xp, eta)[..., None, None]
        if x != 0:
            raise OracleError(f"{name} is only modelled at the boundary point")
        gn = self.gam[-1]
        c = self.cxi(0.0, xp, eta)
        nr = self.norm2(0.0, xp, eta)[..., None, None]
        dnr = self.ddx(lambda y: self.norm2(y, xp, eta))[..., None, None]
        if name in ("sigma-2(D^-1)", "E1", "E2"):
            dc = self.ddx(lambda y: self.cxi(y, xp, eta))
            e2 = self.h * (c @ gn @ c) * np.sum(xp**2, axis=1)[:, None, None, None] / nr**3
            if name == "E2":
                return e2
            H = -0.75 * self.h * gn
            s2 = c @ H @ c / nr**2 + c @ gn @ (dc * nr - c * dnr) / nr**3
            return s2 + e2 if name == "E1" else s2
        if name == "sigma-3(D^-2)":
            # Gamma^n = 5/2 h', delta^k = 1/4 h' c(e_k) c(e_n) for k < n
            lin = np.einsum("pk,kab->pab", xp, self.gam[: self.n - 1] @ gn) * (-0.5 * self.h)
            lin = lin[:, None] + (2.5 * self.h * eta)[None, :, None, None] * eye
            dg = self.ddx(lambda y: (1 + self.h * y) * np.sum(xp**2, axis=1))
            metric = (eta[None, :] * dg[:, None])[..., None, None] * eye
            return -1j * lin / nr**2 - 2j * metric / nr**3
        raise OracleError(f"unknown symbol {name!r}")


def _nodes(cfg: OracleConfig):
    k = cfg.laurent_nodes
    theta = 2 * np.pi * np.arange(k) / k
    return 1j + cfg.contour_radius * np.exp(1j * theta)


def _laurent(samples: np.ndarray, cfg: OracleConfig) -> tuple:
    """Laurent coefficients about +i from samples on the node circle (axis 1)."""
    k = cfg.laurent_nodes
    coeffs = np.fft.fft(samples, axis=1) / k  # index m holds a_m rho^m, m mod k
    idx = np.fft.fftfreq(k, 1 / k).astype(int)
    return coeffs, idx


def _eval_series(coeffs, idx, cfg: OracleConfig, z: np.ndarray, deriv: int, principal: bool):
    """Evaluate sum a_m (z - i)^m (or only m < 0), differentiated ``deriv`` times."""
    rho = cfg.contour_radius
    keep = idx < 0 if principal else np.ones_like(idx, dtype=bool)
    w = (z - 1j) / rho
    out = 0
    for m in idx[keep]:
        pos = int(np.nonzero(idx == m)[0][0])
        fall = 1.0
        for t in range(deriv):
            fall *= m - t
        if fall == 0:
            continue
        term = coeffs[:, pos] * fall * rho ** (-deriv)
        out = out + term[:, None] * (w[None, :] ** (m - deriv))[..., None, None]
    if isinstance(out, int):
        return np.zeros(coeffs.shape[:1] + z.shape + coeffs.shape[2:], dtype=complex)
    return out


@lru_cache(maxsize=None)
def _node_operator(k: int, rho: float, deriv: int, principal: bool) -> np.ndarray:
    """Node values -> node values of d^deriv (pi^+ if principal) of the Laurent series."""
    idx = np.fft.fftfreq(k, 1 / k).astype(int)
    factor = np.ones(k)
    for t in range(deriv):
        factor = factor * (idx - t)
    if principal:
        factor = factor * (idx < 0)
    theta = 2 * np.pi * np.arange(k) / k
    phase = rho ** (-deriv) * np.exp(-1j * deriv * theta)
    dft = np.exp(-2j * np.pi * np.outer(np.arange(k), np.arange(k)) / k) / k
    idft = np.exp(2j * np.pi * np.outer(np.arange(k), np.arange(k)) / k)
    return phase[:, None] * (idft @ (factor[:, None] * dft))


def _on_nodes(samples, cfg, deriv: int, principal: bool):
    """Same as _eval_series on the node circle itself, as one linear map."""
    k = cfg.laurent_nodes
    op = _node_operator(k, cfg.contour_radius, deriv, principal)
    flat = samples.reshape(samples.shape[0], k, -1)
    return (op @ flat).reshape(samples.shape)


def _node_integral(values: np.ndarray, cfg: OracleConfig) -> np.ndarray:
    """Trapezoid rule on the node circle along axis 1."""
    k = cfg.laurent_nodes
    w = _nodes(cfg) - 1j
    return np.tensordot(values, 1j * w * (2 * np.pi / k), axes=([1], [0]))


@lru_cache(maxsize=64)
def _case_kernels(setting: str, label: str, h1: float, cfg: OracleConfig, rule: str) -> tuple:
    n = _DIMS[setting]
    if label == "aI":
        dim = 2 ** (n // 2)
        return np.zeros((dim, dim), complex), np.zeros((dim, dim), complex)
    r, ell, j, k = _CASES[setting][label]
    names = {
        "DIM4_DINV": {-1: "sigma-1(D^-1)", -2: "sigma-2(D^-1)"},
        "DIM6_DM2": {-2: "sigma-2(D^-2)", -3: "sigma-3(D^-2)"},
    }[setting]
    model = _Model(n, h1, cfg.fd_step)
    if rule == "gauss":
        xp, wts = sphere_rule(n - 1, cfg.sphere_degree)
    else:
        xp, wts = sphere_monte_carlo(n - 1, cfg.sphere_samples, np.random.default_rng(cfg.seed + 7919))
    eta = _nodes(cfg)

    def right_fn(x):
        return model.symbol(names[ell], x, xp, eta)

    right = model.ddx(right_fn) if k else right_fn(0.0)
    right = _on_nodes(right, cfg, j + 1, principal=False)

    def left_fn(x):
        return model.symbol(names[r], x, xp, eta)

    # d_x (L S) = dL S + L d_x S
    parts = {0: model.ddx(left_fn) if j else left_fn(0.0)}
    if j:
        parts[1] = left_fn(0.0)
    pref = (-1j) ** (j + k + 1) / math.factorial(j + k + 1)
    out = []
    for which in (0, 1):
        if which not in parts:
            out.append(np.zeros((model.dim, model.dim), complex))
            continue
        left = _on_nodes(parts[which], cfg, k, principal=True)
        prod = left @ right  # (P, N, dim, dim)
        integ = _node_integral(prod, cfg)  # (P, dim, dim)
        out.append(pref * np.tensordot(wts, integ, axes=([0], [0])))
    return tuple(out)


# ---------------------------------------------------------------- assignments


_NONZERO = np.array([-3.0, -2.0, -1.0, 1.0, 2.0, 3.0])


def random_sample(n: int, l: int, rng: np.random.Generator) -> dict:
    """Small-integer frame components and their normal derivatives in [-3, 3].

    h' and s are drawn from the nonzero integers in the same range so that
    no term of a value is switched off by the assignment.
    """
    return {
        "a": rng.integers(-3, 4, size=(l, n)).astype(float),
        "d": rng.integers(-3, 4, size=(l, n)).astype(float),
        "h1": float(rng.choice(_NONZERO)),
        "s": float(rng.choice(_NONZERO)),
    }


def atom_assignment(n: int, sample: dict) -> dict:
    """Numeric values for every atom that can appear in a reported value."""
    out = {Atom(HPRIME): sample["h1"], Atom(SCURV): sample["s"], Atom(PI): math.pi,
           Atom(OMEGA): sphere_volume(n - 1)}
    l = sample["a"].shape[0]
    for j in range(l):
        for k in range(n):
            out[Atom(A, j + 1, k + 1)] = sample["a"][j, k]
            out[Atom(DA, j + 1, k + 1)] = sample["d"][j, k]
    return out


def _words(n: int, sample: dict) -> tuple:
    gam = gamma_matrices(n)
    dim = gam.shape[1]
    vecs = np.einsum("jk,kab->jab", sample["a"], gam)
    dvecs = np.einsum("jk,kab->jab", sample["d"], gam)
    l = len(vecs)
    word = np.eye(dim, dtype=complex)
    for v in vecs:
        word = word @ v
    dword = np.zeros((dim, dim), complex)
    for t in range(l):
        w = np.eye(dim, dtype=complex)
        for s in range(l):
            w = w @ (dvecs[s] if s == t else vecs[s])
        dword = dword + w
    return word, dword


def oracle_boundary_case(setting: str, label: str, l: int, cfg: OracleConfig = OracleConfig(),
                         sample: dict | None = None, rule: str = "gauss") -> complex:
    """Numeric value of one boundary case (``label="TOTAL"`` sums all cases)."""
    if setting not in _DIMS:
        raise OracleError(f"unknown setting {setting!r}")
    n = _DIMS[setting]
    if sample is None:
        sample = random_sample(n, l, np.random.default_rng(cfg.seed))
    labels = ("aI",) + tuple(_CASES[setting]) if label == "TOTAL" else (label,)
    word, dword = _words(n, sample)
    total = 0j
    for lab in labels:
        k_l, k_dl = _case_kernels(setting, lab, sample["h1"], cfg, rule)
        total += complex(np.trace(word @ k_l) + np.trace(dword @ k_dl))
    return total


def oracle_interior(setting: str, l: int, sample: dict) -> complex:
    n = _DIMS[setting]
    word, _ = _words(n, sample)
    const = (n - 2) * (4 * math.pi) ** (n / 2) / math.factorial(n // 2 - 1)
    return complex(const * (-1 / 12) * sample["s"] * np.trace(word))


# ---------------------------------------------------------------- checkpoints


def _cauchy_derivative(fn: Callable, t: float, deriv: int, cfg: OracleConfig, radius: float = 0.3):
    if deriv == 0:
        return fn(np.array([t], dtype=complex))[:, 0]
    k = cfg.laurent_nodes
    w = radius * np.exp(2j * np.pi * np.arange(k) / k)
    vals = fn(t + w)  # (P, k, d, d)
    weights = math.factorial(deriv) / k * w ** (-deriv)
    return np.tensordot(vals, weights, axes=([1], [0]))


def oracle_checkpoint(setting: str, spec, sample: dict, cfg: OracleConfig = OracleConfig()) -> np.ndarray:
    """Sphere mean of tr[left * right] at ``cfg.test_points`` (see CheckpointSpec)."""
    n = _DIMS[setting]
    model = _Model(n, sample["h1"], cfg.fd_step)
    xp, wts = sphere_rule(n - 1, cfg.sphere_degree)
    wts = wts / wts.sum()
    gam = gamma_matrices(n)

    def lword(x):
        w = np.eye(model.dim, dtype=complex)
        for a_row, d_row in zip(sample["a"], sample["d"]):
            w = w @ np.einsum("k,kab->ab", a_row + x * d_row, gam)
        return w

    def side(side_spec, t):
        name, with_l, x_derivs, plus, xi_derivs = side_spec

        def base(x, eta):
            v = model.symbol(name, x, xp, eta)
            return lword(x) @ v if with_l else v

        def at(eta):
            return model.ddx(lambda x: base(x, eta)) if x_derivs else base(0.0, eta)

        if plus:
            coeffs, idx = _laurent(at(_nodes(cfg)), cfg)
            return _eval_series(coeffs, idx, cfg, np.array([t], dtype=complex), xi_derivs, True)[:, 0]
        return _cauchy_derivative(at, t, xi_derivs, cfg)

    out = []
    for t in cfg.test_points:
        prod = side(spec.left, t) @ side(spec.right, t)
        out.append(complex(np.sum(wts * np.trace(prod, axis1=1, axis2=2))))
    return np.array(out)


def symbol_at(sym, t: complex, assignment: dict) -> complex:
    """Numeric value of a scalar boundary symbol at xi_n = t."""
    if not sym.is_scalar():
        raise OracleError("symbol_at needs a scalar symbol")
    num = 0j
    for k, c in enumerate(sym.num):
        num += c.scalar_part().eval_numeric(assignment) * t**k
    return num / ((t - 1j) ** sym.p * (t + 1j) ** sym.q)


# ---------------------------------------------------------------- adjudication


def compare_case(setting: str, label: str, l: int, value: Poly, cfg: OracleConfig = OracleConfig()) -> list:
    """[(symbolic, oracle)] over ``cfg.trials`` random assignments."""
    n = _DIMS[setting]
    rng = np.random.default_rng(cfg.seed)
    out = []
    for _ in range(cfg.trials):
        sample = random_sample(n, l, rng)
        sym = value.eval_numeric(atom_assignment(n, sample))
        out.append((sym, oracle_boundary_case(setting, label, l, cfg, sample)))
    return out


def _verdict(rep, engine: complex, expected: complex | None, oracle: complex, tol: float):
    from .reports import EngineInconsistency

    rep.oracle_engine = engine
    rep.oracle_expected = expected
    rep.oracle_value = oracle
    engine_ok = _rel(oracle, engine) <= tol
    expected_ok = expected is not None and _rel(oracle, expected) <= tol
    if not engine_ok:
        raise EngineInconsistency(
            f"{rep.setting} l={rep.l} {rep.case}: engine {engine} vs oracle {oracle}"
        )
    if rep.exact_match:
        rep.oracle_verdict = "agree"
        return
    if expected_ok:
        rep.oracle_verdict = "inconclusive"
        rep.note = "exact values differ but the oracle cannot separate them at this assignment"
    else:
        rep.oracle_verdict = "engine"
        rep.note = f"discrepancy with [{rep.tag}]: the oracle supports the engine value"


def adjudicate_case(rep, setting: str, l: int, cfg: OracleConfig = OracleConfig()):
    """Fill the oracle fields of a case or TOTAL report (first trial assignment)."""
    n = _DIMS[setting]
    sample = random_sample(n, l, np.random.default_rng(cfg.seed))
    assignment = atom_assignment(n, sample)
    engine = rep.computed.eval_numeric(assignment)
    expected = None if rep.expected is None else rep.expected.eval_numeric(assignment)
    oracle = oracle_boundary_case(setting, rep.case, l, cfg, sample)
    rep.seed = cfg.seed
    _verdict(rep, engine, expected, oracle, cfg.case_tol)


def adjudicate_interior(rep, setting: str, l: int, cfg: OracleConfig = OracleConfig()):
    n = _DIMS[setting]
    sample = random_sample(n, l, np.random.default_rng(cfg.seed))
    assignment = atom_assignment(n, sample)
    engine = rep.computed.eval_numeric(assignment)
    expected = None if rep.expected is None else rep.expected.eval_numeric(assignment)
    rep.seed = cfg.seed
    _verdict(rep, engine, expected, oracle_interior(setting, l, sample), cfg.case_tol)


def adjudicate_checkpoint(rep, spec, cfg: OracleConfig = OracleConfig()):
    """Three-way comparison of a checkpoint at the configured test points."""
    from .reports import EngineInconsistency

    setting = spec.setting
    n = _DIMS[setting]
    sample = random_sample(n, 2, np.random.default_rng(cfg.seed))
    assignment = atom_assignment(n, sample)
    oracle = oracle_checkpoint(setting, spec, sample, cfg)
    engine = np.array([symbol_at(rep.computed, t, assignment) for t in cfg.test_points])
    expected = np.array([symbol_at(rep.expected, t, assignment) for t in cfg.test_points])
    rep.seed = cfg.seed
    rep.oracle_engine, rep.oracle_expected, rep.oracle_value = engine[0], expected[0], oracle[0]
    engine_err = max(_rel(o, e) for o, e in zip(oracle, engine))
    expected_err = max(_rel(o, e) for o, e in zip(oracle, expected))
    if engine_err > cfg.case_tol:
        raise EngineInconsistency(f"checkpoint {spec.tag}: engine vs oracle error {engine_err:.3g}")
    if rep.exact_match:
        rep.oracle_verdict = "agree"
    elif expected_err <= cfg.case_tol:
        rep.oracle_verdict = "inconclusive"
        rep.note = "exact values differ but the oracle cannot separate them at the test points"
    else:
        rep.oracle_verdict = "engine"
        rep.note = (
            f"discrepancy with [{spec.tag}]: the oracle supports the engine value "
            f"(max relative error engine {engine_err:.1e}, printed {expected_err:.1e})"
        )
