import math
from dataclasses import replace

import numpy as np
import pytest

from residue_audit.clifford import gamma_rep
from residue_audit.oracle import (
    OracleConfig,
    OracleError,
    atom_assignment,
    compare_case,
    gamma_matrices,
    numeric_contour,
    oracle_boundary_case,
    random_sample,
    sphere_rule,
    sphere_volume,
)
from residue_audit.pipeline import boundary_case


def test_contour_examples():
    cfg = OracleConfig()
    assert abs(numeric_contour(lambda z: 1 / ((z - 1j) * (z + 1j)), cfg) - math.pi) < 1e-10
    assert abs(numeric_contour(lambda z: 1 / (z + 1j) ** 3, cfg)) < 1e-10


def test_contour_singularity_reported():
    with pytest.raises(OracleError, match="contour hits singularity"):
        numeric_contour(lambda z: 1 / (z - 1.5j), OracleConfig())
    with pytest.raises(OracleError, match="contour hits singularity"):
        numeric_contour(lambda z: 1 / (z - (0.5 + 1j)), OracleConfig())


def test_spectral_convergence():
    f = lambda z: z**2 / ((z - 1j) ** 3 * (z + 1j) ** 2)  # noqa: E731
    coarse = numeric_contour(f, OracleConfig(contour_samples=256))
    fine = numeric_contour(f, OracleConfig(contour_samples=512))
    assert abs(coarse - fine) < 1e-12


def test_config_validation():
    with pytest.raises(OracleError):
        OracleConfig(contour_radius=1.0)
    with pytest.raises(OracleError):
        OracleConfig(trials=0)


@pytest.mark.parametrize("n", [4, 6])
def test_gamma_matrices(n):
    g = gamma_matrices(n)
    eye = np.eye(g.shape[1])
    for i in range(n):
        for j in range(n):
            assert np.allclose(g[i] @ g[j] + g[j] @ g[i], -2 * eye * (i == j))
    # same algebra as the engine's exact representation, up to a change of basis
    assert np.isclose(np.trace(g[0] @ g[1] @ g[1] @ g[0]), np.trace(gamma_rep(n).word_matrix(0)))


@pytest.mark.parametrize("m", [3, 5])
def test_sphere_rule_moments(m):
    pts, wts = sphere_rule(m, 8)
    assert np.isclose(wts.sum(), sphere_volume(m))
    assert np.isclose(np.sum(wts * pts[:, 0] ** 2), sphere_volume(m) / m)
    assert np.isclose(np.sum(wts * pts[:, 0] ** 4), 3 * sphere_volume(m) / (m * (m + 2)))
    assert abs(np.sum(wts * pts[:, 0] ** 3 * pts[:, 1])) < 1e-12


def test_aiii_unit_frame():
    # h' = 1 and g(X1,X2) = 1 with no normal variation
    sample = {"a": np.array([[1.0, 0, 0, 0], [1.0, 0, 0, 0]]), "d": np.zeros((2, 4)), "h1": 1.0, "s": 1.0}
    value = oracle_boundary_case("DIM4_DINV", "aIII", 2, OracleConfig(), sample)
    assert abs(value - (-3 / 8) * math.pi * sphere_volume(3)) < 1e-8


def test_odd_l_is_zero():
    for label in ("aII", "aIII", "b", "c"):
        assert abs(oracle_boundary_case("DIM4_DINV", label, 3)) < 1e-8


def test_engine_agrees_with_oracle():
    cfg = OracleConfig(trials=4)
    for label in ("aII", "b"):
        value = boundary_case("DIM4_DINV", label, 2)
        for sym, num in compare_case("DIM4_DINV", label, 2, value, cfg):
            assert abs(num - sym) <= cfg.case_tol * (1 + abs(sym))


@pytest.mark.parametrize("label", ["aII", "b"])
def test_monte_carlo_cross_check(label):
    cfg = OracleConfig()
    sample = random_sample(4, 2, np.random.default_rng(1))
    exact = boundary_case("DIM4_DINV", label, 2).eval_numeric(atom_assignment(4, sample))
    runs = [
        oracle_boundary_case("DIM4_DINV", label, 2, replace(cfg, seed=s, sphere_samples=1500), sample, rule="mc")
        for s in range(16)
    ]
    se = np.std(runs, ddof=1) / np.sqrt(len(runs))
    assert abs(np.mean(runs) - exact) <= cfg.mc_sigma * se
