import numpy as np
import pytest

from residue_audit.clifford import (
    CliffordElem,
    clifford_mul,
    clifford_trace,
    clifford_trace_pair,
    gamma_rep,
    matrix_of,
    perfect_matchings,
    vector_X,
    wick_trace,
    word,
)
from residue_audit.exact import Poly, a


@pytest.mark.parametrize("n", [4, 6])
def test_basis_words_match_gamma_products(n):
    rep = gamma_rep(n)
    size = 1 << n
    for s in range(size):
        ws = CliffordElem(n, {s: Poly.const(1)})
        for t in range(size):
            wt = CliffordElem(n, {t: Poly.const(1)})
            prod = clifford_mul(ws, wt)
            assert np.array_equal(matrix_of(prod, {}), rep.word_matrix(s) @ rep.word_matrix(t))


@pytest.mark.parametrize("n,dim", [(4, 4), (6, 8)])
def test_trace_of_identity(n, dim):
    assert clifford_trace(CliffordElem.scalar(n, 1)) == Poly.const(dim)


def test_generators_anticommute():
    n = 4
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            ei, ej = CliffordElem.generator(n, i), CliffordElem.generator(n, j)
            expected = CliffordElem.scalar(n, -2 if i == j else 0)
            assert ei * ej + ej * ei == expected


def test_trace_pair_matches_product_trace():
    n = 4
    x = vector_X(n, 1) * vector_X(n, 2) + word(n, 1, 3)
    y = vector_X(n, 3) * vector_X(n, 1) + CliffordElem.scalar(n, 2)
    assert clifford_trace_pair(x, y) == clifford_trace(x * y)


def test_perfect_matchings_count_and_sign():
    ms = list(perfect_matchings((0, 1, 2, 3, 4, 5)))
    assert len(ms) == 15
    assert {sign for sign, _ in ms} == {1, -1}
    assert (1, ((0, 1), (2, 3), (4, 5))) in [(s, tuple(p)) for s, p in ms]


@pytest.mark.parametrize("l", [2, 4])
def test_wick_matches_direct_trace(l):
    n = 4
    vecs = [vector_X(n, j) for j in range(1, l + 1)]
    prod = vecs[0]
    for v in vecs[1:]:
        prod = prod * v
    assert wick_trace(vecs) == clifford_trace(prod)


def test_wick_eight_vectors_matrix_oracle():
    n, l = 6, 8
    rng = np.random.default_rng(3)
    vecs = [vector_X(n, j) for j in range(1, l + 1)]
    w = wick_trace(vecs)
    for _ in range(5):
        assign = {a(j, k): rng.uniform(-2, 2) for j in range(1, l + 1) for k in range(1, n + 1)}
        m = np.eye(8, dtype=complex)
        for v in vecs:
            m = m @ matrix_of(v, assign)
        ref = np.trace(m)
        assert abs(w.eval_numeric(assign) - ref) <= 1e-9 * (1 + abs(ref))


def test_odd_products_are_traceless():
    n = 6
    assert wick_trace([vector_X(n, j) for j in range(1, 4)]).is_zero()
    assert clifford_trace(word(n, 1, 2, 3, 4, 5, 6)).is_zero()


def test_rank_mismatch_rejected():
    with pytest.raises(ValueError):
        CliffordElem.generator(4, 1) * CliffordElem.generator(6, 1)
