import numpy as np
import pytest
from hypothesis import given, strategies as st

from pencilroots import ContractViolation, InputError
from pencilroots.linalg import (EPS, as_complex_matrix, col_compress, default_tol, ql_upper,
                                random_unitary, row_compress, rq_upper, numerical_rank)

from conftest import crandn


def _low_rank(seed, m, n, r):
    rng = np.random.default_rng(seed)
    return crandn(rng, m, r) @ crandn(rng, r, n)


def _is_unitary(Q):
    return np.allclose(Q.conj().T @ Q, np.eye(Q.shape[1]), atol=1e-13)


@given(st.integers(0, 10**6), st.integers(1, 7), st.integers(1, 7), st.data())
def test_row_compress(seed, m, n, data):
    r = data.draw(st.integers(0, min(m, n)))
    M = _low_rank(seed, m, n, r)
    Q, R, d = row_compress(M, 1e-10 * max(1.0, np.linalg.norm(M)))
    assert d.rank == r and _is_unitary(Q)
    assert np.all(R[r:] == 0)
    assert np.allclose(Q @ R, M, atol=1e-12 * max(1, np.linalg.norm(M)))


@given(st.integers(0, 10**6), st.integers(1, 7), st.integers(1, 7), st.data())
def test_col_compress(seed, m, n, data):
    r = data.draw(st.integers(0, min(m, n)))
    M = _low_rank(seed, m, n, r)
    V, C, d = col_compress(M, 1e-10 * max(1.0, np.linalg.norm(M)))
    assert d.rank == r and _is_unitary(V)
    assert np.all(C[:, : n - r] == 0)
    assert np.allclose(C @ V.conj().T, M, atol=1e-12 * max(1, np.linalg.norm(M)))


def test_rank_decision_margins():
    d = numerical_rank(np.diag([3.0, 1.0, 1e-9]), 1e-6)
    assert d.rank == 2 and d.smallest_accepted == 1.0 and d.largest_rejected == 1e-9
    assert numerical_rank(np.zeros((0, 3)), 1.0).rank == 0


def test_default_tol_scales():
    assert default_tol(4, 6, 2.0, 1.0) == pytest.approx(1e3 * 6 * EPS * 2.0)
    assert default_tol(0, 0) == 0.0


@given(st.integers(0, 10**6), st.integers(0, 5), st.integers(0, 3))
def test_rq_upper(seed, s, extra):
    rng = np.random.default_rng(seed)
    E = crandn(rng, s, s + extra)
    V, Eh = rq_upper(E, 0.0)
    assert _is_unitary(V)
    EV = E @ V
    assert np.allclose(EV[:, :extra], 0, atol=1e-12)
    assert np.allclose(EV[:, extra:], Eh, atol=1e-12)
    assert np.all(np.tril(Eh, -1) == 0) and np.all(np.diag(Eh).real > 0)


@given(st.integers(0, 10**6), st.integers(0, 5), st.integers(0, 3))
def test_ql_upper(seed, t, extra):
    rng = np.random.default_rng(seed)
    A = crandn(rng, t + extra, t)
    U, Ah = ql_upper(A, 0.0)
    assert _is_unitary(U)
    UA = U.conj().T @ A
    assert np.allclose(UA[:t], Ah, atol=1e-12) and np.allclose(UA[t:], 0, atol=1e-12)
    assert np.all(np.tril(Ah, -1) == 0) and np.all(np.diag(Ah).real > 0)


def test_triangular_factor_rank_loss_raises():
    with pytest.raises(ContractViolation):
        rq_upper(np.array([[1.0, 1.0], [1.0, 1.0]]), 1e-8)
    with pytest.raises(ContractViolation):
        ql_upper(np.ones((3, 2)), 1e-8)
    with pytest.raises(ContractViolation):
        rq_upper(np.ones((3, 2)), 0.0)


def test_input_checks():
    with pytest.raises(InputError):
        as_complex_matrix([[np.nan]])
    with pytest.raises(InputError):
        as_complex_matrix([1.0, 2.0])
    with pytest.raises(InputError):
        row_compress(np.eye(2), -1.0)


@pytest.mark.parametrize("real", [False, True])
def test_random_unitary(real):
    Q = random_unitary(5, np.random.default_rng(1), real)
    assert _is_unitary(Q)
    assert (np.abs(Q.imag).max() == 0) == real
    assert random_unitary(0, np.random.default_rng(0)).shape == (0, 0)


@given(st.integers(0, 10**6), st.integers(1, 6), st.integers(1, 6))
def test_rank_is_monotone_in_tol(seed, m, n):
    rng = np.random.default_rng(seed)
    M = crandn(rng, m, n) * np.logspace(0, -14, n)
    ranks = [numerical_rank(M, tol).rank for tol in np.logspace(-16, 1, 30)]
    assert all(b <= a for a, b in zip(ranks, ranks[1:]))


def test_full_rank_compression_reconstructs_to_roundoff():
    M = crandn(np.random.default_rng(3), 5, 3)
    Q, R, d = row_compress(M, 1e-12)
    assert d.rank == 3
    assert np.linalg.norm(Q @ R - M) <= 10 * EPS * np.linalg.norm(M) * 5
