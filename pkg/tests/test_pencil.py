import numpy as np
import pytest
from hypothesis import given, strategies as st

from pencilroots import ContractViolation, InputError, Pencil, PolyMatrix, make_shifted
from pencilroots.pencil import check_staircase_indices, indices_from_staircase, pencil_apply

from conftest import crandn


def test_pencil_validation():
    with pytest.raises(InputError):
        Pencil(np.eye(2), np.eye(3))
    with pytest.raises(InputError):
        Pencil(np.array([[np.inf]]), np.eye(1))


def test_normalized_and_shift():
    p = Pencil(4 * np.eye(2), 2 * np.eye(2))
    q = p.normalized()
    assert max(q.norms()) == pytest.approx(1.0) and q.norm_scale == 4
    sp = make_shifted(q, 0.5)
    lam = 1.3 + 0.2j
    assert np.allclose(sp.Lhat0 + (lam - 0.5) * sp.Lhat1, q(lam))
    zero = Pencil(np.zeros((1, 2)), np.zeros((1, 2)))
    assert zero.normalized() is zero
    with pytest.raises(InputError):
        make_shifted(p, complex("nan"))


@given(st.integers(0, 10**6), st.integers(0, 4), st.complex_numbers(max_magnitude=3),
       st.complex_numbers(max_magnitude=3))
def test_polymatrix_reexpansion(seed, deg, a, b):
    rng = np.random.default_rng(seed)
    P = PolyMatrix(crandn(rng, deg + 1, 2, 3), a)
    lam = 0.4 - 0.3j
    assert np.allclose(P.to_monomial().at_lambda(lam), P.at_lambda(lam), atol=1e-8)
    assert np.allclose(P.shifted_to(b).at_lambda(lam), P.at_lambda(lam), atol=1e-8)


def test_polymatrix_degrees_and_trim():
    C = np.zeros((3, 2, 2))
    C[0, 0, 0] = 1
    C[1, 1, 1] = 1
    P = PolyMatrix(C)
    assert P.column_degrees() == [0, 1]
    assert P.trimmed().degree == 1
    assert PolyMatrix.zeros(2, 1).column_degrees() == [-1]
    with pytest.raises(InputError):
        PolyMatrix(np.zeros((0, 1, 1)))


def test_pencil_apply_convolution():
    rng = np.random.default_rng(2)
    P0, P1, X = crandn(rng, 2, 3), crandn(rng, 2, 3), crandn(rng, 2, 3, 1)
    Y = pencil_apply(P0, P1, X)
    mu = 0.7j
    assert Y.shape[0] == 3
    assert np.allclose(sum(Y[i] * mu ** i for i in range(3)),
                       (P0 + mu * P1) @ (X[0] + mu * X[1]))


def test_indices_from_staircase():
    ind = indices_from_staircase((4, 2, 0), (5, 3, 1))
    assert sorted(ind.right_minimal) == [0, 1, 2]
    assert sorted(ind.partial_multiplicities) == [1, 2]
    assert ind.normal_rank == 6
    with pytest.raises(ContractViolation):
        check_staircase_indices((3,), (2,))
    with pytest.raises(ContractViolation):
        check_staircase_indices((1,), (2, 1))
