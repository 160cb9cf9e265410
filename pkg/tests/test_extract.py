import numpy as np
import pytest
from hypothesis import given, strategies as st

from pencilroots import (AnalyzeConfig, ContractViolation, GeneratorSpec, InputError, MinimalBasis,
                         Pencil, analyze, generate_pencil, left_structure, lift_to_original,
                         minimal_basis, right_inverse, root_polynomials, verify_zero_direction)
from pencilroots.bidiag import identity_stairs
from pencilroots.pencil import pencil_apply

from conftest import all_lambda_pencil, staircase_sizes, tails


def _rel(x, y):
    return np.linalg.norm(x) / max(np.linalg.norm(y), 1e-300)


def test_identity_stair_basis_is_shift_chain():
    # s=(1,0), t=(2,1): A = [0 0 1], E = [0 1 0]; null vectors e1 and e2 + ... of degree 1
    red = identity_stairs((1, 0), (2, 1))
    mb = minimal_basis(red)
    assert mb.degrees == (0, 1)
    A, E = red.dense()
    assert np.allclose(pencil_apply(A, E, mb.N.coeffs), 0)
    assert mb.N.column_degrees() == [0, 1]


def test_identity_stair_roots():
    blue = identity_stairs((2, 1), (2, 1))
    rps = root_polynomials(blue)
    assert rps.orders == (2, 1)
    A, E = blue.dense()
    P = pencil_apply(A, E, rps.Q.coeffs)
    for j, ell in enumerate(rps.orders):
        assert np.allclose(P[:ell, :, j], 0) and np.linalg.norm(P[ell, :, j]) > 0


def test_stair_shape_checks():
    with pytest.raises(ContractViolation):
        minimal_basis(identity_stairs((2, 1), (2, 1)))
    with pytest.raises(ContractViolation):
        root_polynomials(identity_stairs((1, 0), (2, 1)))
    with pytest.raises(ContractViolation):
        right_inverse(identity_stairs((2,), (2,)))


@given(staircase_sizes(), tails(), st.integers(0, 2**31 - 1), st.complex_numbers(max_magnitude=2))
def test_closed_forms_on_planted_pencils(sizes, tail, seed, lam):
    s, t = sizes
    spec = GeneratorSpec(s, t, seed=seed, disguise=True, fill="complex", tail=tail, lambda0=lam)
    rep = analyze(generate_pencil(spec), lam, AnalyzeConfig(left=False))
    r = rep.right
    sp = r.shifted
    N, Q = rep.basis.N, rep.roots.Q
    assert sorted(rep.basis.degrees) == sorted(rep.indices.right_minimal)
    assert sorted(rep.roots.orders) == sorted(rep.indices.partial_multiplicities)
    assert N.column_degrees(1e-10 * np.linalg.norm(N.coeffs)) == list(rep.basis.degrees)
    if N.shape[1]:
        assert _rel(pencil_apply(sp.Lhat0, sp.Lhat1, N.coeffs), N.coeffs) <= 1e-12
    P = pencil_apply(sp.Lhat0, sp.Lhat1, Q.coeffs)
    for j, ell in enumerate(rep.roots.orders):
        assert _rel(P[:ell, :, j], Q.coeffs[:, :, j]) <= 1e-12
        assert verify_zero_direction(r.pencil, Q.column(j), lam, ell, rtol=1e-12)[0]
    # right inverse of the red stair pencil: (A + mu E) R(mu) = I
    A, E = r.separated.red.dense()
    R = r.right_inverse.R.coeffs
    if A.size:
        Y = pencil_apply(A, E, R)
        Y[0] -= np.eye(A.shape[0])
        assert _rel(Y, R) <= 1e-12


def test_root_values_independent_of_basis_values():
    rep = analyze(generate_pencil(GeneratorSpec((4, 2, 0), (5, 3, 1), seed=4, disguise=True)))
    X = np.hstack([rep.basis.N.coeffs[0], rep.roots.Q.coeffs[0]])
    assert np.linalg.matrix_rank(X) == X.shape[1]


def test_lift_checks_frames():
    rep = analyze(all_lambda_pencil())
    r = rep.right
    with pytest.raises(InputError):
        lift_to_original(r.separated, rep.basis, rep.roots)
    with pytest.raises(InputError):
        lift_to_original(r.separated, r.basis_local, r.roots_local)
    bad = MinimalBasis(r.basis_local.N, r.basis_local.degrees, "bidiagonal")
    with pytest.raises(InputError):
        lift_to_original(r.separated, bad, r.roots_local, r.kronecker)


def test_left_structure_convention():
    # p has the planted right structure as its left structure
    spec = GeneratorSpec((2, 0), (3, 1), seed=3, disguise=True, fill="complex")
    p = generate_pencil(spec).conj_transpose()
    lam0 = 0.4 + 0.1j
    ind, basis = left_structure(p, lam0)
    assert sorted(ind.right_minimal) == [0, 1]
    # conjugated coefficients give y(mu) with y(mu)^T (Lhat0 + mu Lhat1) = 0
    pn = p.normalized()
    Y = basis.N.coeffs.conj()
    Z = pencil_apply((pn.L0 + lam0 * pn.L1).T, pn.L1.T, Y)
    assert _rel(Z, Y) <= 1e-12
    assert analyze(p, lam0).indices.left_minimal == ind.right_minimal
