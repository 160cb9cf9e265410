"""Dense complex kernels with explicit rank decisions.

Every rank decision is made on singular values; the compressions below are
thin wrappers around the SVD that return the unitary factor with the range
and null directions arranged the way the staircase reduction consumes them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import ContractViolation, InputError

EPS = np.finfo(float).eps
# roundoff in the compressions grows to a few tens of max(m, n) * eps; the
# default threshold sits well above that
TOL_SAFETY = 1e3


@dataclass(frozen=True)
class RankDecision:
    """Outcome of a numerical rank test.

    ``smallest_accepted`` is the smallest singular value counted in the rank
    and ``largest_rejected`` the largest one discarded (0.0 when there is
    none), so ``smallest_accepted - tolerance_used`` and
    ``tolerance_used - largest_rejected`` are the decision margins.
    """

    rank: int
    tolerance_used: float
    smallest_accepted: float
    largest_rejected: float


def as_complex_matrix(M, name="matrix") -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise InputError(f"{name} must be two-dimensional, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError(f"{name} has non-finite entries")
    return M


def default_tol(m: int, n: int, *norms: float) -> float:
    """TOL_SAFETY * max(m, n) * eps * max(norms); the rank threshold used when none is given."""
    scale = max([0.0, *norms])
    return TOL_SAFETY * max(m, n, 1) * EPS * scale


def _decide(sv: np.ndarray, tol: float) -> RankDecision:
    r = int(np.sum(sv > tol))
    accepted = float(sv[r - 1]) if r > 0 else 0.0
    rejected = float(sv[r]) if r < sv.size else 0.0
    return RankDecision(r, float(tol), accepted, rejected)


def _svd(M: np.ndarray):
    m, n = M.shape
    if m == 0 or n == 0:
        return np.eye(m, dtype=complex), np.zeros(0), np.eye(n, dtype=complex)
    U, sv, Vh = np.linalg.svd(M)
    return U, sv, Vh.conj().T


def numerical_rank(M, tol: float) -> RankDecision:
    M = np.asarray(M)
    if M.size == 0:
        return RankDecision(0, float(tol), 0.0, 0.0)
    return _decide(np.linalg.svd(M, compute_uv=False), tol)


def row_compress(M, tol: float):
    """Unitary Q with ``Q^H M = [M1; 0]``, M1 of full numerical row rank.

    Returns ``(Q, R, decision)`` where ``R = Q^H M`` has its trailing
    ``rows - rank`` rows set to exact zeros.
    """
    if tol < 0:
        raise InputError("tol must be nonnegative")
    M = as_complex_matrix(M)
    Q, sv, _ = _svd(M)
    d = _decide(sv, tol)
    R = Q.conj().T @ M
    R[d.rank:, :] = 0.0
    return Q, R, d


def col_compress(M, tol: float):
    """Unitary V with ``M V = [0 M1]``, M1 of full numerical column rank.

    The leading ``cols - rank`` columns of V span the numerical null space,
    ordered by increasing singular value, so truncating the null block from
    the right keeps the directions closest to the null space.
    """
    if tol < 0:
        raise InputError("tol must be nonnegative")
    M = as_complex_matrix(M)
    _, sv, V = _svd(M)
    d = _decide(sv, tol)
    V = V[:, ::-1].copy()
    C = M @ V
    C[:, : M.shape[1] - d.rank] = 0.0
    return V, C, d


def _positive_diagonal_phases(diag: np.ndarray) -> np.ndarray:
    mag = np.abs(diag)
    ph = np.ones_like(diag)
    nz = mag > 0
    ph[nz] = diag[nz] / mag[nz]
    return ph


def rq_upper(E, tol: float):
    """Unitary V with ``E V = [0 Ehat]``, Ehat upper triangular with real positive diagonal.

    E must be s x t with full row rank s; a diagonal entry of Ehat below
    ``tol`` raises :class:`ContractViolation`.
    """
    E = as_complex_matrix(E)
    s, t = E.shape
    if s > t:
        raise ContractViolation(f"rq_upper needs s <= t, got {E.shape}")
    if s == 0:
        return np.eye(t, dtype=complex), np.zeros((0, 0), dtype=complex)
    R, Q = sla.rq(E)  # E = R Q, R = [0 R1]
    V = Q.conj().T
    Ehat = R[:, t - s:]
    ph = _positive_diagonal_phases(np.diag(Ehat).copy())
    # E V diag(1, ph^-1 ...) keeps the zero block and rescales R1's columns
    V[:, t - s:] = V[:, t - s:] * ph.conj()
    Ehat = np.triu(Ehat * ph.conj())
    if np.min(np.abs(np.diag(Ehat))) <= tol:
        raise ContractViolation("stair block is numerically rank deficient (rq_upper)")
    return V, Ehat


def ql_upper(A, tol: float):
    """Unitary U with ``U^H A = [Ahat; 0]``, Ahat upper triangular with real positive diagonal.

    A must be s x t with full column rank t.
    """
    A = as_complex_matrix(A)
    s, t = A.shape
    if t > s:
        raise ContractViolation(f"ql_upper needs t <= s, got {A.shape}")
    if t == 0:
        return np.eye(s, dtype=complex), np.zeros((0, 0), dtype=complex)
    Q, R = np.linalg.qr(A, mode="complete")
    Ahat = R[:t, :]
    ph = _positive_diagonal_phases(np.diag(Ahat).copy())
    Q[:, :t] = Q[:, :t] * ph
    Ahat = np.triu(ph.conj()[:, None] * Ahat)
    if np.min(np.abs(np.diag(Ahat))) <= tol:
        raise ContractViolation("stair block is numerically rank deficient (ql_upper)")
    return Q, Ahat


def random_unitary(n: int, rng: np.random.Generator, real: bool = False) -> np.ndarray:
    """Haar-distributed unitary (orthogonal if ``real``)."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    Z = rng.standard_normal((n, n))
    if not real:
        Z = Z + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return (Q * _positive_diagonal_phases(np.diag(R).copy())).astype(complex)
