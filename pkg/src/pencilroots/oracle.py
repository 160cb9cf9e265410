"""Brute-force checks: block-Toeplitz ranks and residual diagnostics.

Nothing here reuses the staircase machinery. Ranks come from singular
values of explicitly assembled Toeplitz matrices, which is slow
(cubic in ``k (m + n)``) and meant for verification only.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .linalg import EPS, numerical_rank

# The Toeplitz matrices are assembled from the pencil directly, so a single
# SVD is their only roundoff; a small factor over max(rows, cols) * eps
# suffices and keeps geometrically decaying (but nonzero) singular values
# of nearly singular Toeplitz blocks on the right side of the threshold.
ORACLE_SAFETY = 10.0
from .pencil import Pencil, PolyMatrix, ShiftedPencil, StructuralIndices, make_shifted, pencil_apply


@dataclass(frozen=True)
class ToeplitzReport:
    """Nullities and ranks of the three Toeplitz families and the counts they imply.

    ``mu[k]``, ``nu[k]`` and ``r[k]`` are indexed by ``k`` starting at 0;
    ``m_counts[j]`` is the number of right minimal indices equal to ``j``,
    ``n_counts[j]`` the same for left ones, ``e_counts[i - 1]`` the number
    of partial multiplicities equal to ``i``.
    """

    mu: tuple[int, ...]
    nu: tuple[int, ...]
    r: tuple[int, ...]
    m_counts: tuple[int, ...]
    n_counts: tuple[int, ...]
    e_counts: tuple[int, ...]
    normal_rank: int
    complete: bool
    tol: float

    def right_minimal(self):
        return tuple(j for j, c in enumerate(self.m_counts) for _ in range(c))

    def left_minimal(self):
        return tuple(j for j, c in enumerate(self.n_counts) for _ in range(c))

    def partial_multiplicities(self):
        return tuple(i + 1 for i, c in enumerate(self.e_counts) for _ in range(c))

    def indices(self) -> StructuralIndices:
        return StructuralIndices(self.right_minimal(), self.partial_multiplicities(),
                                 self.normal_rank, self.left_minimal())


def toeplitz_right(L0, L1, k):
    """``m (k+1) x n k``: L1 on the block diagonal, L0 below it."""
    m, n = L0.shape
    T = np.zeros((m * (k + 1), n * k), dtype=complex)
    for j in range(k):
        T[j * m:(j + 1) * m, j * n:(j + 1) * n] = L1
        T[(j + 1) * m:(j + 2) * m, j * n:(j + 1) * n] = L0
    return T


def toeplitz_left(L0, L1, k):
    """``m k x n (k+1)``: L0 on the block diagonal, L1 right of it."""
    m, n = L0.shape
    T = np.zeros((m * k, n * (k + 1)), dtype=complex)
    for j in range(k):
        T[j * m:(j + 1) * m, j * n:(j + 1) * n] = L0
        T[j * m:(j + 1) * m, (j + 1) * n:(j + 2) * n] = L1
    return T


def toeplitz_local(L0, L1, k):
    """``m (k+1) x n (k+1)``: L0 on the block diagonal, L1 right of it."""
    m, n = L0.shape
    T = np.zeros((m * (k + 1), n * (k + 1)), dtype=complex)
    for j in range(k + 1):
        T[j * m:(j + 1) * m, j * n:(j + 1) * n] = L0
        if j < k:
            T[j * m:(j + 1) * m, (j + 1) * n:(j + 2) * n] = L1
    return T


def _second_diff(x, lo_pad):
    """``x[j-1] - 2 x[j] + x[j+1]`` with ``lo_pad`` zeros prepended to ``x``."""
    y = [0] * lo_pad + list(x)
    return [y[j - 1] - 2 * y[j] + y[j + 1] for j in range(1, len(y) - 1)]


def _tol_for(T, scale, tol):
    return tol if tol is not None else ORACLE_SAFETY * max(T.shape + (1,)) * EPS * scale


def toeplitz_structure(sp: ShiftedPencil, kmax: int | None = None, tol: float | None = None):
    """Minimal indices and partial multiplicities at 0 from Toeplitz ranks.

    ``kmax`` defaults to ``min(m, n) + 1``. With ``tol=None`` each rank uses
    ``10 * max(rows, cols) * eps * (||Lhat0|| + ||Lhat1||)``.
    """
    L0, L1 = sp.Lhat0, sp.Lhat1
    m, n = L0.shape
    if kmax is None:
        kmax = min(m, n) + 1
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    scale = (np.linalg.norm(L0, 2) if L0.size else 0.0) + (np.linalg.norm(L1, 2) if L1.size else 0.0)
    used = []

    def rank(T):
        t = _tol_for(T, scale, tol)
        used.append(t)
        return numerical_rank(T, t).rank

    # mu_k for k = 0..kmax+1, nu_k likewise, r_k for k = 0..kmax
    mu = [0] + [n * k - rank(toeplitz_right(L0, L1, k)) for k in range(1, kmax + 2)]
    nu = [0] + [m * k - rank(toeplitz_left(L0, L1, k)) for k in range(1, kmax + 2)]
    r = [rank(toeplitz_local(L0, L1, k)) for k in range(kmax + 1)]
    m_counts = _second_diff(mu, 1)[: kmax + 1]
    n_counts = _second_diff(nu, 1)[: kmax + 1]
    e_counts = _second_diff(r, 2)[1:]
    # normal rank from a few random evaluation points
    rng = np.random.default_rng(0)
    nr = 0
    for _ in range(3):
        z = complex(rng.standard_normal(), rng.standard_normal())
        M = L0 + z * L1
        nr = max(nr, numerical_rank(M, _tol_for(M, scale * (1 + abs(z)), tol)).rank)
    complete = (sum(m_counts) == n - nr and sum(n_counts) == m - nr
                and min(m_counts + n_counts + e_counts, default=0) >= 0)
    return ToeplitzReport(tuple(mu), tuple(nu), tuple(r), tuple(_strip(m_counts)),
                          tuple(_strip(n_counts)), tuple(_strip(e_counts)), nr, complete,
                          float(max(used, default=0.0)))


def _strip(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def counts_from_indices(ind: StructuralIndices):
    """``(m_counts, n_counts, e_counts)`` in the layout of :class:`ToeplitzReport`."""

    def hist(vals, start):
        if not vals:
            return ()
        h = [0] * (max(vals) + 1 - start)
        for v in vals:
            h[v - start] += 1
        return tuple(h)

    return (hist(ind.right_minimal, 0), hist(ind.left_minimal or (), 0),
            hist(ind.partial_multiplicities, 1))


# ---------------------------------------------------------------------------
# zero directions


def _as_column(x: PolyMatrix, lambda0) -> np.ndarray:
    if x.shape[1] != 1:
        raise ValueError("expected a single polynomial column")
    return x.shifted_to(lambda0).coeffs


def product_coeffs(L: Pencil, x: PolyMatrix, lambda0) -> np.ndarray:
    """Coefficients of ``L(lam) x(lam)`` in powers of ``lam - lambda0``."""
    sp = make_shifted(L, lambda0)
    X = x.shifted_to(lambda0).coeffs if complex(x.lambda0) != complex(lambda0) else x.coeffs
    return pencil_apply(sp.Lhat0, sp.Lhat1, X)


def verify_zero_direction(L: Pencil, x: PolyMatrix, lambda0, k: int, rtol: float = 1e-10):
    """Is ``x`` a zero direction of order exactly ``k`` at ``lambda0``?

    Returns ``(ok, v0)`` where ``v0`` is the coefficient of
    ``(lam - lambda0)^k`` in ``L x``. Thresholds are ``rtol`` times
    ``max(||L0||, ||L1||) * ||x||_F`` (coefficients stacked).
    """
    X = _as_column(x, lambda0)
    P = product_coeffs(L, PolyMatrix(X, lambda0), lambda0)
    scale = max(max(L.norms()), 1e-300) * max(np.linalg.norm(X), 1e-300)
    tol = rtol * scale
    x0 = X[0, :, 0]
    low = P[:k].reshape(-1)
    v0 = P[k, :, 0] if k < P.shape[0] else np.zeros(P.shape[1], dtype=complex)
    ok = (np.linalg.norm(x0) > tol and np.linalg.norm(low) <= tol
          and np.linalg.norm(v0) > tol)
    return bool(ok), v0


# ---------------------------------------------------------------------------
# residual diagnostics


@dataclass(frozen=True)
class ResidualReport:
    eps_kappa: float
    back: float
    off: float
    resN: float
    normN: float
    resR: float
    normR: float

    FIELDS = ("eps_kappa", "back", "off", "resN", "normN", "resR", "normR")

    def as_row(self):
        return [getattr(self, f) for f in self.FIELDS]

    def as_dict(self):
        return {f: getattr(self, f) for f in self.FIELDS}


def null_residual(Lhat0, Lhat1, N: PolyMatrix) -> float:
    """Frobenius norm of all coefficients of ``(Lhat0 + mu Lhat1) N(mu)``."""
    return float(np.linalg.norm(pencil_apply(Lhat0, Lhat1, N.coeffs)))


def root_residual(Lhat0, Lhat1, Q: PolyMatrix, orders) -> float:
    """Frobenius norm of ``(Lhat0 + mu Lhat1) q_i(mu) mod mu^{l_i}`` over all columns."""
    P = pencil_apply(Lhat0, Lhat1, Q.coeffs)
    tot = 0.0
    for j, ell in enumerate(orders):
        tot += float(np.sum(np.abs(P[:ell, :, j]) ** 2))
    return float(np.sqrt(tot))


def _right_tri_solve(B, T):
    """``B T^{-1}`` for upper triangular T."""
    if B.size == 0:
        return np.zeros((B.shape[0], T.shape[0]), dtype=complex)
    return sla.solve_triangular(T, B.T, trans="T", lower=False).T


def residual_report(kf, Lhat0, Lhat1, basis, roots) -> ResidualReport:
    """The seven diagnostics for one analysis.

    ``kf`` is the Kronecker-like form; ``basis``/``roots`` are in original
    coordinates and ``Lhat0 + mu Lhat1`` is the normalized shifted input.
    Back and Off are measured in the triangular-stair coordinates.
    """
    tf = kf.sepf.bf.tf
    m, n = tf.A.shape
    ms, nt = tf.lead_shape
    Sk = np.eye(m, dtype=complex)
    Sk[:ms, :ms] = kf.Sk
    Tk = np.eye(n, dtype=complex)
    Tk[:nt, :nt] = kf.Tk
    AK, EK = kf.staircase_order()
    back = sum(float(np.linalg.norm(_right_tri_solve(Sk @ MK, Tk) - M))
               for MK, M in ((AK, tf.A), (EK, tf.E)))
    Tinv = _right_tri_solve(np.eye(n, dtype=complex), Tk)
    Ai, Ei = kf.ideal()
    off = (np.linalg.norm(AK[:ms, :nt] - Ai) + np.linalg.norm(EK[:ms, :nt] - Ei))
    eps_kappa = EPS * (np.linalg.norm(Sk, 2) if m else 0.0) * (np.linalg.norm(Tinv, 2) if n else 0.0)
    return ResidualReport(
        float(eps_kappa), float(back), float(off),
        null_residual(Lhat0, Lhat1, basis.N), float(np.linalg.norm(basis.N.coeffs)),
        root_residual(Lhat0, Lhat1, roots.Q, roots.orders), float(np.linalg.norm(roots.Q.coeffs)),
    )
