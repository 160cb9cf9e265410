"""Unitary staircase reduction of a shifted pencil at the expansion point.

The reduction alternates a column compression of the constant coefficient
(pre-image step of the Wong recursion) with a row compression of the linear
coefficient restricted to the new columns (image step). Block ``i`` of the
result has ``s[i]`` rows and ``t[i]`` columns; everything after the last
block is the tail ``A_r + mu E_r`` whose constant part has full column rank.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import RankDecision, col_compress, default_tol, row_compress
from .pencil import ShiftedPencil, indices_from_staircase


@dataclass(frozen=True)
class StaircaseForm:
    """``U^H (Lhat0 + mu Lhat1) V = A + mu E`` in staircase shape."""

    U: np.ndarray
    V: np.ndarray
    A: np.ndarray
    E: np.ndarray
    s: tuple[int, ...]
    t: tuple[int, ...]
    tol: float
    decisions: tuple[RankDecision, ...] = ()

    @property
    def k(self) -> int:
        return len(self.s)

    @property
    def shape(self):
        return self.A.shape

    @property
    def row_offsets(self):
        return np.concatenate([[0], np.cumsum(self.s)]).astype(int)

    @property
    def col_offsets(self):
        return np.concatenate([[0], np.cumsum(self.t)]).astype(int)

    @property
    def tail_rows(self) -> int:
        return self.A.shape[0] - sum(self.s)

    @property
    def tail_cols(self) -> int:
        return self.A.shape[1] - sum(self.t)

    def block(self, M, i, j):
        """Block (i, j) of A or E, 0-based; index k addresses the tail."""
        ro, co = self.row_offsets, self.col_offsets
        r0 = ro[i]
        r1 = ro[i + 1] if i < self.k else M.shape[0]
        c0 = co[j]
        c1 = co[j + 1] if j < self.k else M.shape[1]
        return M[r0:r1, c0:c1]

    def indices(self):
        return indices_from_staircase(self.s, self.t, n=self.A.shape[1])

    def min_margin(self) -> float:
        """Smallest gap between the tolerance and a singular value it decided on."""
        gaps = [abs(d.smallest_accepted - d.tolerance_used) for d in self.decisions if d.rank > 0]
        gaps += [abs(d.tolerance_used - d.largest_rejected) for d in self.decisions]
        return min(gaps) if gaps else float("inf")


@dataclass(frozen=True)
class WongChain:
    dims_U: tuple[int, ...]
    dims_V: tuple[int, ...]


def staircase_reduce(sp: ShiftedPencil, tol: float | None = None) -> StaircaseForm:
    """Staircase form of ``sp`` at mu = 0.

    ``tol`` is an absolute singular-value threshold; by default
    ``1e3 * max(m, n) * eps * max(||Lhat0||_2, ||Lhat1||_2)``.
    """
    A = sp.Lhat0.astype(complex, copy=True)
    E = sp.Lhat1.astype(complex, copy=True)
    m, n = A.shape
    if tol is None:
        tol = default_tol(m, n, _norm2(A), _norm2(E))
    U = np.eye(m, dtype=complex)
    V = np.eye(n, dtype=complex)
    s, t, decisions = [], [], []
    r0 = c0 = 0
    while c0 < n:
        W, _, dA = col_compress(A[r0:, c0:], tol)
        decisions.append(dA)
        ti = (n - c0) - dA.rank
        if s:
            # exact arithmetic gives t_{i+1} <= s_i; keep the s_i most-null directions
            ti = min(ti, s[-1])
        if ti == 0:
            break
        A[:, c0:] = A[:, c0:] @ W
        E[:, c0:] = E[:, c0:] @ W
        V[:, c0:] = V[:, c0:] @ W
        A[r0:, c0:c0 + ti] = 0.0

        Q, _, dE = row_compress(E[r0:, c0:c0 + ti], tol)
        decisions.append(dE)
        si = dE.rank
        Qh = Q.conj().T
        A[r0:, :] = Qh @ A[r0:, :]
        E[r0:, :] = Qh @ E[r0:, :]
        U[:, r0:] = U[:, r0:] @ Q
        A[r0:, c0:c0 + ti] = 0.0
        E[r0 + si:, c0:c0 + ti] = 0.0

        s.append(si)
        t.append(ti)
        r0 += si
        c0 += ti
        if si == 0:
            break
    return StaircaseForm(U, V, A, E, tuple(s), tuple(t), float(tol), tuple(decisions))


def _norm2(M):
    return float(np.linalg.norm(M, 2)) if M.size else 0.0


def wong_chain(sf: StaircaseForm) -> WongChain:
    """Dimensions of the Wong spaces spanned by the leading columns of U and V."""
    return WongChain(tuple(np.cumsum(sf.s).tolist()), tuple(np.cumsum(sf.t).tolist()))


def wong_bases(sf: StaircaseForm):
    """Orthonormal bases ``[(U_i, V_i)]`` of the chain, i = 1..k."""
    ch = wong_chain(sf)
    return [(sf.U[:, :su], sf.V[:, :tv]) for su, tv in zip(ch.dims_U, ch.dims_V)]


def backward_error(sf: StaircaseForm, sp: ShiftedPencil) -> float:
    """``||U A V^H - Lhat0||_F + ||U E V^H - Lhat1||_F``."""
    UA = sf.U @ sf.A @ sf.V.conj().T
    UE = sf.U @ sf.E @ sf.V.conj().T
    return float(np.linalg.norm(UA - sp.Lhat0) + np.linalg.norm(UE - sp.Lhat1))
