"""From staircase form to the block-bidiagonal and Kronecker-like forms.

Coordinates: after :func:`triangularize_stairs` the pencil ``A + mu E`` is
unitarily equivalent to the shifted input. Rows are grouped in staircase
blocks of sizes ``s``, columns in blocks of sizes ``t``; whatever follows is
the tail. Stair blocks have the shapes

    E_ii = [0  Ehat_i]      (Ehat_i: s_i x s_i upper triangular)
    A_i,i+1 = [Ahat_i; 0]   (Ahat_i: t_{i+1} x t_{i+1} upper triangular)

The unit upper triangular pair (S, T) only acts on the leading
``sum(s) x sum(t)`` part; the tail rows vanish on the leading columns, so
the tail is untouched.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import ContractViolation
from .linalg import EPS, ql_upper, rq_upper
from .staircase import StaircaseForm


def _offsets(sizes):
    return np.concatenate([[0], np.cumsum(sizes)]).astype(int)


def _lsolve(R, B, unit=False):
    """``R^{-1} B`` for upper triangular R; empty operands allowed."""
    if B.size == 0:
        return np.zeros((R.shape[1], B.shape[1]), dtype=complex)
    return sla.solve_triangular(R, B, lower=False, unit_diagonal=unit)


def _rsolve(B, R):
    """``B R^{-1}`` for upper triangular R; empty operands allowed."""
    if B.size == 0:
        return np.zeros((B.shape[0], R.shape[0]), dtype=complex)
    return sla.solve_triangular(R, B.T, trans="T", lower=False).T


# ---------------------------------------------------------------------------
# stair pencils


@dataclass(frozen=True)
class StairPencil:
    """A block-bidiagonal pencil stored by its stairs.

    ``Ehat[i]`` is ``s_i x s_i`` and ``Ahat[i]`` is ``t_{i+1} x t_{i+1}``
    (``i < k - 1``); every block other than the stairs is zero.
    """

    s: tuple[int, ...]
    t: tuple[int, ...]
    Ehat: tuple[np.ndarray, ...]
    Ahat: tuple[np.ndarray, ...]

    @property
    def k(self) -> int:
        return len(self.s)

    @property
    def shape(self):
        return int(sum(self.s)), int(sum(self.t))

    def E_block(self, i):
        Ei = np.zeros((self.s[i], self.t[i]), dtype=complex)
        Ei[:, self.t[i] - self.s[i]:] = self.Ehat[i]
        return Ei

    def A_block(self, i):
        Ai = np.zeros((self.s[i], self.t[i + 1]), dtype=complex)
        Ai[: self.t[i + 1], :] = self.Ahat[i]
        return Ai

    def dense(self):
        """``(A, E)`` as dense matrices."""
        ro, co = _offsets(self.s), _offsets(self.t)
        A = np.zeros(self.shape, dtype=complex)
        E = np.zeros(self.shape, dtype=complex)
        for i in range(self.k):
            E[ro[i]:ro[i + 1], co[i]:co[i + 1]] = self.E_block(i)
            if i + 1 < self.k:
                A[ro[i]:ro[i + 1], co[i + 1]:co[i + 2]] = self.A_block(i)
        return A, E

    def min_pivot(self) -> float:
        d = [np.abs(np.diag(M)) for M in (*self.Ehat, *self.Ahat) if M.size]
        return float(min(x.min() for x in d)) if d else np.inf


def _stairs_of(A, E, s, t):
    """Read the stair triangles out of a pencil in staircase coordinates."""
    ro, co = _offsets(s), _offsets(t)
    k = len(s)
    Eh = tuple(E[ro[i]:ro[i + 1], co[i] + t[i] - s[i]:co[i + 1]].copy() for i in range(k))
    Ah = tuple(A[ro[i]:ro[i] + t[i + 1], co[i + 1]:co[i + 2]].copy() for i in range(k - 1))
    return StairPencil(tuple(s), tuple(t), Eh, Ah)


# ---------------------------------------------------------------------------
# triangular stairs


@dataclass(frozen=True)
class TriangularStairForm:
    """Staircase form whose stairs are triangular: ``U^H (Lhat0 + mu Lhat1) V = A + mu E``."""

    U: np.ndarray
    V: np.ndarray
    A: np.ndarray
    E: np.ndarray
    s: tuple[int, ...]
    t: tuple[int, ...]
    tol: float

    @property
    def k(self) -> int:
        return len(self.s)

    @property
    def lead_shape(self):
        return int(sum(self.s)), int(sum(self.t))

    def stairs(self) -> StairPencil:
        return _stairs_of(self.A, self.E, self.s, self.t)


def triangularize_stairs(sf: StaircaseForm) -> TriangularStairForm:
    """Make every stair block triangular by block-diagonal unitary updates.

    Column transforms are built from the last block backwards: the last
    E-stair is RQ-factored; then for each earlier block the A-stair (already
    multiplied by the next column transform) is QR-factored and the row
    transform found there is pushed into the E-stair before its RQ step.
    The leading columns of U and V keep spanning the same nested spaces.
    """
    s, t, k, tol = sf.s, sf.t, sf.k, sf.tol
    m, n = sf.shape
    ro, co = sf.row_offsets, sf.col_offsets
    Ud = np.eye(m, dtype=complex)
    Vd = np.eye(n, dtype=complex)
    Ehat = [None] * k
    Ahat = [None] * k
    if k:
        W, Ehat[k - 1] = rq_upper(sf.block(sf.E, k - 1, k - 1), tol)
        Vd[co[k - 1]:co[k], co[k - 1]:co[k]] = W
    for i in range(k - 2, -1, -1):
        Wn = Vd[co[i + 1]:co[i + 2], co[i + 1]:co[i + 2]]
        Q, Ahat[i] = ql_upper(sf.block(sf.A, i, i + 1) @ Wn, tol)
        W, Ehat[i] = rq_upper(Q.conj().T @ sf.block(sf.E, i, i), tol)
        Ud[ro[i]:ro[i + 1], ro[i]:ro[i + 1]] = Q
        Vd[co[i]:co[i + 1], co[i]:co[i + 1]] = W
    Udh = Ud.conj().T
    A = Udh @ sf.A @ Vd
    E = Udh @ sf.E @ Vd
    for i in range(k):
        rows = slice(ro[i], ro[i + 1])
        # write the stairs back exactly, with their structural zeros
        E[rows, co[i]:co[i + 1]] = 0.0
        E[rows, co[i] + t[i] - s[i]:co[i + 1]] = Ehat[i]
        A[rows, co[i]:co[i + 1]] = 0.0
        if i + 1 < k:
            A[rows, co[i + 1]:co[i + 2]] = 0.0
            A[ro[i]:ro[i] + t[i + 1], co[i + 1]:co[i + 2]] = Ahat[i]
    return TriangularStairForm(sf.U @ Ud, sf.V @ Vd, A, E, s, t, tol)


# ---------------------------------------------------------------------------
# block bidiagonalization


@dataclass(frozen=True)
class BidiagonalForm:
    """``S^{-1} (A + mu E) T`` is block bidiagonal on the leading part.

    ``S`` (``sum(s)`` square) and ``T`` (``sum(t)`` square) are unit upper
    triangular. ``A``/``E`` hold the transformed full pencil as computed;
    ``off_norm`` is the Frobenius size of its leading entries that should
    vanish. ``history`` lists ``off_norm`` after each accepted iterate.
    """

    tf: TriangularStairForm
    S: np.ndarray
    T: np.ndarray
    A: np.ndarray
    E: np.ndarray
    off_norm: float
    refinement_iterations: int = 0
    history: tuple[float, ...] = ()
    diverged: bool = False

    @property
    def s(self):
        return self.tf.s

    @property
    def t(self):
        return self.tf.t

    def stairs(self) -> StairPencil:
        return self.tf.stairs()


def _solve_ecc(st: StairPencil, At, Et, RA, RE):
    """Solve ``Su Ad - At Tu = RA`` and ``Su Ed - Et Tu = RE`` by block back substitution.

    ``At``, ``Et`` are the leading parts of the pencil, ``Ad``, ``Ed`` its
    stairs. ``Su`` is strictly block upper triangular with block (i, j)
    nonzero only in its first ``t_{j+1}`` columns; ``Tu`` likewise with
    block (i, j) nonzero only in its last ``s_i`` rows. Only the entries of
    RA above the A-stairs and of RE above the E-stairs are used.
    """
    s, t, k = st.s, st.t, st.k
    ro, co = _offsets(s), _offsets(t)
    ms, nt = st.shape
    Su = np.zeros((ms, ms), dtype=complex)
    Tu = np.zeros((nt, nt), dtype=complex)
    _, Ed = st.dense()
    for i in range(k - 2, -1, -1):
        ri = slice(ro[i], ro[i + 1])
        tail = slice(co[i + 1], nt)
        # A-equations for column blocks j >= i + 2 give Su[i, j - 1]
        rhs = RA[ri, :] + At[ri, tail] @ Tu[tail, :]
        for j in range(i + 2, k):
            Ah = st.Ahat[j - 1]
            if Ah.size == 0 or s[i] == 0:
                continue
            R = rhs[:, co[j]:co[j + 1]]
            Shat = _rsolve(R, Ah)
            Su[ri, ro[j - 1]:ro[j - 1] + t[j]] = Shat
        # E-equations for column blocks j >= i + 1 give Tu[i, j]
        if s[i] == 0:
            continue
        rhs = Su[ri, :] @ Ed[:, tail] - Et[ri, tail] @ Tu[tail, tail] - RE[ri, tail]
        That = _lsolve(st.Ehat[i], rhs)
        Tu[co[i] + t[i] - s[i]:co[i + 1], tail] = That
    return Su, Tu


def _transform(tf: TriangularStairForm, S, T):
    """``S^{-1} (A, E) T`` on the full pencil, S and T extended by the identity."""
    ms, nt = tf.lead_shape
    out = []
    for M in (tf.A, tf.E):
        M = M.copy()
        M[:, :nt] = M[:, :nt] @ T
        M[:ms, :] = _lsolve(S, M[:ms, :], unit=True)
        out.append(M)
    return out


def _off(tf: TriangularStairForm, st: StairPencil, A, E) -> float:
    ms, nt = tf.lead_shape
    Ad, Ed = st.dense()
    return float(np.linalg.norm(A[:ms, :nt] - Ad) + np.linalg.norm(E[:ms, :nt] - Ed))


def _residual(tf, st, S, T):
    """``(At T - S Ad, Et T - S Ed)`` on the leading part."""
    ms, nt = tf.lead_shape
    Ad, Ed = st.dense()
    At, Et = tf.A[:ms, :nt], tf.E[:ms, :nt]
    return At @ T - S @ Ad, Et @ T - S @ Ed


def _check_pivots(st: StairPencil, tol: float):
    if st.min_pivot() <= tol:
        raise ContractViolation(
            f"stair pivot {st.min_pivot():.3e} is not above the tolerance {tol:.3e}"
        )


def block_bidiagonalize(tf: TriangularStairForm) -> BidiagonalForm:
    """Eliminate every leading block off the stairs with unit upper triangular S, T.

    The stairs themselves are left unaltered; the elimination is one block
    back substitution over the rows of blocks, last row first.
    """
    st = tf.stairs()
    _check_pivots(st, tf.tol)
    ms, nt = tf.lead_shape
    At, Et = tf.A[:ms, :nt], tf.E[:ms, :nt]
    Ad, Ed = st.dense()
    Su, Tu = _solve_ecc(st, At, Et, At - Ad, Et - Ed)
    S = np.eye(ms, dtype=complex) + Su
    T = np.eye(nt, dtype=complex) + Tu
    A, E = _transform(tf, S, T)
    off = _off(tf, st, A, E)
    return BidiagonalForm(tf, S, T, A, E, off, 0, (off,))


def refine_target(bf: BidiagonalForm) -> float:
    """``eps * ||pencil|| * (m + n)`` on the leading part."""
    ms, nt = bf.tf.lead_shape
    scale = max(np.linalg.norm(bf.tf.A[:ms, :nt], 2) if ms and nt else 0.0,
                np.linalg.norm(bf.tf.E[:ms, :nt], 2) if ms and nt else 0.0)
    return EPS * scale * (ms + nt)


def refine(bf: BidiagonalForm, max_iters: int = 2) -> BidiagonalForm:
    """Iterative refinement of (S, T) in working precision.

    Each step recomputes the residual of the elimination equations, solves
    the same triangular system for a correction and keeps the iterate only
    if ``off_norm`` does not grow. Two consecutive increases stop the loop
    and set ``diverged``; the best iterate is always returned.
    """
    tf = bf.tf
    st = tf.stairs()
    ms, nt = tf.lead_shape
    At, Et = tf.A[:ms, :nt], tf.E[:ms, :nt]
    target = refine_target(bf)
    best = bf
    S, T = bf.S, bf.T
    history = list(bf.history)
    rises = 0
    iters = bf.refinement_iterations
    for _ in range(max_iters):
        if best.off_norm <= target:
            break
        RA, RE = _residual(tf, st, S, T)
        dS, dT = _solve_ecc(st, At, Et, RA, RE)
        S = S + dS
        T = T + dT
        S[np.diag_indices(ms)] = 1.0
        T[np.diag_indices(nt)] = 1.0
        iters += 1
        A, E = _transform(tf, S, T)
        off = _off(tf, st, A, E)
        if off <= best.off_norm:
            rises = 0
            history.append(off)
            best = BidiagonalForm(tf, S, T, A, E, off, iters, tuple(history))
        else:
            rises += 1
            if rises >= 2:
                return BidiagonalForm(best.tf, best.S, best.T, best.A, best.E, best.off_norm,
                                      iters, tuple(history), diverged=True)
    return BidiagonalForm(best.tf, best.S, best.T, best.A, best.E, best.off_norm,
                          iters, tuple(history), best.diverged)


# ---------------------------------------------------------------------------
# red / blue splitting


def red_blue_indices(s, t):
    """Split staircase sizes into the singular (red) and nilpotent (blue) parts.

    Runs the recurrence from the last block backwards, seeded with
    ``t_b = 0`` past the last block, then sets ``t_r[0] = t[0] - t_b[0]``.
    """
    s, t = list(s), list(t)
    k = len(s)
    text = t + [0]
    tb = [0] * (k + 1)
    tr = [0] * (k + 1)
    sr, sb = [0] * k, [0] * k
    for i in range(k, 0, -1):
        tr[i] = text[i] - tb[i]
        sr[i - 1] = tr[i]
        sb[i - 1] = s[i - 1] - sr[i - 1]
        tb[i - 1] = sb[i - 1]
    if k:
        tr[0] = t[0] - tb[0]
    return (tuple(sr), tuple(tr[:k])), (tuple(sb), tuple(tb[:k]))


@dataclass(frozen=True)
class SeparatedForm:
    """``Shat^{-1} (Lhat0 + mu Lhat1) That`` with red, blue and tail parts on the diagonal.

    ``A``/``E`` are in separated ordering: red rows/columns, blue
    rows/columns, then the tail. ``row_perm``/``col_perm`` map separated
    positions to staircase positions. ``Sst``/``Tst`` are the triangular
    factors in staircase ordering (``S @ Pdec``, ``T @ Qdec``) and
    ``That = V @ Tst @ Pi2`` in original coordinates.
    """

    bf: BidiagonalForm
    red: StairPencil
    blue: StairPencil
    A: np.ndarray
    E: np.ndarray
    row_perm: np.ndarray
    col_perm: np.ndarray
    Sst: np.ndarray
    Tst: np.ndarray

    @property
    def red_shape(self):
        return self.red.shape

    @property
    def blue_shape(self):
        return self.blue.shape

    @property
    def That(self) -> np.ndarray:
        tf = self.bf.tf
        n = tf.V.shape[0]
        ms, nt = tf.lead_shape
        T = np.eye(n, dtype=complex)
        T[:nt, :nt] = self.Tst
        return (tf.V @ T)[:, self.col_perm]

    @property
    def Shat(self) -> np.ndarray:
        tf = self.bf.tf
        m = tf.U.shape[0]
        ms, nt = tf.lead_shape
        S = np.eye(m, dtype=complex)
        S[:ms, :ms] = self.Sst
        return (tf.U @ S)[:, self.row_perm]


def _decouple(st: StairPencil, red: tuple, blue: tuple):
    """Block-diagonal unit upper triangular (P, Q) removing red/blue coupling in the stairs.

    Within block i the red rows and columns come first. With
    ``P_i = [I X_i; 0 I]`` and ``Q_i = [I Y_i; 0 I]`` the E-stair coupling
    vanishes for ``X_i = (E_rr Y_i + E_rb) E_bb^{-1}`` and the A-stair
    coupling for ``Y_{i+1} = A_rr^{-1} (X_i A_bb - A_rb)``, starting from
    ``Y_1 = 0``.
    """
    (sr, tr), (sb, tb) = red, blue
    s, t, k = st.s, st.t, st.k
    ro, co = _offsets(s), _offsets(t)
    ms, nt = st.shape
    P = np.eye(ms, dtype=complex)
    Q = np.eye(nt, dtype=complex)
    Y = np.zeros((tr[0], tb[0]), dtype=complex) if k else None
    for i in range(k):
        Ei = st.E_block(i)
        Err, Erb, Ebb = Ei[: sr[i], : tr[i]], Ei[: sr[i], tr[i]:], Ei[sr[i]:, tr[i]:]
        X = _rsolve(Err @ Y + Erb, Ebb)
        P[ro[i]:ro[i] + sr[i], ro[i] + sr[i]:ro[i + 1]] = X
        if i + 1 < k:
            Ai = st.A_block(i)
            Arr, Arb, Abb = Ai[: sr[i], : tr[i + 1]], Ai[: sr[i], tr[i + 1]:], Ai[sr[i]:, tr[i + 1]:]
            Y = _lsolve(Arr, X @ Abb - Arb)
            Q[co[i + 1]:co[i + 1] + tr[i + 1], co[i + 1] + tr[i + 1]:co[i + 2]] = Y
    return P, Q


def _sub_stairs(st: StairPencil, red, blue):
    (sr, tr), (sb, tb) = red, blue
    k = st.k
    rE = tuple(st.Ehat[i][: sr[i], : sr[i]] for i in range(k))
    bE = tuple(st.Ehat[i][sr[i]:, sr[i]:] for i in range(k))
    rA = tuple(st.Ahat[i][: tr[i + 1], : tr[i + 1]] for i in range(k - 1))
    bA = tuple(st.Ahat[i][tr[i + 1]:, tr[i + 1]:] for i in range(k - 1))
    return StairPencil(sr, tr, rE, rA), StairPencil(sb, tb, bE, bA)


def _trim(sp: StairPencil) -> StairPencil:
    """Drop trailing empty blocks (both sizes zero)."""
    k = sp.k
    while k and sp.s[k - 1] == 0 and sp.t[k - 1] == 0:
        k -= 1
    return StairPencil(sp.s[:k], sp.t[:k], sp.Ehat[:k], sp.Ahat[: max(k - 1, 0)])


def _group_perm(offsets, first, lead, total):
    """Stable permutation: the first ``first[i]`` entries of each block, then the rest, then the tail."""
    a, b = [], []
    for i in range(len(first)):
        start, stop = offsets[i], offsets[i + 1]
        a += list(range(start, start + first[i]))
        b += list(range(start + first[i], stop))
    return np.array(a + b + list(range(lead, total)), dtype=int)


def split_structure(bf: BidiagonalForm, s=None, t=None) -> SeparatedForm:
    """Decouple the red and blue parts of every stair and permute them apart.

    The result is block upper triangular with the red (right singular)
    pencil, the blue (nilpotent) pencil and the tail on the diagonal.
    """
    s = tuple(bf.s if s is None else s)
    t = tuple(bf.t if t is None else t)
    if s != tuple(bf.s) or t != tuple(bf.t):
        raise ContractViolation("index lists do not match the bidiagonal form")
    st = bf.stairs()
    red, blue = red_blue_indices(s, t)
    P, Q = _decouple(st, red, blue)
    tf = bf.tf
    ms, nt = tf.lead_shape
    m, n = tf.A.shape
    mats = []
    for M in (bf.A, bf.E):
        M = M.copy()
        M[:, :nt] = M[:, :nt] @ Q
        M[:ms, :] = _lsolve(P, M[:ms, :], unit=True)
        mats.append(M)
    rp = _group_perm(_offsets(s), red[0], ms, m)
    cp = _group_perm(_offsets(t), red[1], nt, n)
    A, E = (M[np.ix_(rp, cp)] for M in mats)
    rsp, bsp = _sub_stairs(st, red, blue)
    return SeparatedForm(bf, _trim(rsp), _trim(bsp), A, E, rp, cp, bf.S @ P, bf.T @ Q)


# ---------------------------------------------------------------------------
# Kronecker-like normalization


def normalize_stairs(sp: StairPencil):
    """Block-diagonal upper triangular (P, Q) with identity stairs in ``P^{-1} (A + mu E) Q``.

    ``Q_1 = I``, ``P_i = Ehat_i Q_i[m_i:, m_i:]`` (``m_i = t_i - s_i``) and
    ``Q_{i+1} = Ahat_i^{-1} P_i[:t_{i+1}, :t_{i+1}]``.
    """
    s, t, k = sp.s, sp.t, sp.k
    ro, co = _offsets(s), _offsets(t)
    ms, nt = sp.shape
    P = np.eye(ms, dtype=complex)
    Q = np.eye(nt, dtype=complex)
    Qi = np.eye(t[0], dtype=complex) if k else None
    for i in range(k):
        mi = t[i] - s[i]
        Pi = sp.Ehat[i] @ Qi[mi:, mi:]
        P[ro[i]:ro[i + 1], ro[i]:ro[i + 1]] = Pi
        Q[co[i]:co[i + 1], co[i]:co[i + 1]] = Qi
        if i + 1 < k:
            Qi = _lsolve(sp.Ahat[i], Pi[: t[i + 1], : t[i + 1]])
    return P, Q


def identity_stairs(s, t) -> StairPencil:
    k = len(s)
    return StairPencil(tuple(s), tuple(t),
                       tuple(np.eye(s[i], dtype=complex) for i in range(k)),
                       tuple(np.eye(t[i + 1], dtype=complex) for i in range(k - 1)))


@dataclass(frozen=True)
class KroneckerForm:
    """``S'^{-1} (A_sep + mu E_sep) T'`` with identity stairs, in separated ordering.

    ``Sk``/``Tk`` are the full upper triangular factors on the leading part
    in staircase ordering, so ``Sk^{-1} (At + mu Et) Tk`` (At, Et the
    triangular-stair pencil, factors extended by the identity on the tail)
    is the Kronecker-like form in staircase ordering; see
    :meth:`staircase_order`.
    """

    sepf: SeparatedForm
    A: np.ndarray
    E: np.ndarray
    Sp: np.ndarray
    Tp: np.ndarray
    Sk: np.ndarray
    Tk: np.ndarray
    red: StairPencil
    blue: StairPencil

    def staircase_order(self):
        """``(A_K, E_K)`` with rows and columns back in staircase ordering."""
        rp, cp = self.sepf.row_perm, self.sepf.col_perm
        A = np.empty_like(self.A)
        E = np.empty_like(self.E)
        A[np.ix_(rp, cp)] = self.A
        E[np.ix_(rp, cp)] = self.E
        return A, E

    def ideal(self):
        """The exact Kronecker-like pencil (leading part only) in staircase ordering."""
        bf = self.sepf.bf
        return identity_stairs(bf.s, bf.t).dense()


def _blockdiag(*Ms):
    return sla.block_diag(*Ms) if Ms else np.zeros((0, 0), dtype=complex)


def _extend(M, size):
    """``M`` as the leading block of an identity of order ``size``."""
    out = np.eye(size, dtype=complex)
    out[: M.shape[0], : M.shape[1]] = M
    return out


def kronecker_normalize(sepf: SeparatedForm) -> KroneckerForm:
    """Scale every stair of the separated form to an identity block.

    The red and blue stair pencils are normalized separately; the factors
    are then folded into the triangular pair of the separated form and the
    whole equivalence is applied once to the triangular-stair pencil, which
    keeps the reconstruction error at the level of ``eps ||Sk|| ||Tk^{-1}||``.
    """
    tf = sepf.bf.tf
    _check_pivots(sepf.red, tf.tol)
    _check_pivots(sepf.blue, tf.tol)
    Pr, Qr = normalize_stairs(sepf.red)
    Pb, Qb = normalize_stairs(sepf.blue)
    m, n = tf.A.shape
    ms, nt = tf.lead_shape
    Sp = _blockdiag(Pr, Pb).astype(complex)
    Tp = _blockdiag(Qr, Qb).astype(complex)
    # back to staircase ordering on the leading part: still upper triangular
    rp, cp = sepf.row_perm[:ms], sepf.col_perm[:nt]
    Sp_st = np.empty_like(Sp)
    Tp_st = np.empty_like(Tp)
    Sp_st[np.ix_(rp, rp)] = Sp
    Tp_st[np.ix_(cp, cp)] = Tp
    Sk = sepf.Sst @ Sp_st
    Tk = sepf.Tst @ Tp_st
    Sf, Tf = _extend(Sk, m), _extend(Tk, n)
    rows, cols = sepf.row_perm, sepf.col_perm
    A, E = (_lsolve(Sf, M @ Tf)[np.ix_(rows, cols)] for M in (tf.A, tf.E))
    return KroneckerForm(sepf, A, E, Sp, Tp, Sk, Tk,
                         identity_stairs(sepf.red.s, sepf.red.t),
                         identity_stairs(sepf.blue.s, sepf.blue.t))
