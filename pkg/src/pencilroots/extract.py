"""Minimal basis, root polynomials and right inverse from stair pencils.

All three are closed-form recurrences on the stairs of a bidiagonal pencil
in the shifted variable ``mu``; :func:`lift_to_original` maps them back
through the accumulated equivalence.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .bidiag import SeparatedForm, StairPencil, _lsolve, _offsets
from .errors import ContractViolation, InputError
from .pencil import PolyMatrix

FRAMES = ("bidiagonal", "kronecker", "original")


@dataclass(frozen=True)
class MinimalBasis:
    """Columns of ``N`` span the right null space; ``degrees`` ascend."""

    N: PolyMatrix
    degrees: tuple[int, ...]
    frame: str = "bidiagonal"


@dataclass(frozen=True)
class RootPolynomialSet:
    """Root polynomials as the columns of ``Q``, with orders in descending order."""

    Q: PolyMatrix
    orders: tuple[int, ...]
    frame: str = "bidiagonal"

    @property
    def lambda0(self):
        return self.Q.lambda0

    @property
    def vectors(self):
        return [self.Q.column(j) for j in range(self.Q.shape[1])]


@dataclass(frozen=True)
class RightInverse:
    R: PolyMatrix
    frame: str = "bidiagonal"


def _require_pivots(sp: StairPencil, which: str):
    mats = sp.Ahat if which == "A" else sp.Ehat
    for M in mats:
        if M.size and np.min(np.abs(np.diag(M))) == 0.0:
            raise ContractViolation(f"singular {which}-stair")


def minimal_basis(red: StairPencil, lambda0=0.0) -> MinimalBasis:
    """Polynomial basis of the right null space of a pencil with square A-stairs.

    Block ``i`` of ``N`` is ``Z_{i-1} ... Z_1 mu^{i-1}`` with
    ``Z_i = [0, -Ahat_i^{-1} Ehat_i]``.
    """
    s, t, k = red.s, red.t, red.k
    if any(t[i + 1] != s[i] for i in range(k - 1)) or (k and s[-1] != 0):
        raise ContractViolation(f"not a right singular stair pencil: s={s}, t={t}")
    _require_pivots(red, "A")
    n = red.shape[1]
    t1 = t[0] if k else 0
    co = _offsets(t)
    C = np.zeros((max(k, 1), n, t1), dtype=complex)
    if k:
        prod = np.eye(t1, dtype=complex)
        C[0, : t[0], :] = prod
        for i in range(k - 1):
            Z = np.zeros((t[i + 1], t[i]), dtype=complex)
            Z[:, t[i] - s[i]:] = -np.triu(_lsolve(red.Ahat[i], red.Ehat[i]))
            prod = Z @ prod
            C[i + 1, co[i + 1]:co[i + 2], :] = prod
    degrees = []
    for d in range(k):
        nxt = t[d + 1] if d + 1 < k else 0
        degrees += [d] * (t[d] - nxt)
    return MinimalBasis(PolyMatrix(C, lambda0).trimmed(), tuple(degrees))


def root_polynomials(blue: StairPencil, lambda0=0.0) -> RootPolynomialSet:
    """Maximal set of root polynomials at ``mu = 0`` for a pencil with square E-stairs.

    For order ``i`` block ``j <= i`` carries ``mu^{j-1} Zh_j ... Zh_{i-1}``
    (``Zh_j = -E_jj^{-1} A_j,j+1``); the rightmost ``t_i - t_{i+1}``
    columns are the root polynomials of order ``i``.
    """
    s, t, k = blue.s, blue.t, blue.k
    if any(si != ti for si, ti in zip(s, t)):
        raise ContractViolation(f"not a regular nilpotent stair pencil: s={s}, t={t}")
    _require_pivots(blue, "E")
    n = blue.shape[1]
    co = _offsets(t)
    Zh = []
    for j in range(k - 1):
        Zh.append(-_lsolve(blue.Ehat[j], blue.A_block(j)))
    cols, orders = [], []
    for i in range(k, 0, -1):
        nxt = t[i] if i < k else 0
        cnt = t[i - 1] - nxt
        if cnt == 0:
            continue
        X = np.zeros((i, n, cnt), dtype=complex)
        block = np.eye(t[i - 1], dtype=complex)[:, t[i - 1] - cnt:]
        X[i - 1, co[i - 1]:co[i], :] = block
        for j in range(i - 2, -1, -1):
            block = Zh[j] @ block
            X[j, co[j]:co[j + 1], :] = block
        cols.append(X)
        orders += [i] * cnt
    deg = max((X.shape[0] for X in cols), default=1)
    Q = np.zeros((deg, n, len(orders)), dtype=complex)
    c = 0
    for X in cols:
        Q[: X.shape[0], :, c:c + X.shape[2]] = X
        c += X.shape[2]
    return RootPolynomialSet(PolyMatrix(Q, lambda0), tuple(orders))


def right_inverse(red: StairPencil, lambda0=0.0) -> RightInverse:
    """``R(mu) = sum_i mu^i Z^i Adag`` with ``Z = -Adag E`` nilpotent.

    ``Adag`` places ``Ahat_i^{-1}`` from row block ``i`` to column block
    ``i + 1``, so ``A Adag = I``.
    """
    s, t, k = red.s, red.t, red.k
    if any(t[i + 1] != s[i] for i in range(k - 1)) or (k and s[-1] != 0):
        raise ContractViolation(f"not a right singular stair pencil: s={s}, t={t}")
    _require_pivots(red, "A")
    m, n = red.shape
    ro, co = _offsets(s), _offsets(t)
    Adag = np.zeros((n, m), dtype=complex)
    for i in range(k - 1):
        Adag[co[i + 1]:co[i + 2], ro[i]:ro[i + 1]] = sla.inv(red.Ahat[i]) if s[i] else 0.0
    _, E = red.dense()
    Z = -Adag @ E
    C = np.zeros((max(k - 1, 1), n, m), dtype=complex)
    term = Adag
    for i in range(max(k - 1, 1)):
        C[i] = term
        term = Z @ term
    return RightInverse(PolyMatrix(C, lambda0).trimmed())


def lift_to_original(sepf: SeparatedForm, mb: MinimalBasis, rps: RootPolynomialSet, kf=None):
    """Map basis and root polynomials from the separated pencil to the input coordinates.

    The red basis is padded by zeros on the blue and tail columns, the blue
    root polynomials by zeros on the red and tail columns, and both are
    multiplied by ``That``. Inputs in the ``"kronecker"`` frame (computed on
    the identity-stair pencils of ``kf``) are multiplied by the matching
    transform of ``kf`` instead. Degrees and orders do not change.
    """
    frame = mb.frame
    if rps.frame != frame or frame not in ("bidiagonal", "kronecker"):
        raise InputError(f"cannot lift frames {mb.frame!r}/{rps.frame!r}")
    if (frame == "kronecker") != (kf is not None):
        raise InputError("kronecker-frame inputs need the Kronecker form and only those")
    nr = sepf.red_shape[1]
    nb = sepf.blue_shape[1]
    if mb.N.shape[0] != nr or rps.Q.shape[0] != nb:
        raise InputError("basis or root polynomial size does not match the separated form")
    if kf is None:
        That = sepf.That
    else:
        tf = sepf.bf.tf
        n = tf.V.shape[0]
        nt = tf.lead_shape[1]
        T = np.eye(n, dtype=complex)
        T[:nt, :nt] = kf.Tk
        That = (tf.V @ T)[:, sepf.col_perm]
    N = PolyMatrix(np.einsum("ij,djk->dik", That[:, :nr], mb.N.coeffs), mb.N.lambda0)
    Q = PolyMatrix(np.einsum("ij,djk->dik", That[:, nr:nr + nb], rps.Q.coeffs), rps.Q.lambda0)
    return MinimalBasis(N, mb.degrees, "original"), RootPolynomialSet(Q, rps.orders, "original")


def left_structure(p, lambda0=0.0, config=None):
    """Left minimal indices and a left minimal basis via the conjugate-transposed pencil.

    Returns ``(indices, basis)``: ``indices.right_minimal`` of the transposed
    run are the left minimal indices of ``p``. Conjugating the coefficients
    of ``basis.N`` gives polynomial columns ``y`` with ``y(mu)^T L = 0``,
    ``mu = lam - lambda0``.
    """
    from .pipeline import analyze_right

    res = analyze_right(p.conj_transpose(), np.conj(complex(lambda0)), config)
    return res.indices, res.basis
