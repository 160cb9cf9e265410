"""Pencils, shifted pencils, polynomial matrices and structural index sets."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import ContractViolation, InputError
from .linalg import as_complex_matrix


@dataclass(frozen=True)
class Pencil:
    """The pencil ``L0 + lam * L1``.

    ``norm_scale`` is the factor the entries were divided by; a pencil built
    directly from user data has ``norm_scale == 1``.
    """

    L0: np.ndarray
    L1: np.ndarray
    norm_scale: float = 1.0

    def __post_init__(self):
        L0 = as_complex_matrix(self.L0, "L0")
        L1 = as_complex_matrix(self.L1, "L1")
        if L0.shape != L1.shape:
            raise InputError(f"L0 and L1 shapes differ: {L0.shape} vs {L1.shape}")
        if not self.norm_scale > 0:
            raise InputError("norm_scale must be positive")
        object.__setattr__(self, "L0", L0)
        object.__setattr__(self, "L1", L1)

    @property
    def shape(self):
        return self.L0.shape

    def norms(self):
        return _norm2(self.L0), _norm2(self.L1)

    def normalized(self) -> "Pencil":
        """Rescale so that ``max(||L0||_2, ||L1||_2) == 1`` (zero pencils untouched)."""
        c = max(self.norms())
        if c == 0.0:
            return self
        return Pencil(self.L0 / c, self.L1 / c, self.norm_scale * c)

    def conj_transpose(self) -> "Pencil":
        return Pencil(self.L0.conj().T, self.L1.conj().T, self.norm_scale)

    def __call__(self, lam):
        return self.L0 + lam * self.L1


def _norm2(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


@dataclass(frozen=True)
class ShiftedPencil:
    """``base`` re-expanded about ``lambda0``: ``L0 + lam L1 = Lhat0 + (lam - lambda0) Lhat1``."""

    base: Pencil
    lambda0: complex
    Lhat0: np.ndarray
    Lhat1: np.ndarray

    @property
    def shape(self):
        return self.Lhat0.shape


def make_shifted(p: Pencil, lambda0) -> ShiftedPencil:
    lambda0 = complex(lambda0)
    if not np.isfinite(lambda0):
        raise InputError("lambda0 must be finite")
    return ShiftedPencil(p, lambda0, p.L0 + lambda0 * p.L1, p.L1.copy())


@dataclass(frozen=True)
class PolyMatrix:
    """Matrix polynomial in ``mu = lam - lambda0``.

    ``coeffs[i]`` is the coefficient of ``mu**i``; stored as one
    ``(degree + 1, rows, cols)`` array.
    """

    coeffs: np.ndarray
    lambda0: complex = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 3:
            raise InputError(f"coefficient array must be 3-d, got shape {c.shape}")
        if c.shape[0] == 0:
            raise InputError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "lambda0", complex(self.lambda0))

    @classmethod
    def zeros(cls, rows, cols, lambda0=0.0):
        return cls(np.zeros((1, rows, cols), dtype=complex), lambda0)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def shape(self):
        return self.coeffs.shape[1:]

    def __call__(self, mu):
        """Horner evaluation at ``mu`` (the shifted variable)."""
        out = np.zeros(self.shape, dtype=complex)
        for C in self.coeffs[::-1]:
            out = out * mu + C
        return out

    def at_lambda(self, lam):
        return self(lam - self.lambda0)

    def column(self, j) -> "PolyMatrix":
        return PolyMatrix(self.coeffs[:, :, j:j + 1], self.lambda0)

    def column_degrees(self, tol: float = 0.0) -> list[int]:
        """Per-column degree; -1 for an identically zero column."""
        mags = np.linalg.norm(self.coeffs, axis=1)  # (deg+1, cols)
        degs = []
        for j in range(self.shape[1]):
            nz = np.nonzero(mags[:, j] > tol)[0]
            degs.append(int(nz[-1]) if nz.size else -1)
        return degs

    def trimmed(self, tol: float = 0.0) -> "PolyMatrix":
        """Drop trailing coefficients whose norm is at most ``tol``."""
        c = self.coeffs
        d = c.shape[0]
        while d > 1 and np.linalg.norm(c[d - 1]) <= tol:
            d -= 1
        return PolyMatrix(c[:d], self.lambda0)

    def left_multiply(self, M) -> "PolyMatrix":
        return PolyMatrix(np.einsum("ij,djk->dik", M, self.coeffs), self.lambda0)

    def to_monomial(self) -> "PolyMatrix":
        """Re-expand in powers of ``lam`` (returned with ``lambda0 == 0``)."""
        c = self.coeffs
        out = np.zeros_like(c)
        a = -self.lambda0
        for i in range(c.shape[0]):
            for j in range(i + 1):
                out[j] += comb(i, j) * a ** (i - j) * c[i]
        return PolyMatrix(out, 0.0)

    def shifted_to(self, lambda0) -> "PolyMatrix":
        """Same polynomial, re-expanded in powers of ``lam - lambda0``."""
        mono = self.to_monomial().coeffs
        out = np.zeros_like(mono)
        b = complex(lambda0)
        for i in range(mono.shape[0]):
            for j in range(i + 1):
                out[j] += comb(i, j) * b ** (i - j) * mono[i]
        return PolyMatrix(out, lambda0)


def pencil_apply(P0, P1, X: np.ndarray) -> np.ndarray:
    """Coefficients of ``(P0 + mu P1) X(mu)`` for a coefficient stack X of shape (d+1, n, p)."""
    d1 = X.shape[0]
    out = np.zeros((d1 + 1, P0.shape[0], X.shape[2]), dtype=complex)
    out[:d1] += np.einsum("ij,djk->dik", P0, X)
    out[1:] += np.einsum("ij,djk->dik", P1, X)
    return out


@dataclass(frozen=True)
class StructuralIndices:
    """Minimal indices, partial multiplicities at lambda0 and the normal rank.

    ``left_minimal`` is ``None`` when only the right staircase was run.
    """

    right_minimal: tuple[int, ...]
    partial_multiplicities: tuple[int, ...]
    normal_rank: int
    left_minimal: tuple[int, ...] | None = None

    def as_dict(self):
        return {
            "right_minimal": list(self.right_minimal),
            "left_minimal": None if self.left_minimal is None else list(self.left_minimal),
            "partial_multiplicities": list(self.partial_multiplicities),
            "normal_rank": self.normal_rank,
        }


def check_staircase_indices(s, t):
    s, t = list(map(int, s)), list(map(int, t))
    if len(s) != len(t):
        raise ContractViolation(f"index lists differ in length: s={s}, t={t}")
    seq = []
    for si, ti in zip(s, t):
        seq += [ti, si]
    if any(x < 0 for x in seq) or any(a < b for a, b in zip(seq, seq[1:])):
        raise ContractViolation(f"index sequence must satisfy t1 >= s1 >= t2 >= ...: s={s}, t={t}")
    return s, t


def indices_from_staircase(s, t, n: int | None = None) -> StructuralIndices:
    """Right minimal indices and partial multiplicities from staircase sizes.

    ``t_i - s_i`` minimal indices equal ``i - 1`` and ``s_i - t_{i+1}``
    partial multiplicities equal ``i`` (with ``t_{k+1} = 0``). ``n`` (the
    column count of the full pencil) defaults to ``sum(t)``, i.e. no tail.
    """
    s, t = check_staircase_indices(s, t)
    k = len(s)
    right, mult = [], []
    for i in range(k):
        right += [i] * (t[i] - s[i])
        t_next = t[i + 1] if i + 1 < k else 0
        mult += [i + 1] * (s[i] - t_next)
    n = sum(t) if n is None else n
    return StructuralIndices(tuple(right), tuple(mult), n - len(right))

