"""Random pencils with a planted staircase structure at a chosen point."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, InputError
from .linalg import random_unitary
from .pencil import Pencil, check_staircase_indices

FILLS = ("normal", "complex")


@dataclass(frozen=True)
class GeneratorSpec:
    """Staircase sizes plus sampling options.

    ``tail`` is the (rows, cols) size of an optional trailing block whose
    constant part has full column rank (rows >= cols); ``lambda0`` moves the
    planted structure from 0 to that point.
    """

    s: tuple[int, ...]
    t: tuple[int, ...]
    seed: int = 0
    disguise: bool = False
    fill: str = "normal"
    tail: tuple[int, int] = (0, 0)
    lambda0: complex = 0.0
    min_pivot: float = 1e-2

    def __post_init__(self):
        try:
            check_staircase_indices(self.s, self.t)
        except ContractViolation as exc:
            raise InputError(str(exc)) from None
        if self.fill not in FILLS:
            raise InputError(f"unknown fill {self.fill!r}; expected one of {FILLS}")
        tr, tc = self.tail
        if tr < tc or tc < 0:
            raise InputError("tail must have rows >= cols >= 0")


def _sample(rng, shape, fill):
    X = rng.standard_normal(shape)
    if fill == "complex":
        X = (X + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return X.astype(complex)


def _triangular(rng, n, fill, min_pivot):
    T = np.triu(_sample(rng, (n, n), fill))
    d = np.diag(T).copy()
    for j in np.nonzero(np.abs(d) < min_pivot)[0]:
        # keep the phase, push the modulus away from zero
        d[j] = min_pivot * (d[j] / abs(d[j]) if d[j] != 0 else 1.0)
    T[np.diag_indices(n)] = d
    return T


def planted_staircase(spec: GeneratorSpec):
    """The undisguised, unnormalized pair ``(A, E)`` in staircase form at 0."""
    rng = np.random.default_rng(spec.seed)
    s, t = list(spec.s), list(spec.t)
    k = len(s)
    tr, tc = spec.tail
    m, n = sum(s) + tr, sum(t) + tc
    ro = np.concatenate([[0], np.cumsum(s)]).astype(int)
    co = np.concatenate([[0], np.cumsum(t)]).astype(int)
    A = np.zeros((m, n), dtype=complex)
    E = np.zeros((m, n), dtype=complex)
    for i in range(k):
        rows = slice(ro[i], ro[i + 1])
        # E: stair [0 Ehat] plus free blocks to the right
        Ei = np.zeros((s[i], t[i]), dtype=complex)
        Ei[:, t[i] - s[i]:] = _triangular(rng, s[i], spec.fill, spec.min_pivot)
        E[rows, co[i]:co[i + 1]] = Ei
        E[rows, co[i + 1]:] = _sample(rng, (s[i], n - co[i + 1]), spec.fill)
        if i + 1 < k:
            Ai = np.zeros((s[i], t[i + 1]), dtype=complex)
            Ai[: t[i + 1], :] = _triangular(rng, t[i + 1], spec.fill, spec.min_pivot)
            A[rows, co[i + 1]:co[i + 2]] = Ai
            A[rows, co[i + 2]:] = _sample(rng, (s[i], n - co[i + 2]), spec.fill)
        else:
            A[rows, co[k]:] = _sample(rng, (s[i], n - co[k]), spec.fill)
    if tr:
        # orthonormal columns: a nearly rank-deficient tail would sit within
        # roundoff of a pencil with more structure at 0
        real = spec.fill == "normal"
        Q = random_unitary(tr, rng, real)[:, :tc]
        A[ro[k]:, co[k]:] = Q @ random_unitary(tc, rng, real) if tc else Q
        E[ro[k]:, co[k]:] = _sample(rng, (tr, tc), spec.fill)
    return A, E, rng


def generate_pencil(spec: GeneratorSpec) -> Pencil:
    """Normalized pencil ``L0 + lam L1`` whose structure at ``spec.lambda0`` is the planted one."""
    A, E, rng = planted_staircase(spec)
    m, n = A.shape
    if spec.disguise:
        real = spec.fill == "normal"
        U = random_unitary(m, rng, real)
        V = random_unitary(n, rng, real)
        A = U @ A @ V.conj().T
        E = U @ E @ V.conj().T
    L0 = A - complex(spec.lambda0) * E
    return Pencil(L0, E).normalized()


MATLABEX = GeneratorSpec(s=(4, 2, 0), t=(5, 3, 1))
