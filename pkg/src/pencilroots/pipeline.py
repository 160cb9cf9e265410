"""End-to-end analysis of a pencil at an expansion point."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .bidiag import (BidiagonalForm, KroneckerForm, SeparatedForm, block_bidiagonalize,
                     kronecker_normalize, refine, split_structure, triangularize_stairs)
from .extract import (MinimalBasis, RightInverse, RootPolynomialSet, lift_to_original,
                      minimal_basis, right_inverse, root_polynomials)
from .oracle import ResidualReport, ToeplitzReport, residual_report, toeplitz_structure
from .pencil import Pencil, PolyMatrix, ShiftedPencil, StructuralIndices, make_shifted
from .staircase import StaircaseForm, staircase_reduce


@dataclass(frozen=True)
class AnalyzeConfig:
    """Knobs of :func:`analyze`.

    ``tol`` is an absolute singular-value threshold on the normalized
    shifted pencil (``None`` picks the default); ``left`` also runs the
    conjugate-transposed pencil; ``verify`` runs the Toeplitz oracle.
    """

    tol: float | None = None
    refine_iters: int = 2
    verify: bool = False
    left: bool = True


@dataclass(frozen=True)
class RightResult:
    pencil: Pencil
    shifted: ShiftedPencil
    staircase: StaircaseForm
    bidiagonal: BidiagonalForm
    separated: SeparatedForm
    kronecker: KroneckerForm
    indices: StructuralIndices
    basis: MinimalBasis
    roots: RootPolynomialSet
    right_inverse: RightInverse
    basis_local: MinimalBasis
    roots_local: RootPolynomialSet
    residuals: ResidualReport


@dataclass(frozen=True)
class StructureReport:
    """Everything :func:`analyze` computes.

    ``basis`` and ``roots`` live in the input coordinates and are expanded
    in powers of ``lam - lambda0``; ``right.right_inverse`` is in the frame
    of the red stair pencil, ``right.basis_local``/``right.roots_local`` in
    that of the Kronecker-like form.
    """

    lambda0: complex
    indices: StructuralIndices
    right: RightResult
    left_basis: MinimalBasis | None
    toeplitz: ToeplitzReport | None

    @property
    def basis(self) -> MinimalBasis:
        return self.right.basis

    @property
    def roots(self) -> RootPolynomialSet:
        return self.right.roots

    @property
    def residuals(self) -> ResidualReport:
        return self.right.residuals

    def red_blue(self):
        sep = self.right.separated
        return {"red": {"s": list(sep.red.s), "t": list(sep.red.t)},
                "blue": {"s": list(sep.blue.s), "t": list(sep.blue.t)}}

    def to_dict(self, expand_monomial: bool = False):
        sf = self.right.staircase
        out = {
            "lambda0": _cpx(self.lambda0),
            "shape": list(self.right.pencil.shape),
            "indices": self.indices.as_dict(),
            "staircase": {"s": list(sf.s), "t": list(sf.t), "tol": sf.tol,
                          "min_margin": _finite(sf.min_margin())},
            "split": self.red_blue(),
            "refinement": {"iterations": self.right.bidiagonal.refinement_iterations,
                           "off_history": list(self.right.bidiagonal.history),
                           "diverged": self.right.bidiagonal.diverged},
            "minimal_basis": {"degrees": list(self.basis.degrees),
                              **_poly_doc(self.basis.N, expand_monomial)},
            "root_polynomials": {"orders": list(self.roots.orders),
                                 **_poly_doc(self.roots.Q, expand_monomial)},
            "residuals": self.residuals.as_dict(),
        }
        if self.toeplitz is not None:
            tr = self.toeplitz
            out["toeplitz"] = {"mu": list(tr.mu), "nu": list(tr.nu), "r": list(tr.r),
                               "m_counts": list(tr.m_counts), "n_counts": list(tr.n_counts),
                               "e_counts": list(tr.e_counts), "complete": tr.complete,
                               "agrees": _agrees(tr, self.indices)}
        return out


def _finite(x):
    return None if not np.isfinite(x) else float(x)


def _cpx(z):
    z = complex(z)
    return [z.real, z.imag]


def _poly_doc(P: PolyMatrix, expand_monomial: bool):
    if expand_monomial:
        P = P.to_monomial()
    C = P.coeffs
    return {
        "variable": "lam" if expand_monomial else "lam - lambda0",
        "coefficients": np.stack([C.real, C.imag], axis=-1).tolist(),
    }


def _agrees(tr: ToeplitzReport, ind: StructuralIndices) -> bool:
    return (tr.right_minimal() == tuple(sorted(ind.right_minimal))
            and tr.partial_multiplicities() == tuple(sorted(ind.partial_multiplicities))
            and (ind.left_minimal is None or tr.left_minimal() == tuple(sorted(ind.left_minimal))))


def analyze_right(p: Pencil, lambda0=0.0, config: AnalyzeConfig | None = None) -> RightResult:
    """Right structure: staircase, bidiagonal and Kronecker-like forms, basis and roots."""
    config = config or AnalyzeConfig()
    lambda0 = complex(lambda0)
    pn = p.normalized()
    sp = make_shifted(pn, lambda0)
    sf = staircase_reduce(sp, config.tol)
    tf = triangularize_stairs(sf)
    bf = block_bidiagonalize(tf)
    if config.refine_iters > 0:
        bf = refine(bf, config.refine_iters)
    sepf = split_structure(bf)
    kf = kronecker_normalize(sepf)
    # vectors are read off the identity-stair pencils and lifted through
    # the full triangular factors of the Kronecker-like form
    mb = replace(minimal_basis(kf.red, lambda0), frame="kronecker")
    rps = replace(root_polynomials(kf.blue, lambda0), frame="kronecker")
    ri = right_inverse(sepf.red, lambda0)
    mb_o, rps_o = lift_to_original(sepf, mb, rps, kf)
    res = residual_report(kf, sp.Lhat0, sp.Lhat1, mb_o, rps_o)
    return RightResult(pn, sp, sf, bf, sepf, kf, sf.indices(), mb_o, rps_o, ri, mb, rps, res)


def analyze(p: Pencil, lambda0=0.0, config: AnalyzeConfig | None = None) -> StructureReport:
    """Minimal indices, partial multiplicities, minimal basis and root polynomials at ``lambda0``."""
    config = config or AnalyzeConfig()
    lambda0 = complex(lambda0)
    right = analyze_right(p, lambda0, config)
    indices = right.indices
    left_basis = None
    if config.left:
        lres = analyze_right(p.conj_transpose(), lambda0.conjugate(), replace(config, left=False))
        indices = replace(indices, left_minimal=lres.indices.right_minimal)
        left_basis = lres.basis
    tr = toeplitz_structure(right.shifted) if config.verify else None
    return StructureReport(lambda0, indices, right, left_basis, tr)
