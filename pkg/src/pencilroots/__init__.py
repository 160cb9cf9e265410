"""Local eigenstructure of matrix pencils: minimal indices, partial multiplicities,
minimal bases and root polynomials at a point."""
from .bidiag import (BidiagonalForm, KroneckerForm, SeparatedForm, StairPencil,
                     TriangularStairForm, block_bidiagonalize, kronecker_normalize, refine,
                     split_structure, triangularize_stairs)
from .errors import ContractViolation, InputError
from .extract import (MinimalBasis, RightInverse, RootPolynomialSet, left_structure,
                      lift_to_original, minimal_basis, right_inverse, root_polynomials)
from .generate import MATLABEX, GeneratorSpec, generate_pencil
from .oracle import ResidualReport, ToeplitzReport, toeplitz_structure, verify_zero_direction
from .pencil import Pencil, PolyMatrix, ShiftedPencil, StructuralIndices, make_shifted
from .pipeline import AnalyzeConfig, StructureReport, analyze, analyze_right
from .staircase import StaircaseForm, staircase_reduce

__version__ = "0.1.0"
