"""Preconditioned tensor-splitting solvers for multilinear systems ``A x^{m-1} = b``
with strong M-tensor coefficients."""

from .errors import *  # noqa: F401,F403
from .preconditioning import (
    PreconditionerSpec,
    Variant,
    build_preconditioner,
    check_conditions,
    classify,
    normalize,
)
from .problems import generate_example
from .solver import SolveOptions, SolveReport, Status, solve, solve_system
from .spectral import SpectralEstimate, compare_rho, iteration_radius, spectral_radius
from .splittings import Family, SplitPair, SplittingVariant, iteration_tensor, make_splitting
from .tensor_core import contract, identity_tensor, majorization, matrix_tensor_product

__version__ = "0.1.0"
