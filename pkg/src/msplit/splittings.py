"""Tensor splittings ``A' = E - F`` of a (preconditioned) unit-diagonal tensor.

Every ``E`` used here is a matrix times the identity tensor, so a splitting
is stored as the matrix ``M(E)`` plus the tensor ``F``. With
``A = I - L - F_A`` (``L`` the negated strict lower triangle of ``M(A)``),
``P = I + S + K`` the banded preconditioner and ``A' = P A``:

========  ==========================================================
family    E-matrix / F-tensor
========  ==========================================================
e1f1      ``P``  /  ``P (L + F_A)``
e2f2      ``I``  /  ``P (L + F_A) - (S + K) I``
e3f3      as e2f2 with ``K = 0``
e4f4      as e2f2 with ``S = 0``
e5f5      ``I - S K1 - K S1``  /  ``E - P A``  (``s = k = 1``)
m1n1      ``P (I - L)``  /  ``P F_A``
m2n2      ``I - D_a - D_b - L + K - K L - L_a - L_b``  /
          ``F_A - S I + S F_A + F_a + F_b``
m3n3      as m2n2 with ``K = 0``
m4n4      as m2n2 with ``S = 0``
m5n5      ``(I + K)(I - L) - S L - K S1``  /
          ``(I + S) F_A - S I + K F'``  (``s = k = 1``)
sor       ``(I - w L) / w``  /  ``((1 - w) I + w F_A) / w``
psor      ``(D_ab - w L_ab) / w``  /  ``((1 - w) D_ab I + w F_ab) / w``
========  ==========================================================

Here ``S L = D_a + L_a + F_a`` and ``K F_A = D_b + L_b + F_b`` are split by
diagonal / strict lower / rest of their majorization matrices, ``K1``,
``S1`` are the bands with every parameter set to one, ``F' = F_A - S1 I``,
``D_ab = I - D_a - D_b``, ``L_ab = L - K + K L + L_a + L_b`` and
``F_ab = F_A - S I + S F_A + F_a + F_b``.

The three ``*-baseline`` families are the classical Jacobi, Gauss-Seidel and
SOR splittings of ``P A`` taken on its own diagonal, for use with the
reference preconditioners.
"""

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    ConfigError,
    NormalizationError,
    ReconstructionError,
    SingularEMatrixError,
    VariantDomainError,
)
from .preconditioning import PreconditionerSpec, Variant, band_matrices, has_unit_diagonal
from .tensor_core import (
    as_tensor,
    dlf_parts,
    identity_tensor,
    majorization,
    matrix_tensor_product,
    split_dlf,
)

__all__ = [
    "Family",
    "SplittingVariant",
    "SplitPair",
    "make_splitting",
    "iteration_tensor",
    "lu_factor_e",
    "RECONSTRUCTION_TOL",
]

RECONSTRUCTION_TOL = 1e-10


class Family(enum.Enum):
    JACOBI_E1 = "e1f1"
    JACOBI_E2 = "e2f2"
    JACOBI_E3 = "e3f3"
    JACOBI_E4 = "e4f4"
    JACOBI_E5 = "e5f5"
    GAUSS_SEIDEL_M1 = "m1n1"
    GAUSS_SEIDEL_M2 = "m2n2"
    GAUSS_SEIDEL_M3 = "m3n3"
    GAUSS_SEIDEL_M4 = "m4n4"
    GAUSS_SEIDEL_M5 = "m5n5"
    SOR = "sor"
    PRECOND_SOR = "psor"
    BASELINE_JACOBI = "pj-baseline"
    BASELINE_GAUSS_SEIDEL = "pgs-baseline"
    BASELINE_SOR = "psor-baseline"

    @property
    def needs_omega(self):
        return self in (Family.SOR, Family.PRECOND_SOR, Family.BASELINE_SOR)

    @property
    def is_baseline(self):
        return self in (Family.BASELINE_JACOBI, Family.BASELINE_GAUSS_SEIDEL, Family.BASELINE_SOR)


@dataclass(frozen=True)
class SplittingVariant:
    family: Family
    omega: float = None

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        if family.needs_omega:
            if self.omega is None or not self.omega > 0:
                raise ConfigError(f"{family.value} needs a relaxation factor omega > 0")
            object.__setattr__(self, "omega", float(self.omega))
        elif self.omega is not None:
            raise ConfigError(f"{family.value} takes no relaxation factor")

    @classmethod
    def parse(cls, name, omega=None):
        try:
            family = Family(name.lower())
        except ValueError:
            names = ", ".join(f.value for f in Family)
            raise ConfigError(f"unknown splitting {name!r}; choose from {names}") from None
        return cls(family, omega if family.needs_omega else None)

    @property
    def name(self):
        return self.family.value


@dataclass(frozen=True)
class SplitPair:
    """A splitting ``target = e_matrix I_m - f_tensor``.

    ``preconditioner`` is the matrix ``P`` with ``target = P A``; the
    right-hand side to pair with this splitting is ``P b``.
    """

    e_matrix: np.ndarray
    f_tensor: np.ndarray
    variant: SplittingVariant
    preconditioned_tensor: np.ndarray
    preconditioner: np.ndarray
    spec: PreconditionerSpec = None
    _lu: tuple = field(default=None, repr=False, compare=False)

    @property
    def order(self):
        return self.f_tensor.ndim

    @property
    def dim(self):
        return self.f_tensor.shape[0]

    def reconstruction_error(self):
        E = matrix_tensor_product(self.e_matrix, identity_tensor(self.order, self.dim))
        return float(np.max(np.abs(E - self.f_tensor - self.preconditioned_tensor)))

    def lu(self):
        if self._lu is None:
            object.__setattr__(self, "_lu", lu_factor_e(self.e_matrix))
        return self._lu

    def solve_e(self, rhs):
        """Apply ``M(E)^{-1}`` to a vector or to the rows of a matrix."""
        return scipy.linalg.lu_solve(self.lu(), rhs)


def lu_factor_e(E):
    """LU factorization with partial pivoting; raises on a singular ``E``."""
    E = np.asarray(E, dtype=float)
    scale = np.max(np.abs(E)) if E.size else 0.0
    if scale == 0.0:
        raise SingularEMatrixError("E-matrix is zero")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(E, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if np.min(pivots) <= E.shape[0] * np.finfo(float).eps * scale:
        raise SingularEMatrixError(f"E-matrix is singular (smallest pivot {np.min(pivots):.3e})")
    return lu, piv


def _bands_for(family, A, spec):
    S, K = band_matrices(A, spec)
    if family in (Family.JACOBI_E3, Family.GAUSS_SEIDEL_M3):
        K = np.zeros_like(K)
    elif family in (Family.JACOBI_E4, Family.GAUSS_SEIDEL_M4):
        S = np.zeros_like(S)
    return S, K


def make_splitting(A, spec=None, variant=None, check=True):
    """Build the splitting ``variant`` of ``P A`` with ``P`` given by ``spec``.

    Parameters
    ----------
    A : array_like
        Coefficient tensor. Must have a unit diagonal except for the
        baseline families, which split ``P A`` on its own diagonal.
    spec : PreconditionerSpec, optional
        Preconditioner; defaults to the identity. The banded families need
        a banded variant (full/upper/lower); the baselines accept any.
        ``sor`` ignores it.
    variant : SplittingVariant or str
        Family (and relaxation factor for the SOR families).
    check : bool
        Verify ``E I_m - F == P A`` and raise :class:`ReconstructionError`
        when the largest deviation exceeds ``RECONSTRUCTION_TOL``.

    Returns
    -------
    SplitPair
    """
    A = as_tensor(A)
    n, m = A.shape[0], A.ndim
    if spec is None:
        spec = PreconditionerSpec.identity()
    if isinstance(variant, str):
        variant = SplittingVariant.parse(variant)
    if variant is None:
        raise ConfigError("a splitting variant is required")
    family = variant.family
    I_m = identity_tensor(m, n)
    eye = np.eye(n)

    if family.is_baseline:
        P = _baseline_preconditioner(spec, A)
        target = matrix_tensor_product(P, A)
        E = _classical_e(target, family, variant.omega)
        F = matrix_tensor_product(E, I_m) - target
        return _finish(E, F, variant, target, P, spec, check)

    if not has_unit_diagonal(A):
        raise NormalizationError(f"{family.value} needs a unit-diagonal tensor; normalize A first")

    if family is Family.SOR:
        w = variant.omega
        _, L, F_A = split_dlf(A)
        E = (eye - w * L) / w
        F = ((1.0 - w) * I_m + w * F_A) / w
        return _finish(E, F, variant, A, eye, PreconditionerSpec.identity(), check)

    if spec.variant.is_baseline:
        raise ConfigError(f"{family.value} needs a banded preconditioner (full/upper/lower)")
    if family in (Family.JACOBI_E5, Family.GAUSS_SEIDEL_M5) and (
        (spec.uses_upper and spec.s != 1) or (spec.uses_lower and spec.k != 1)
    ):
        raise VariantDomainError(f"{family.value} is only defined for s = k = 1")

    S, K = _bands_for(family, A, spec)
    P = eye + S + K
    target = matrix_tensor_product(P, A)
    _, L, F_A = split_dlf(A)
    L_t = matrix_tensor_product(L, I_m)

    if family is Family.JACOBI_E1:
        E = P
        F = matrix_tensor_product(P, L_t + F_A)
    elif family in (Family.JACOBI_E2, Family.JACOBI_E3, Family.JACOBI_E4):
        E = eye
        F = matrix_tensor_product(P, L_t + F_A) - matrix_tensor_product(S + K, I_m)
    elif family is Family.JACOBI_E5:
        S1, K1 = _unit_bands(A)
        E = eye - S @ K1 - K @ S1
        F = matrix_tensor_product(E, I_m) - target
    elif family is Family.GAUSS_SEIDEL_M1:
        E = P @ (eye - L)
        F = matrix_tensor_product(P, F_A)
    elif family is Family.GAUSS_SEIDEL_M5:
        S1, _ = _unit_bands(A)
        F_prime = F_A - matrix_tensor_product(S1, I_m)
        E = (eye + K) @ (eye - L) - S @ L - K @ S1
        F = (
            matrix_tensor_product(eye + S, F_A)
            - matrix_tensor_product(S, I_m)
            + matrix_tensor_product(K, F_prime)
        )
    else:
        D_a, L_a, F_a = dlf_parts(matrix_tensor_product(S, L_t))
        D_b, L_b, F_b = dlf_parts(matrix_tensor_product(K, F_A))
        D_ab = eye - D_a - D_b
        L_ab = L - K + K @ L + L_a + L_b
        F_ab = F_A - matrix_tensor_product(S, I_m) + matrix_tensor_product(S, F_A) + F_a + F_b
        if family is Family.PRECOND_SOR:
            w = variant.omega
            E = (D_ab - w * L_ab) / w
            F = ((1.0 - w) * matrix_tensor_product(D_ab, I_m) + w * F_ab) / w
        else:
            E = D_ab - L_ab
            F = F_ab
    return _finish(E, F, variant, target, P, spec, check)


def _unit_bands(A):
    """First upper and lower bands with every parameter equal to one."""
    n = A.shape[0]
    if n < 2:
        return np.zeros((n, n)), np.zeros((n, n))
    return band_matrices(A, PreconditionerSpec(Variant.FULL_BAND, 1.0, 1.0, 1, 1))


def _baseline_preconditioner(spec, A):
    from .preconditioning import build_preconditioner

    if spec.variant.is_baseline:
        return build_preconditioner(spec, A)
    if not has_unit_diagonal(A):
        raise NormalizationError("banded preconditioners need a unit-diagonal tensor")
    return build_preconditioner(spec, A)


def _classical_e(target, family, omega):
    Mt = majorization(target)
    D = np.diag(np.diag(Mt))
    if family is Family.BASELINE_JACOBI:
        return D
    L = -np.tril(Mt, -1)
    if family is Family.BASELINE_GAUSS_SEIDEL:
        return D - L
    return (D - omega * L) / omega


def _finish(E, F, variant, target, P, spec, check):
    pair = SplitPair(E, F, variant, target, P, spec)
    pair.lu()
    if check:
        err = pair.reconstruction_error()
        scale = max(1.0, float(np.max(np.abs(target))))
        if err > RECONSTRUCTION_TOL * scale:
            raise ReconstructionError(
                f"{variant.name}: E I - F deviates from P A by {err:.3e}"
            )
    return pair


def iteration_tensor(split):
    """Return ``M(E)^{-1} F`` (one LU factorization, one solve per mode-1 fiber)."""
    n = split.dim
    rhs = split.f_tensor.reshape(n, -1)
    return split.solve_e(rhs).reshape(split.f_tensor.shape)
