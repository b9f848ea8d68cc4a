import numpy as np
import pytest

from conftest import random_unit_strong_m
from msplit.errors import (
    ConfigError,
    NormalizationError,
    ReconstructionError,
    SingularEMatrixError,
    VariantDomainError,
)
from msplit.preconditioning import PreconditionerSpec, normalize
from msplit.problems import generate_example
from msplit.splittings import (
    Family,
    SplitPair,
    SplittingVariant,
    _finish,
    iteration_tensor,
    lu_factor_e,
    make_splitting,
)
from msplit.tensor_core import identity_tensor, majorization, matrix_tensor_product, split_dlf

BANDED = [f for f in Family if not f.is_baseline and f is not Family.SOR]


def variant(family, omega=1.2):
    return SplittingVariant(family, omega if family.needs_omega else None)


@pytest.fixture
def A1n():
    return normalize(generate_example(1).A)[0]


@pytest.mark.parametrize("family", list(Family), ids=lambda f: f.value)
def test_every_family_reconstructs(family, rng):
    A = random_unit_strong_m(rng, 5)
    spec = PreconditionerSpec("full_band", 0.7, 0.4, 1, 1)
    if family.is_baseline:
        spec = PreconditionerSpec("baseline_column" if family is Family.BASELINE_SOR else "baseline_row", 0.5, 0.5)
    pair = make_splitting(A, spec, variant(family))
    assert pair.reconstruction_error() < 1e-12
    assert pair.e_matrix.shape == (5, 5)


@pytest.mark.parametrize("family", [f for f in BANDED if f not in (Family.JACOBI_E5, Family.GAUSS_SEIDEL_M5)],
                         ids=lambda f: f.value)
@pytest.mark.parametrize("s,k", [(1, 2), (2, 2), (3, 1)])
def test_wider_bands_reconstruct(family, s, k, rng):
    A = random_unit_strong_m(rng, 5)
    spec = PreconditionerSpec("full_band", 0.9, 0.6, s, k)
    assert make_splitting(A, spec, variant(family)).reconstruction_error() < 1e-12


def test_zero_parameters_collapse_to_plain_jacobi(A1n):
    pair = make_splitting(A1n, PreconditionerSpec("full_band", 0, 0), "e2f2")
    _, L, F = split_dlf(A1n)
    np.testing.assert_array_equal(pair.e_matrix, np.eye(3))
    np.testing.assert_allclose(pair.f_tensor, matrix_tensor_product(L, identity_tensor(3, 3)) + F, atol=1e-16)
    assert np.all(iteration_tensor(pair) >= 0)


def test_sor_omega_one_equals_gauss_seidel(A1n):
    sor = make_splitting(A1n, None, SplittingVariant(Family.SOR, 1.0))
    gs = make_splitting(A1n, None, "m1n1")
    np.testing.assert_allclose(sor.e_matrix, gs.e_matrix, atol=1e-15)
    np.testing.assert_allclose(sor.f_tensor, gs.f_tensor, atol=1e-15)


def test_e5_diagonal_closed_form(A1n):
    pair = make_splitting(A1n, PreconditionerSpec("full_band", 1, 1, 1, 1), "e5f5")
    inv = np.linalg.inv(pair.e_matrix)
    assert inv[0, 0] == pytest.approx(1 / (1 - 0.07 * 0.02), abs=1e-12)
    # E5 is diagonal when s = k = 1
    np.testing.assert_array_equal(pair.e_matrix - np.diag(np.diag(pair.e_matrix)), 0)


def test_e5_m5_need_unit_offsets(A1n):
    for fam in ("e5f5", "m5n5"):
        with pytest.raises(VariantDomainError):
            make_splitting(A1n, PreconditionerSpec("full_band", 1, 1, 2, 1), fam)


def test_banded_families_need_unit_diagonal():
    A = generate_example(3).A
    with pytest.raises(NormalizationError):
        make_splitting(A, PreconditionerSpec("full_band", 1, 1), "e2f2")


def test_banded_family_rejects_baseline_spec(A1n):
    with pytest.raises(ConfigError):
        make_splitting(A1n, PreconditionerSpec("baseline_row", 1, 0), "m2n2")


def test_variant_parsing():
    assert SplittingVariant.parse("PSOR", 1.3).omega == 1.3
    assert SplittingVariant.parse("e2f2", 1.3).omega is None
    with pytest.raises(ConfigError):
        SplittingVariant.parse("nope")
    with pytest.raises(ConfigError):
        SplittingVariant(Family.SOR)
    with pytest.raises(ConfigError):
        SplittingVariant(Family.JACOBI_E1, 1.0)


def test_singular_e_matrix():
    with pytest.raises(SingularEMatrixError):
        lu_factor_e(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(SingularEMatrixError):
        lu_factor_e(np.zeros((2, 2)))


def test_reconstruction_check_fires(A1n):
    pair = make_splitting(A1n, None, "e1f1")
    bad_F = pair.f_tensor + 1e-6
    with pytest.raises(ReconstructionError):
        _finish(pair.e_matrix, bad_F, pair.variant, pair.preconditioned_tensor, pair.preconditioner, None, True)


def test_iteration_tensor_identity_e(A1n):
    pair = make_splitting(A1n, PreconditionerSpec("full_band", 0.3, 0.3), "e2f2")
    np.testing.assert_allclose(iteration_tensor(pair), pair.f_tensor, atol=1e-16)


def test_iteration_tensor_solves_fibers(A1n, rng):
    pair = make_splitting(A1n, PreconditionerSpec("full_band", 0.5, 0.5), "m2n2")
    T = iteration_tensor(pair)
    np.testing.assert_allclose(matrix_tensor_product(pair.e_matrix, T), pair.f_tensor, atol=1e-14)


@pytest.mark.parametrize("family", ["e2f2", "e3f3", "e4f4", "e5f5", "m1n1", "m2n2", "m3n3", "m4n4"])
def test_regular_splitting_in_theory_range(family, rng):
    """For parameters in [0, 1] the iteration tensor is nonnegative."""
    A = random_unit_strong_m(rng, 4)
    pair = make_splitting(A, PreconditionerSpec("full_band", rng.random(), rng.random(), 1, 1), family)
    T = iteration_tensor(pair)
    assert T.min() >= -1e-13 * T.max()


def test_baseline_splits_on_own_diagonal():
    ex = generate_example(3)
    pair = make_splitting(ex.A, PreconditionerSpec("baseline_row", 0.0, 0.0), "pj-baseline")
    np.testing.assert_allclose(pair.e_matrix, np.diag(np.diag(majorization(ex.A))))
    pair = make_splitting(ex.A, PreconditionerSpec("baseline_column", 0, 0.5),
                          SplittingVariant(Family.BASELINE_SOR, 1.2))
    assert isinstance(pair, SplitPair)
