import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import loop_contract, loop_matrix_tensor
from msplit.errors import DimensionError, NegativeRadicandError
from msplit.tensor_core import (
    as_tensor,
    contract,
    diagonal,
    dlf_parts,
    elementwise_root,
    identity_tensor,
    majorization,
    matrix_tensor_product,
    split_dlf,
    tensor_from_entries,
)


def test_identity_tensor_entries():
    I = identity_tensor(3, 4)
    assert I.shape == (4, 4, 4)
    assert I.sum() == 4
    assert I[2, 2, 2] == 1 and I[2, 2, 1] == 0


def test_identity_contracts_to_power():
    x = np.array([1.0, 2.0, -3.0])
    np.testing.assert_array_equal(contract(identity_tensor(4, 3), x), x**3)


def test_contract_order_two_is_matvec():
    rng = np.random.default_rng(0)
    M, x = rng.standard_normal((5, 5)), rng.standard_normal(5)
    np.testing.assert_allclose(contract(M, x), M @ x, rtol=1e-14)


def test_contract_matches_loop_oracle_small():
    A = np.arange(27, dtype=float).reshape(3, 3, 3)
    x = np.array([1.0, -1.0, 2.0])
    np.testing.assert_allclose(contract(A, x), loop_contract(A, x), rtol=1e-15)
    # hand value for row 0: sum_jk a_0jk x_j x_k
    assert contract(A, x)[0] == sum(A[0, j, k] * x[j] * x[k] for j in range(3) for k in range(3))


def test_contract_is_deterministic():
    rng = np.random.default_rng(1)
    A, x = rng.random((6, 6, 6, 6)), rng.random(6)
    assert np.array_equal(contract(A, x), contract(A, x))


def test_contract_dimension_mismatch():
    with pytest.raises(DimensionError):
        contract(np.zeros((3, 3, 3)), np.zeros(4))


def test_matrix_tensor_product_identity_and_oracle():
    rng = np.random.default_rng(2)
    B = rng.standard_normal((4, 4, 4))
    M = rng.standard_normal((4, 4))
    np.testing.assert_array_equal(matrix_tensor_product(np.eye(4), B), B)
    np.testing.assert_allclose(matrix_tensor_product(M, B), loop_matrix_tensor(M, B), rtol=1e-13, atol=1e-14)


def test_matrix_tensor_product_with_identity_tensor_embeds_matrix():
    M = np.array([[1.0, 2.0], [3.0, 4.0]])
    T = matrix_tensor_product(M, identity_tensor(3, 2))
    np.testing.assert_array_equal(majorization(T), M)
    assert T[0, 0, 1] == 0


def test_matrix_tensor_product_is_associative():
    rng = np.random.default_rng(3)
    M1, M2, B = rng.random((3, 3)), rng.random((3, 3)), rng.random((3, 3, 3))
    lhs = matrix_tensor_product(M1, matrix_tensor_product(M2, B))
    np.testing.assert_allclose(lhs, matrix_tensor_product(M1 @ M2, B), rtol=1e-13)


def test_majorization_and_diagonal():
    A = np.arange(8, dtype=float).reshape(2, 2, 2)
    np.testing.assert_array_equal(majorization(A), [[A[0, 0, 0], A[0, 1, 1]], [A[1, 0, 0], A[1, 1, 1]]])
    np.testing.assert_array_equal(diagonal(A), [0.0, 7.0])


def test_as_tensor_rejects_bad_shapes():
    with pytest.raises(DimensionError):
        as_tensor(np.zeros((2, 3, 3)))
    with pytest.raises(DimensionError):
        as_tensor(np.zeros(3))
    with pytest.raises(DimensionError):
        as_tensor(np.zeros((2, 2, 2)), order=4)
    with pytest.raises(ValueError):
        as_tensor(np.full((2, 2), np.nan))


def test_tensor_from_entries_row_major():
    T = tensor_from_entries(3, 2, range(8))
    assert T[0, 1, 1] == 3 and T[1, 0, 0] == 4
    with pytest.raises(DimensionError):
        tensor_from_entries(3, 3, range(26))


def test_elementwise_root():
    np.testing.assert_allclose(elementwise_root([4.0, 9.0, 0.0], 3), [2.0, 3.0, 0.0])
    np.testing.assert_allclose(elementwise_root([-8.0, 27.0], 4), [-2.0, 3.0])
    np.testing.assert_array_equal(elementwise_root([1e-320, 4.0], 3), [0.0, 2.0])
    with pytest.raises(NegativeRadicandError) as info:
        elementwise_root([1.0, -1.0], 3)
    assert info.value.index == 1


def test_split_dlf_reconstructs():
    rng = np.random.default_rng(4)
    A = rng.standard_normal((3, 3, 3))
    D, L, F = split_dlf(A)
    I = identity_tensor(3, 3)
    np.testing.assert_allclose(matrix_tensor_product(D - L, I) - F, A, atol=1e-15)
    assert np.all(np.triu(L) == 0)
    np.testing.assert_array_equal(np.tril(majorization(F)), 0)


def test_dlf_parts_reconstructs():
    rng = np.random.default_rng(5)
    T = rng.standard_normal((4, 4, 4))
    D, L, F = dlf_parts(T)
    np.testing.assert_allclose(matrix_tensor_product(D + L, identity_tensor(3, 4)) + F, T, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 4).flatmap(
        lambda m: st.integers(1, 4).flatmap(
            lambda n: st.tuples(
                arrays(float, (n,) * m, elements=st.floats(-10, 10)),
                arrays(float, (n,), elements=st.floats(-3, 3)),
            )
        )
    )
)
def test_contract_property_matches_oracle(data):
    A, x = data
    expected = loop_contract(A, x)
    scale = loop_contract(np.abs(A), np.abs(x))
    assert np.all(np.abs(contract(A, x) - expected) <= 1e-12 * (scale + 1e-300))
