"""Dense m-order, n-dimensional tensors and their basic products.

Tensors are plain ``numpy.ndarray`` objects of shape ``(n,) * m``; matrices
have shape ``(n, n)`` and vectors ``(n,)``. Index ``[i1, ..., im]`` in code
is the 0-based form of the 1-based entry ``a_{i1...im}``.
"""

import numpy as np

from .errors import DimensionError, NegativeRadicandError

__all__ = [
    "as_tensor",
    "as_matrix",
    "as_vector",
    "tensor_from_entries",
    "identity_tensor",
    "contract",
    "matrix_tensor_product",
    "majorization",
    "diagonal",
    "elementwise_root",
    "split_dlf",
    "dlf_parts",
]

# components below this magnitude are treated as exact zeros by elementwise_root
_ROOT_FLOOR = 1e-300


def as_tensor(data, order=None):
    """Validate ``data`` as a dense cubical tensor and return a float array.

    Parameters
    ----------
    data : array_like
        Array of shape ``(n,) * m`` with ``m >= 2``.
    order : int, optional
        Required order ``m``.

    Returns
    -------
    numpy.ndarray
        ``float64`` array (a copy only if conversion was needed).
    """
    arr = np.asarray(data, dtype=float)
    if arr.ndim < 2:
        raise DimensionError(f"tensor order must be >= 2, got {arr.ndim}")
    if len(set(arr.shape)) != 1:
        raise DimensionError(f"tensor must be cubical, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise DimensionError("tensor dimension must be >= 1")
    if order is not None and arr.ndim != order:
        raise DimensionError(f"expected order {order}, got {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("tensor entries must be finite")
    return arr


def as_matrix(data, dim=None):
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionError(f"expected dimension {dim}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def as_vector(data, dim=None):
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 1:
        raise DimensionError(f"expected a vector, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionError(f"expected dimension {dim}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


def tensor_from_entries(order, dim, entries):
    """Build a tensor from ``dim**order`` entries in row-major order."""
    if order < 2 or dim < 1:
        raise DimensionError(f"invalid order/dimension ({order}, {dim})")
    flat = np.asarray(entries, dtype=float).ravel()
    if flat.size != dim**order:
        raise DimensionError(
            f"expected {dim**order} entries for order {order}, dim {dim}; got {flat.size}"
        )
    return as_tensor(flat.reshape((dim,) * order))


def identity_tensor(m, n):
    """Return the order-``m`` identity tensor: 1 where all indices agree."""
    if m < 2:
        raise DimensionError(f"identity tensor needs order >= 2, got {m}")
    if n < 1:
        raise DimensionError(f"identity tensor needs dimension >= 1, got {n}")
    out = np.zeros((n,) * m)
    idx = np.arange(n)
    out[(idx,) * m] = 1.0
    return out


def contract(A, x):
    """Compute ``A x^{m-1}``, the vector with components

    ``sum_{i2..im} a_{i i2 ... im} x_{i2} ... x_{im}``.

    The last mode is summed first, one mode at a time, so the accumulation
    order is fixed for a given shape and the result is bit-reproducible.
    """
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    n = A.shape[0]
    if x.shape != (n,):
        raise DimensionError(f"vector of shape {x.shape} does not match tensor dimension {n}")
    y = A
    for _ in range(A.ndim - 1):
        y = y.reshape(-1, n) @ x
    return y.reshape(n)


def matrix_tensor_product(M, B):
    """Return ``C = M B`` with ``c_{j i2..im} = sum_k M_{jk} b_{k i2..im}``.

    This is ``M`` applied to the mode-1 fibers of ``B``: ``C_(1) = M B_(1)``.
    """
    M = np.asarray(M, dtype=float)
    B = np.asarray(B, dtype=float)
    n = B.shape[0]
    if M.shape != (n, n):
        raise DimensionError(f"matrix of shape {M.shape} does not match tensor dimension {n}")
    return (M @ B.reshape(n, -1)).reshape(B.shape)


def majorization(A):
    """Majorization matrix ``M(A)_{ij} = a_{i j j ... j}``."""
    A = np.asarray(A)
    n, m = A.shape[0], A.ndim
    j = np.arange(n)
    return np.ascontiguousarray(A[(slice(None),) + (j,) * (m - 1)])


def diagonal(A):
    """The entries ``a_{ii...i}`` as a vector."""
    A = np.asarray(A)
    i = np.arange(A.shape[0])
    return A[(i,) * A.ndim].copy()


def elementwise_root(v, m):
    """Componentwise ``(m-1)``-th root of ``v``.

    For even ``m`` the root is odd and keeps the sign of each component.
    For odd ``m`` a negative component raises :class:`NegativeRadicandError`.
    """
    if m < 2:
        raise DimensionError(f"order must be >= 2, got {m}")
    v = np.asarray(v, dtype=float)
    v = np.where(np.abs(v) < _ROOT_FLOOR, 0.0, v)
    p = m - 1
    if p == 1:
        return v.copy()
    if p % 2 == 0:
        neg = np.flatnonzero(v < 0)
        if neg.size:
            i = int(neg[0])
            raise NegativeRadicandError(
                f"component {i + 1} is negative ({v[i]:.3e}); even root undefined", index=i
            )
        return v ** (1.0 / p)
    return np.sign(v) * np.abs(v) ** (1.0 / p)


def dlf_parts(T):
    """Split ``T = D I_m + L I_m + F`` by its majorization matrix.

    ``D`` is the diagonal and ``L`` the strictly lower triangle of ``M(T)``
    (signs kept), and ``F`` is whatever remains.
    """
    T = np.asarray(T, dtype=float)
    n, m = T.shape[0], T.ndim
    Mt = majorization(T)
    D = np.diag(np.diag(Mt))
    L = np.tril(Mt, -1)
    F = T.copy()
    rows, cols = np.tril_indices(n)
    F[(rows,) + (cols,) * (m - 1)] = 0.0
    return D, L, F


def split_dlf(A):
    """Split ``A = D I_m - L I_m - F``.

    ``D`` is the diagonal of ``M(A)``, ``L`` is the negated strictly lower
    triangle of ``M(A)`` and ``F`` is the rest of ``A`` with its sign flipped.
    For a Z-tensor both ``L`` and ``F`` are nonnegative.
    """
    A = as_tensor(A)
    n, m = A.shape[0], A.ndim
    Mt = majorization(A)
    D = np.diag(np.diag(Mt))
    L = -np.tril(Mt, -1)
    F = -A
    rows, cols = np.tril_indices(n)
    F[(rows,) + (cols,) * (m - 1)] = 0.0
    return D, L, F
