"""The three test systems: a fixed 3x3x3 tensor, a Hilbert-type family and a tangent tensor."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .tensor_core import identity_tensor, majorization

__all__ = ["ExampleSpec", "Example", "generate_example", "EXAMPLE1_SLICES"]

# a[i, j, k] = EXAMPLE1_SLICES[k][i][j]: the k-th printed 3x3 block holds the third index fixed
EXAMPLE1_SLICES = (
    ((1.00, -0.01, -0.02), (-0.02, -0.03, -0.04), (-0.04, -0.05, -0.06)),
    ((-0.06, -0.07, -0.08), (-0.08, 1.00, -0.09), (-0.01, -0.02, -0.03)),
    ((-0.03, -0.04, -0.05), (-0.05, -0.06, -0.07), (-0.07, -0.08, 1.00)),
)

EXAMPLE3_SHIFT = 2000.0


@dataclass(frozen=True)
class ExampleSpec:
    id: int
    n: int = None

    def __post_init__(self):
        if self.id not in (1, 2, 3):
            raise ConfigError(f"example id must be 1, 2 or 3, got {self.id!r}")
        if self.id == 2:
            if self.n is None or int(self.n) < 2:
                raise ConfigError(f"example 2 needs n >= 2, got {self.n!r}")
            object.__setattr__(self, "n", int(self.n))
        else:
            fixed = 3 if self.id == 1 else 10
            if self.n not in (None, fixed):
                raise ConfigError(f"example {self.id} has fixed n = {fixed}")
            object.__setattr__(self, "n", fixed)


@dataclass(frozen=True)
class Example:
    """A generated system ``A x^{m-1} = b``.

    ``A`` is returned unscaled; ``B`` is the nonnegative part with
    ``A = c I - scale * B`` (``None`` for example 1).
    """

    spec: ExampleSpec
    A: np.ndarray
    b: np.ndarray
    B: np.ndarray = None


def _example1():
    return np.stack([np.array(s) for s in EXAMPLE1_SLICES], axis=2)


def _example2_B(n):
    B = np.zeros((n, n, n))
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    B[i, j, j] = 1.0 / (i + j + 1)
    maj_positions = {(r, c, c) for r in range(n) for c in range(n)}
    for r in range(1, n):
        for idx in ((r, r - 1, r), (r, r, r - 1), (r, r + 1, r), (r, r, r + 1)):
            if max(idx) >= n:
                continue
            if idx in maj_positions:
                raise AssertionError(f"off-pattern entry {idx} collides with a majorization position")
            B[idx] = 1.0 / 3.0
    return B


def _example3_B(n=10):
    idx = np.arange(1, n + 1)
    total = idx[:, None, None] + idx[None, :, None] + idx[None, None, :]
    return np.abs(np.tan(total.astype(float)))


def generate_example(id, n=None):
    """Build one of the benchmark systems with ``b`` the all-ones vector.

    Parameters
    ----------
    id : int
        1: the fixed 3x3x3 tensor; 2: ``n^2 I - 0.01 B`` with ``M(B)`` the
        Hilbert matrix plus four 1/3 entries around each diagonal position;
        3: ``2000 I - B`` with ``b_{ijk} = |tan(i + j + k)|`` (1-based, radians).
    n : int, optional
        Dimension, required for example 2 only.

    Returns
    -------
    Example
    """
    spec = id if isinstance(id, ExampleSpec) else ExampleSpec(id, n)
    if spec.id == 1:
        A, B = _example1(), None
    elif spec.id == 2:
        B = _example2_B(spec.n)
        A = spec.n**2 * identity_tensor(3, spec.n) - 0.01 * B
    else:
        B = _example3_B(spec.n)
        A = EXAMPLE3_SHIFT * identity_tensor(3, spec.n) - B
    return Example(spec, A, np.ones(spec.n), B)


def hilbert_check(B):
    """True when ``M(B)`` is the Hilbert matrix."""
    n = B.shape[0]
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return bool(np.allclose(majorization(B), 1.0 / (i + j + 1), rtol=0, atol=0))
