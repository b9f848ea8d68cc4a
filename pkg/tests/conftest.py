import itertools

import numpy as np
import pytest

from msplit.preconditioning import normalize
from msplit.spectral import spectral_radius
from msplit.tensor_core import identity_tensor


def random_strong_m(rng, n, m=3, density=0.6, margin=None):
    """``c I - B`` with ``B >= 0`` random and ``c`` a little above ``rho(B)``."""
    B = rng.random((n,) * m) * (rng.random((n,) * m) < density)
    rho = spectral_radius(B).upper
    c = rho * (1.05 + (rng.random() if margin is None else margin)) + 1e-3
    return c * identity_tensor(m, n) - B


def random_unit_strong_m(rng, n, m=3):
    return normalize(random_strong_m(rng, n, m))[0]


def loop_contract(A, x):
    """Nested-loop oracle for ``A x^{m-1}``."""
    n, m = A.shape[0], A.ndim
    y = np.zeros(n)
    for i in range(n):
        total = 0.0
        for rest in itertools.product(range(n), repeat=m - 1):
            term = A[(i,) + rest]
            for j in rest:
                term *= x[j]
            total += term
        y[i] = total
    return y


def loop_matrix_tensor(M, B):
    """Double-loop oracle for the mode-1 matrix-tensor product."""
    n = B.shape[0]
    C = np.zeros_like(B)
    for j in range(n):
        for k in range(n):
            C[j] += M[j, k] * B[k]
    return C


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def record():
    """Print and remember one PASS/FAIL line for an acceptance criterion."""

    def _record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        return ok

    return _record
