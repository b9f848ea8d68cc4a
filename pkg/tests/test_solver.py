import json

import numpy as np
import pytest

from conftest import random_strong_m
from msplit.errors import ConfigError, DimensionError
from msplit.preconditioning import PreconditionerSpec, normalize
from msplit.problems import generate_example
from msplit.solver import SolveOptions, Status, positive_certificate, solve, solve_system
from msplit.splittings import make_splitting
from msplit.tensor_core import contract, identity_tensor


def test_identity_converges_in_one_step():
    pair = make_splitting(identity_tensor(3, 4), None, "e2f2")
    x, rep = solve(pair, np.ones(4))
    assert rep.status is Status.CONVERGED and rep.iterations == 1
    np.testing.assert_array_equal(x, np.ones(4))
    assert len(rep.residual_history) == rep.iterations + 1


def test_options_validation():
    with pytest.raises(ConfigError):
        SolveOptions(tol=0)
    with pytest.raises(ConfigError):
        SolveOptions(max_iter=0)


def test_rhs_dimension_checked():
    pair = make_splitting(identity_tensor(3, 3), None, "e1f1")
    with pytest.raises(DimensionError):
        solve(pair, np.ones(4))


def test_report_invariants_and_json():
    ex = generate_example(3)
    x, rep, _ = solve_system(ex.A, ex.b, "m1n1")
    assert rep.converged and rep.residual < 1e-12
    assert len(rep.residual_history) == rep.iterations + 1
    assert np.all(x > 0)
    payload = json.loads(rep.to_json())
    assert payload["status"] == "converged"
    assert len(payload["residual_history"]) == rep.iterations + 1
    # residual is measured on the original system
    assert np.linalg.norm(ex.b - contract(ex.A, x)) == pytest.approx(rep.residual, abs=1e-15)


def test_max_iterations_status():
    ex = generate_example(3)
    _, rep, _ = solve_system(ex.A, ex.b, "e1f1", options=SolveOptions(max_iter=5))
    assert rep.status is Status.MAX_ITERATIONS and rep.iterations == 5


def test_negative_radicand_status():
    ex = generate_example(3)
    _, rep, _ = solve_system(ex.A, ex.b, "pj-baseline", PreconditionerSpec("baseline_row", 0.5, 0))
    assert rep.status is Status.NEGATIVE_RADICAND
    assert len(rep.residual_history) == rep.iterations + 1


def test_divergence_guard():
    A = identity_tensor(3, 2)
    A[0, 1, 1] = A[1, 0, 0] = -3.0  # not an M-tensor; Jacobi blows up
    _, rep, _ = solve_system(A, np.ones(2), "e1f1")
    assert rep.status in (Status.DIVERGED, Status.NEGATIVE_RADICAND)
    assert rep.iterations < 2000


def test_x0_respected():
    ex = generate_example(1)
    x, rep, _ = solve_system(ex.A, ex.b, "m1n1")
    _, rep2, _ = solve_system(ex.A, ex.b, "m1n1", options=SolveOptions(x0=x))
    assert rep2.iterations == 0 and rep2.converged


@pytest.mark.parametrize("seed", range(5))
def test_residual_eventually_monotone(seed):
    A = random_strong_m(np.random.default_rng(seed), 5)
    _, rep, _ = solve_system(A, np.ones(5), "m1n1")
    r = np.array(rep.residual_history[3:])
    assert rep.converged
    assert np.all(np.diff(r) <= 1e-15 + 1e-12 * r[:-1])


def test_positive_certificate():
    x = positive_certificate(generate_example(1).A)
    assert x is not None and np.all(x > 0)
    weak = 3 * identity_tensor(3, 2) - np.ones((2, 2, 2))
    assert positive_certificate(weak) is None


def test_solve_defaults_to_split_target():
    An, bn, _ = normalize(generate_example(1).A, np.ones(3))
    pair = make_splitting(An, None, "e1f1")
    x, rep = solve(pair, bn)
    assert rep.converged
    assert np.linalg.norm(bn - contract(An, x)) < 1e-12
