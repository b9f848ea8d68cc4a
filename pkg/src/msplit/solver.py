"""Fixed-point iteration ``x <- [M(E)^{-1} (F x^{m-1} + b)]^{[1/(m-1)]}``."""

import enum
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NegativeRadicandError
from .preconditioning import PreconditionerSpec, normalize
from .splittings import SplittingVariant, make_splitting
from .tensor_core import as_tensor, as_vector, contract, elementwise_root

__all__ = [
    "Status",
    "SolveOptions",
    "SolveReport",
    "solve",
    "solve_system",
    "positive_certificate",
    "DIVERGENCE_FACTOR",
]

DIVERGENCE_FACTOR = 1e8


class Status(enum.Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    DIVERGED = "diverged"
    NEGATIVE_RADICAND = "negative_radicand"


@dataclass(frozen=True)
class SolveOptions:
    tol: float = 1e-12
    max_iter: int = 2000
    x0: np.ndarray = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if int(self.max_iter) < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        object.__setattr__(self, "max_iter", int(self.max_iter))


@dataclass
class SolveReport:
    """Outcome of one solve.

    ``residual_history[j]`` is ``||b - A x_j^{m-1}||_2`` on the original
    system, so it has ``iterations + 1`` entries.
    """

    status: Status
    iterations: int
    residual_history: list = field(default_factory=list)
    elapsed_seconds: float = 0.0
    method: str = ""
    message: str = ""

    @property
    def converged(self):
        return self.status is Status.CONVERGED

    @property
    def residual(self):
        return self.residual_history[-1] if self.residual_history else float("nan")

    def to_dict(self):
        return {
            "status": self.status.value,
            "iterations": self.iterations,
            "residual": self.residual,
            "residual_history": [float(r) for r in self.residual_history],
            "elapsed_seconds": self.elapsed_seconds,
            "method": self.method,
            "message": self.message,
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)


def solve(split, rhs, A_original=None, b_original=None, options=None):
    """Iterate a splitting until the original residual drops below ``tol``.

    Parameters
    ----------
    split : SplitPair
        Splitting of the (preconditioned, possibly normalized) tensor.
    rhs : array_like
        Right-hand side paired with ``split`` (already multiplied by ``P``).
    A_original, b_original : array_like, optional
        System whose residual is monitored. Default to the split's own
        target tensor and ``rhs``.
    options : SolveOptions, optional

    Returns
    -------
    x : numpy.ndarray
        Last iterate.
    report : SolveReport
    """
    options = options or SolveOptions()
    n, m = split.dim, split.order
    rhs = as_vector(rhs, n)
    A_res = split.preconditioned_tensor if A_original is None else as_tensor(A_original, m)
    b_res = rhs if b_original is None else as_vector(b_original, n)
    if A_res.shape != split.f_tensor.shape:
        raise ConfigError(f"residual tensor shape {A_res.shape} does not match {split.f_tensor.shape}")
    x = np.zeros(n) if options.x0 is None else as_vector(options.x0, n).copy()

    start = time.perf_counter()
    r0 = float(np.linalg.norm(b_res - contract(A_res, x)))
    history = [r0]
    status, message = Status.MAX_ITERATIONS, ""
    it = 0
    if r0 < options.tol:
        status = Status.CONVERGED
    else:
        for it in range(1, options.max_iter + 1):
            z = split.solve_e(contract(split.f_tensor, x) + rhs)
            try:
                x = elementwise_root(z, m)
            except NegativeRadicandError as exc:
                it -= 1
                status, message = Status.NEGATIVE_RADICAND, str(exc)
                break
            r = float(np.linalg.norm(b_res - contract(A_res, x)))
            history.append(r)
            if r < options.tol:
                status = Status.CONVERGED
                break
            if not np.isfinite(r) or r > DIVERGENCE_FACTOR * r0:
                status = Status.DIVERGED
                break
    report = SolveReport(
        status=status,
        iterations=len(history) - 1,
        residual_history=history,
        elapsed_seconds=time.perf_counter() - start,
        method=split.variant.name,
        message=message,
    )
    return x, report


def solve_system(A, b, method="e2f2", spec=None, omega=None, options=None):
    """Normalize, precondition, split and solve ``A x^{m-1} = b``.

    Banded families work on the unit-diagonal scaling of ``(A, b)``; the
    baseline families precondition ``(A, b)`` as given. Residuals are always
    measured on the original ``(A, b)``.

    Returns
    -------
    x, report, split
    """
    A = as_tensor(A)
    b = as_vector(b, A.shape[0])
    spec = spec or PreconditionerSpec.identity()
    variant = method if isinstance(method, SplittingVariant) else SplittingVariant.parse(method, omega)
    if variant.family.is_baseline:
        split = make_splitting(A, spec, variant)
        rhs = split.preconditioner @ b
    else:
        An, bn, _ = normalize(A, b)
        split = make_splitting(An, spec, variant)
        rhs = split.preconditioner @ bn
    x, report = solve(split, rhs, A, b, options)
    return x, report, split


def positive_certificate(A, options=None):
    """Positive solution of ``A x^{m-1} = 1`` by Gauss-Seidel, or ``None``.

    For a Z-tensor such a solution exists exactly when ``A`` is a strong
    M-tensor, so a returned vector certifies the classification.
    """
    A = as_tensor(A)
    try:
        x, report, _ = solve_system(A, np.ones(A.shape[0]), "m1n1", options=options)
    except Exception:
        return None
    if report.converged and np.all(x > 0):
        return x
    return None
