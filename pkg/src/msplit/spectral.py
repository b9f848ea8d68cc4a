"""Perron radius of nonnegative tensors by a power-type iteration.

Every iterate ``x > 0`` yields the Collatz-Wielandt bracket

    min_i (T x^{m-1})_i / x_i^{m-1}  <=  rho(T)  <=  max_i (T x^{m-1})_i / x_i^{m-1}

and the iteration ``x <- (T x^{m-1})^{[1/(m-1)]}`` narrows it.
"""

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import NotNonnegativeError
from .tensor_core import as_tensor, contract, majorization

__all__ = [
    "SpectralEstimate",
    "Ordering",
    "spectral_radius",
    "compare_rho",
    "iteration_radius",
    "is_irreducible",
    "majorization_irreducible",
]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000
SHIFT_FACTOR = 1e-12


@dataclass(frozen=True)
class SpectralEstimate:
    """Bracketed estimate of a Perron radius.

    ``shift`` is the epsilon added to every entry before iterating (zero
    unless some mode-1 slice of the input vanished); when it is nonzero the
    bracket refers to the shifted tensor, which bounds the original from above.
    """

    rho: float
    lower: float
    upper: float
    iterations: int
    converged: bool
    shift: float = 0.0
    vector: np.ndarray = field(default=None, repr=False, compare=False)
    brackets: tuple = field(default=(), repr=False, compare=False)

    @property
    def width(self):
        return (self.upper - self.lower) / max(self.upper, np.finfo(float).tiny)

    def to_dict(self):
        return {
            "rho": self.rho,
            "lower": self.lower,
            "upper": self.upper,
            "iterations": self.iterations,
            "converged": self.converged,
            "shift": self.shift,
            "vector": None if self.vector is None else self.vector.tolist(),
        }


def spectral_radius(T, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, keep_brackets=False):
    """Estimate the spectral radius of a nonnegative tensor.

    Parameters
    ----------
    T : array_like
        Nonnegative tensor of shape ``(n,) * m``.
    tol : float
        Stop once the relative bracket width ``(upper - lower) / upper``
        falls below this value.
    max_iter : int
        Iteration cap; the estimate is returned with ``converged=False``
        if it is reached.
    keep_brackets : bool
        Record the ``(lower, upper)`` pair of every iterate.

    Returns
    -------
    SpectralEstimate
    """
    T = as_tensor(T)
    if np.any(T < 0):
        raise NotNonnegativeError("spectral_radius requires a nonnegative tensor")
    n, m = T.shape[0], T.ndim
    top = float(T.max())
    if top == 0.0:
        return SpectralEstimate(0.0, 0.0, 0.0, 0, True, 0.0, np.ones(n), ())

    shift = 0.0
    if np.any(np.all(T.reshape(n, -1) == 0, axis=1)):
        shift = SHIFT_FACTOR * top
        T = T + shift

    x = np.ones(n)
    brackets = []
    lower, upper = 0.0, np.inf
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        y = contract(T, x)
        ratios = y / x ** (m - 1)
        lower, upper = float(ratios.min()), float(ratios.max())
        if keep_brackets:
            brackets.append((lower, upper))
        x_new = y ** (1.0 / (m - 1))
        x = x_new / x_new.max()
        if upper - lower < tol * upper:
            converged = True
            break
    return SpectralEstimate(
        rho=0.5 * (lower + upper),
        lower=lower,
        upper=upper,
        iterations=it,
        converged=converged,
        shift=shift,
        vector=x,
        brackets=tuple(brackets),
    )


class Ordering(enum.Enum):
    LESS_OR_EQUAL = "less_or_equal"
    GREATER_OR_EQUAL = "greater_or_equal"
    INDISTINGUISHABLE = "indistinguishable"


def iteration_radius(split, tol=DEFAULT_TOL, roundoff=1e-12):
    """Perron radius of ``M(E)^{-1} F`` for a splitting.

    Entries in ``[-roundoff * max|T|, 0)`` are cancellation noise from the
    assembly and are set to zero; anything more negative is an error.
    """
    from .splittings import iteration_tensor

    T = iteration_tensor(split)
    floor = -roundoff * max(float(np.max(np.abs(T))), np.finfo(float).tiny)
    T = np.where((T < 0) & (T >= floor), 0.0, T)
    return spectral_radius(T, tol=tol)


def compare_rho(split_a, split_b, tol=1e-8):
    """Order two splittings by the Perron radius of their iteration tensors.

    Returns ``(ordering, rho_a, rho_b)``.
    """
    rho_a = iteration_radius(split_a).rho
    rho_b = iteration_radius(split_b).rho
    if abs(rho_a - rho_b) < tol:
        order = Ordering.INDISTINGUISHABLE
    elif rho_a < rho_b:
        order = Ordering.LESS_OR_EQUAL
    else:
        order = Ordering.GREATER_OR_EQUAL
    return order, rho_a, rho_b


def is_irreducible(T, max_dim=16):
    """Irreducibility by definition: no proper index set ``I`` closes on itself.

    ``T`` is reducible when some nonempty proper ``I`` has
    ``a_{i1 i2..im} = 0`` for every ``i1`` in ``I`` and ``i2..im`` outside
    ``I``. Enumerates subsets, so ``n`` is capped at ``max_dim``.
    """
    T = np.asarray(T)
    n, m = T.shape[0], T.ndim
    if n > max_dim:
        raise ValueError(f"subset enumeration is limited to n <= {max_dim}")
    nz = T != 0
    for size in range(1, n):
        for subset in itertools.combinations(range(n), size):
            inside = np.zeros(n, dtype=bool)
            inside[list(subset)] = True
            outside = np.flatnonzero(~inside)
            block = nz[np.ix_(inside, *([outside] * (m - 1)))]
            if not block.any():
                return False
    return True


def majorization_irreducible(T):
    """Sufficient check: ``M(T)`` irreducible implies ``T`` irreducible."""
    Mt = majorization(np.asarray(T)) != 0
    np.fill_diagonal(Mt, False)
    ncomp, _ = connected_components(Mt.astype(int), directed=True, connection="strong")
    return ncomp == 1
