"""Banded preconditioners for M-tensor systems and the checks around them.

The main preconditioner is ``P = I + S + K`` where ``S`` carries an upper band
at offset ``s`` and ``K`` a lower band at offset ``k``, both read off the
majorization matrix of a unit-diagonal tensor ``A``:

    S[i, i+s] = -alpha_i * a_{i (i+s) ... (i+s)}      i = 1..n-s
    K[i, i-k] = -beta_i  * a_{i (i-k) ... (i-k)}      i = k+1..n

Two reference preconditioners are also available: ``I + S`` with ``s = 1``
and ``I + C`` where ``C`` fills the first column below the diagonal.
"""

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DimensionError, NormalizationError
from .spectral import spectral_radius
from .tensor_core import (
    as_tensor,
    as_vector,
    diagonal,
    identity_tensor,
    majorization,
    matrix_tensor_product,
)

__all__ = [
    "Variant",
    "PreconditionerSpec",
    "ConditionId",
    "ConditionReport",
    "Classification",
    "normalize",
    "has_unit_diagonal",
    "band_matrices",
    "build_preconditioner",
    "precondition",
    "check_conditions",
    "classify",
]

UNIT_DIAGONAL_TOL = 1e-12


class Variant(enum.Enum):
    FULL_BAND = "full_band"
    UPPER_ONLY = "upper_only"
    LOWER_ONLY = "lower_only"
    BASELINE_ROW = "baseline_row"
    BASELINE_COLUMN = "baseline_column"

    @property
    def is_baseline(self):
        return self in (Variant.BASELINE_ROW, Variant.BASELINE_COLUMN)


def _param(value):
    if np.ndim(value) == 0:
        return float(value)
    return tuple(float(v) for v in value)


@dataclass(frozen=True)
class PreconditionerSpec:
    """Parameters of a preconditioner.

    ``alpha`` and ``beta`` are either scalars (broadcast to every band
    entry) or sequences. ``alpha`` has one entry per upper-band row
    ``i = 1..n-s``; ``beta`` one entry per lower-band row ``i = k+1..n``
    (for the column baseline, rows ``2..n``).
    """

    variant: Variant = Variant.FULL_BAND
    alpha: object = 0.0
    beta: object = 0.0
    s: int = 1
    k: int = 1

    def __post_init__(self):
        variant = Variant(self.variant)
        object.__setattr__(self, "variant", variant)
        object.__setattr__(self, "alpha", _param(self.alpha))
        object.__setattr__(self, "beta", _param(self.beta))
        if variant is Variant.BASELINE_ROW:
            object.__setattr__(self, "s", 1)
        for name in ("alpha", "beta"):
            if np.any(np.asarray(getattr(self, name)) < 0):
                raise ConfigError(f"{name} must be entrywise nonnegative")
        if self.s < 1 or self.k < 1:
            raise ConfigError(f"band offsets must be >= 1, got s={self.s}, k={self.k}")

    @classmethod
    def identity(cls):
        return cls(Variant.FULL_BAND, 0.0, 0.0, 1, 1)

    @property
    def theory_range(self):
        """True when every parameter lies in [0, 1]."""
        return bool(np.all(np.asarray(self.alpha) <= 1) and np.all(np.asarray(self.beta) <= 1))

    @property
    def uses_upper(self):
        return self.variant in (Variant.FULL_BAND, Variant.UPPER_ONLY, Variant.BASELINE_ROW)

    @property
    def uses_lower(self):
        return self.variant in (Variant.FULL_BAND, Variant.LOWER_ONLY)

    def validate(self, n):
        if self.variant is Variant.BASELINE_COLUMN:
            return
        if self.uses_upper and not 1 <= self.s <= n - 1:
            raise ConfigError(f"s={self.s} outside 1..{n - 1}")
        if self.uses_lower and not 1 <= self.k <= n - 1:
            raise ConfigError(f"k={self.k} outside 1..{n - 1}")

    def alpha_vector(self, n):
        return self._vector(self.alpha, n - self.s, "alpha")

    def beta_vector(self, n):
        count = n - 1 if self.variant is Variant.BASELINE_COLUMN else n - self.k
        return self._vector(self.beta, count, "beta")

    @staticmethod
    def _vector(value, count, name):
        if isinstance(value, float):
            return np.full(max(count, 0), value)
        if len(value) != count:
            raise DimensionError(f"{name} needs {count} entries, got {len(value)}")
        return np.asarray(value)

    def to_dict(self):
        return {
            "variant": self.variant.value,
            "alpha": self.alpha if isinstance(self.alpha, float) else list(self.alpha),
            "beta": self.beta if isinstance(self.beta, float) else list(self.beta),
            "s": self.s,
            "k": self.k,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(
                Variant(data.get("variant", "full_band")),
                data.get("alpha", 0.0),
                data.get("beta", 0.0),
                int(data.get("s", 1)),
                int(data.get("k", 1)),
            )
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"invalid preconditioner spec: {exc}") from exc

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def has_unit_diagonal(A, tol=UNIT_DIAGONAL_TOL):
    return bool(np.all(np.abs(diagonal(A) - 1.0) <= tol))


def normalize(A, b=None):
    """Scale row ``i`` (the ``i``-th mode-1 slice) of ``A`` and ``b_i`` by ``1 / a_{i...i}``.

    Returns ``(A_scaled, b_scaled, d)`` with ``d`` the original diagonal, or
    ``(A_scaled, d)`` when ``b`` is omitted. Raises
    :class:`NormalizationError` if some ``a_{i...i} <= 0``.
    """
    A = as_tensor(A)
    n, m = A.shape[0], A.ndim
    d = diagonal(A)
    if np.any(d <= 0):
        bad = int(np.flatnonzero(d <= 0)[0]) + 1
        raise NormalizationError(f"diagonal entry a_{{{bad}...{bad}}} = {d[bad - 1]} is not positive")
    An = A / d.reshape((n,) + (1,) * (m - 1))
    An[(np.arange(n),) * m] = 1.0
    if b is None:
        return An, d
    b = as_vector(b, n)
    return An, b / d, d


def band_matrices(A, spec):
    """Return the upper band ``S`` and lower band ``K`` of ``spec`` for ``A``.

    The column baseline's matrix ``C`` is returned in the lower slot.
    """
    A = as_tensor(A)
    n = A.shape[0]
    spec.validate(n)
    Mt = majorization(A)
    S = np.zeros((n, n))
    K = np.zeros((n, n))
    if spec.variant is Variant.BASELINE_COLUMN:
        beta = spec.beta_vector(n)
        K[1:, 0] = -beta * Mt[1:, 0]
        return S, K
    if spec.uses_upper:
        s = spec.s
        rows = np.arange(n - s)
        S[rows, rows + s] = -spec.alpha_vector(n) * Mt[rows, rows + s]
    if spec.uses_lower:
        k = spec.k
        rows = np.arange(k, n)
        K[rows, rows - k] = -spec.beta_vector(n) * Mt[rows, rows - k]
    return S, K


def build_preconditioner(spec, A):
    """Assemble the preconditioner matrix described by ``spec`` for ``A``.

    The banded variants need a unit diagonal (call :func:`normalize` first);
    the two baselines are read off ``A`` as given.
    """
    A = as_tensor(A)
    if not spec.variant.is_baseline and not has_unit_diagonal(A):
        raise NormalizationError("banded preconditioners need a_{i...i} = 1; normalize A first")
    S, K = band_matrices(A, spec)
    return np.eye(A.shape[0]) + S + K


def precondition(P, A, b):
    """Return ``(P A, P b)``."""
    A = as_tensor(A)
    n = A.shape[0]
    b = as_vector(b, n)
    if np.shape(P) != (n, n):
        raise DimensionError(f"preconditioner of shape {np.shape(P)} does not match dimension {n}")
    return matrix_tensor_product(P, A), np.asarray(P) @ b


class ConditionId(enum.Enum):
    """Which parameter condition applies: ``s = k = 1``, ``k < s``, ``k > s`` or ``s = k``."""

    UNIT_OFFSETS = "unit_offsets"
    UPPER_WIDER = "upper_wider"
    LOWER_WIDER = "lower_wider"
    EQUAL_OFFSETS = "equal_offsets"


@dataclass(frozen=True)
class ConditionReport:
    condition_id: ConditionId
    values: np.ndarray
    satisfied: bool
    banded: bool = False

    def to_dict(self):
        return {
            "condition_id": self.condition_id.value,
            "values": self.values.tolist(),
            "satisfied": self.satisfied,
            "banded": self.banded,
        }


def check_conditions(A, spec, banded=False):
    """Evaluate the per-row products that guarantee convergence of the
    ``E5``/``M2`` style splittings.

    Row ``i`` gets ``alpha_i a_{i,p..p} a_{p,i..i}`` for its upper partner
    ``p`` plus ``beta_i a_{i,q..q} a_{q,i..i}`` for ``q = i - k``, over the
    row ranges of the applicable condition (``s = k = 1``; ``s = k``;
    ``k < s``; ``k > s``). The ``k != s`` conditions are printed with upper
    partner ``p = n - i``; that reading is the default, and
    ``banded=True`` substitutes ``p = i + s`` instead. Terms whose
    parameter or partner index does not exist contribute zero.

    The report is satisfied iff every value lies strictly inside (0, 1).
    """
    A = as_tensor(A)
    n = A.shape[0]
    if spec.variant is not Variant.FULL_BAND:
        raise ConfigError("check_conditions applies to the full_band variant")
    Mt = majorization(A)
    s, k = spec.s, spec.k
    alpha = spec.alpha_vector(n)
    beta = spec.beta_vector(n)

    if s == k == 1:
        cid = ConditionId.UNIT_OFFSETS
    elif s == k:
        cid = ConditionId.EQUAL_OFFSETS
    elif k < s:
        cid = ConditionId.UPPER_WIDER
    else:
        cid = ConditionId.LOWER_WIDER
    literal_far = cid in (ConditionId.UPPER_WIDER, ConditionId.LOWER_WIDER) and not banded

    def upper_term(i):
        # i is 1-based
        if i > n - s:
            return 0.0
        p = n - i if literal_far else i + s
        if not 1 <= p <= n:
            return 0.0
        return alpha[i - 1] * Mt[i - 1, p - 1] * Mt[p - 1, i - 1]

    def lower_term(i):
        q = i - k
        if q < 1:
            return 0.0
        return beta[i - k - 1] * Mt[i - 1, q - 1] * Mt[q - 1, i - 1]

    lo, hi = min(s, k), max(s, k)
    if cid in (ConditionId.UNIT_OFFSETS, ConditionId.EQUAL_OFFSETS):
        upper_rows = range(1, n - k + 1)
        lower_rows = range(k + 1, n + 1)
    else:
        # printed ranges: upper-only 1..lo, both lo+1..hi, lower-only hi+1..n
        upper_rows = range(1, hi + 1)
        lower_rows = range(lo + 1, n + 1)

    values = np.zeros(n)
    for i in upper_rows:
        values[i - 1] += upper_term(i)
    for i in lower_rows:
        values[i - 1] += lower_term(i)
    satisfied = bool(np.all((values > 0) & (values < 1)))
    return ConditionReport(cid, values, satisfied, banded)


@dataclass(frozen=True)
class Classification:
    """Z-tensor / strong M-tensor verdict for a tensor.

    ``eta`` is the largest diagonal entry and ``rho_b`` the estimated Perron
    radius of ``B = eta I - A``. The strong-M verdict uses the rigorous upper
    end of the Collatz-Wielandt bracket.
    """

    is_z: bool
    is_strong_m: bool
    eta: float
    rho_b: float
    rho_b_upper: float
    reason: str = ""
    certificate: np.ndarray = field(default=None, repr=False, compare=False)

    def to_dict(self):
        return {
            "is_z": self.is_z,
            "is_strong_m": self.is_strong_m,
            "eta": self.eta,
            "rho_b": self.rho_b,
            "rho_b_upper": self.rho_b_upper,
            "reason": self.reason,
            "certificate": None if self.certificate is None else self.certificate.tolist(),
        }


def classify(A, tol=1e-10, certificate=False):
    """Decide whether ``A`` is a Z-tensor and a strong M-tensor.

    With ``certificate=True`` and a strong-M verdict, also solve
    ``A x^{m-1} = 1`` by Gauss-Seidel iteration; the positive solution (when the
    solve converges) is returned as ``certificate``.
    """
    A = as_tensor(A)
    n, m = A.shape[0], A.ndim
    off = A.copy()
    off[(np.arange(n),) * m] = 0.0
    eta = float(diagonal(A).max())
    if np.any(off > 0):
        return Classification(False, False, eta, float("nan"), float("nan"),
                              "positive off-diagonal entry: not a Z-tensor")
    if eta <= 0:
        return Classification(True, False, eta, float("nan"), float("nan"),
                              "no positive diagonal entry")
    B = eta * identity_tensor(m, n) - A
    est = spectral_radius(B, tol=tol)
    strong = est.upper < eta
    reason = "rho(B) < eta" if strong else "rho(B) >= eta (bracket upper end)"
    cert = None
    if strong and certificate:
        from .solver import positive_certificate

        cert = positive_certificate(A)
    return Classification(True, bool(strong), eta, est.rho, est.upper, reason, cert)
