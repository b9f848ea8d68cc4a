"""Parameter sweeps over the example systems and table output."""

import csv
import io
import itertools
import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError, MsplitError
from .preconditioning import PreconditionerSpec, Variant
from .problems import generate_example
from .solver import SolveOptions, solve_system
from .splittings import Family, SplittingVariant

__all__ = [
    "BenchmarkRow",
    "SweepGrid",
    "parse_sweep",
    "spec_for",
    "run_benchmark",
    "best_omega",
    "format_rows",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("method", "alpha", "beta", "s", "k", "omega", "iterations", "time_s", "status")
DNC = "†"


@dataclass(frozen=True)
class BenchmarkRow:
    method: str
    alpha: float
    beta: float
    s: int
    k: int
    omega: float
    iterations: int
    time_s: float
    status: str
    message: str = ""

    @property
    def converged(self):
        return self.status == "converged"


@dataclass(frozen=True)
class SweepGrid:
    """Axes of a sweep. ``beta=None`` ties beta to alpha at every grid point."""

    alpha: tuple = (0.0,)
    beta: tuple = None
    s: tuple = (1,)
    k: tuple = (1,)
    omega: tuple = (1.2,)

    def points(self):
        for a, s, k, w in itertools.product(self.alpha, self.s, self.k, self.omega):
            betas = (a,) if self.beta is None else self.beta
            for b in betas:
                yield float(a), float(b), int(s), int(k), float(w)


def parse_sweep(text):
    """Parse ``LO:STEP:HI`` (inclusive), a comma list, or a single number."""
    text = str(text).strip()
    try:
        if ":" in text:
            lo, step, hi = (float(t) for t in text.split(":"))
            if step <= 0 or hi < lo:
                raise ConfigError(f"invalid sweep {text!r}: need STEP > 0 and HI >= LO")
            count = int(np.floor((hi - lo) / step + 1e-9)) + 1
            return tuple(round(lo + i * step, 10) for i in range(count))
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise ConfigError(f"invalid sweep {text!r}") from exc


def spec_for(family, alpha, beta, s, k):
    """Preconditioner a method uses at one grid point.

    ``s = 0`` or ``k = 0`` drops the corresponding band. The two reference
    preconditioners take ``alpha`` (row form, Jacobi/Gauss-Seidel) or
    ``beta`` (column form, SOR).
    """
    family = Family(family)
    if family in (Family.BASELINE_JACOBI, Family.BASELINE_GAUSS_SEIDEL):
        return PreconditionerSpec(Variant.BASELINE_ROW, alpha, 0.0, 1, 1)
    if family is Family.BASELINE_SOR:
        return PreconditionerSpec(Variant.BASELINE_COLUMN, 0.0, beta, 1, 1)
    if family is Family.SOR:
        return PreconditionerSpec.identity()
    if family in (Family.JACOBI_E3, Family.GAUSS_SEIDEL_M3) or (k == 0 and s > 0):
        return PreconditionerSpec(Variant.UPPER_ONLY, alpha, 0.0, s, 1)
    if family in (Family.JACOBI_E4, Family.GAUSS_SEIDEL_M4) or (s == 0 and k > 0):
        return PreconditionerSpec(Variant.LOWER_ONLY, 0.0, beta, 1, k)
    if s == 0 and k == 0:
        return PreconditionerSpec.identity()
    return PreconditionerSpec(Variant.FULL_BAND, alpha, beta, s, k)


def _run_one(A, b, method, point, options):
    alpha, beta, s, k, omega = point
    try:
        family = Family(method)
    except ValueError:
        raise ConfigError(f"unknown method {method!r}") from None
    w = omega if family.needs_omega else None
    try:
        spec = spec_for(family, alpha, beta, s, k)
        _, report, _ = solve_system(A, b, SplittingVariant(family, w), spec, options=options)
        return BenchmarkRow(method, alpha, beta, s, k, w, report.iterations,
                            report.elapsed_seconds, report.status.value, report.message)
    except (MsplitError, ValueError, np.linalg.LinAlgError) as exc:
        return BenchmarkRow(method, alpha, beta, s, k, w, 0, 0.0, "error", f"{type(exc).__name__}: {exc}")


def run_benchmark(example, methods, grid=None, options=None, n=None):
    """Solve ``example`` with every method at every grid point.

    Rows come out in grid order (outer) and method order (inner). Failures
    are recorded in the row's ``status``/``message``; they never stop the sweep.
    Grid points that differ only in an axis a method ignores are run once.
    """
    ex = example if hasattr(example, "A") else generate_example(example, n)
    grid = grid or SweepGrid()
    options = options or SolveOptions()
    known = {f.value for f in Family}
    for method in methods:
        if method not in known:
            _unknown(method)
    rows, seen = [], set()
    for point in grid.points():
        for method in methods:
            key = (method,) + _relevant(Family(method), point)
            if key in seen:
                continue
            seen.add(key)
            rows.append(_run_one(ex.A, ex.b, method, point, options))
    return rows


def _unknown(method):
    names = ", ".join(f.value for f in Family)
    raise ConfigError(f"unknown method {method!r}; choose from {names}")


def _relevant(family, point):
    alpha, beta, s, k, omega = point
    w = omega if family.needs_omega else None
    if family is Family.SOR:
        return (None, None, None, None, w)
    if family in (Family.BASELINE_JACOBI, Family.BASELINE_GAUSS_SEIDEL):
        return (alpha, None, None, None, w)
    if family is Family.BASELINE_SOR:
        return (None, beta, None, None, w)
    return (alpha, beta, s, k, w)


def best_omega(rows):
    """Keep, per method and (alpha, beta, s, k), the row with fewest iterations.

    Converged rows beat non-converged ones; ties go to the first omega.
    Rows of methods without a relaxation factor pass through unchanged.
    """
    best, order = {}, []
    for row in rows:
        key = (row.method, row.alpha, row.beta, row.s, row.k)
        if key not in best:
            order.append(key)
            best[key] = row
            continue
        cur = best[key]
        if (not row.converged, row.iterations) < (not cur.converged, cur.iterations):
            best[key] = row
    return [best[key] for key in order]


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def format_rows(rows, fmt="csv"):
    """Render rows as ``csv``, ``md`` (non-converged iterations shown as a dagger) or ``json``."""
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([_cell(r.method), _cell(r.alpha), _cell(r.beta), r.s, r.k, _cell(r.omega),
                             r.iterations, f"{r.time_s:.6f}", r.status])
        return buf.getvalue()
    if fmt == "md":
        lines = ["| " + " | ".join(CSV_COLUMNS) + " |", "|" + "---|" * len(CSV_COLUMNS)]
        for r in rows:
            its = str(r.iterations) if r.converged else DNC
            cells = [r.method, _cell(r.alpha), _cell(r.beta), str(r.s), str(r.k), _cell(r.omega),
                     its, f"{r.time_s:.4f}", r.status]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown format {fmt!r}; choose csv, md or json")
