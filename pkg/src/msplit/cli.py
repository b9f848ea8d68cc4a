"""Command line interface: ``msplit {solve,bench,rho,check}``.

Exit status is 0 on success, 2 when a solve does not converge and 1 on
usage, input or format errors.
"""

import argparse
import json
import sys

import numpy as np

from .bench import SweepGrid, best_omega, format_rows, parse_sweep, run_benchmark, spec_for
from .errors import MsplitError
from .io import load_tensor, load_vector
from .preconditioning import (
    PreconditionerSpec,
    Variant,
    check_conditions,
    classify,
    has_unit_diagonal,
    normalize,
)
from .solver import SolveOptions, solve_system
from .spectral import spectral_radius
from .splittings import Family, SplittingVariant

EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _param(text):
    """A scalar or a comma-separated list of nonnegative reals."""
    values = [float(t) for t in text.split(",") if t.strip()]
    if not values:
        raise argparse.ArgumentTypeError(f"no values in {text!r}")
    return values[0] if len(values) == 1 else tuple(values)


def _int_list(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def build_parser():
    methods = [f.value for f in Family]
    parser = _Parser(prog="msplit", description="Preconditioned splitting solvers for M-tensor systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve A x^(m-1) = b")
    p.add_argument("--tensor", required=True, help="tensor JSON file")
    p.add_argument("--rhs", help="vector JSON file (default: all ones)")
    p.add_argument("--method", default="e2f2", choices=methods)
    p.add_argument("--alpha", type=_param, default=0.0)
    p.add_argument("--beta", type=_param, default=0.0)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--omega", type=float, default=1.2)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("bench", help="sweep methods and parameters over an example system")
    p.add_argument("--example", type=int, required=True, choices=(1, 2, 3))
    p.add_argument("--n", type=int, help="dimension (example 2)")
    p.add_argument("--methods", required=True, help="comma-separated method names")
    p.add_argument("--alpha-sweep", default="0", help="LO:STEP:HI or a comma list")
    p.add_argument("--beta-sweep", help="as --alpha-sweep; default ties beta to alpha")
    p.add_argument("--omega-sweep", default="1.2")
    p.add_argument("--s", type=_int_list, default=(1,), help="comma list of upper offsets (0 drops the band)")
    p.add_argument("--k", type=_int_list, default=(1,), help="comma list of lower offsets (0 drops the band)")
    p.add_argument("--best-omega", action="store_true", help="keep only the best omega per row")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--format", default="csv", choices=("csv", "md", "json"))

    p = sub.add_parser("rho", help="Perron radius of a nonnegative tensor")
    p.add_argument("--tensor", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=10000)

    p = sub.add_parser("check", help="Z / strong-M classification and parameter conditions")
    p.add_argument("--tensor", required=True)
    p.add_argument("--alpha", type=_param, default=0.0)
    p.add_argument("--beta", type=_param, default=0.0)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--banded", action="store_true", help="use the banded partner index in the k != s conditions")
    return parser


def _emit(payload, out=None):
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_solve(args):
    A = load_tensor(args.tensor)
    b = load_vector(args.rhs) if args.rhs else np.ones(A.shape[0])
    family = Family(args.method)
    spec = spec_for(family, args.alpha, args.beta, args.s, args.k)
    variant = SplittingVariant(family, args.omega if family.needs_omega else None)
    options = SolveOptions(args.tol, args.max_iter)
    x, report, _ = solve_system(A, b, variant, spec, options=options)
    payload = report.to_dict()
    payload["preconditioner"] = spec.to_dict()
    payload["omega"] = variant.omega
    payload["x"] = x.tolist()
    _emit(payload, args.out)
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def _cmd_bench(args):
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    grid = SweepGrid(
        alpha=parse_sweep(args.alpha_sweep),
        beta=parse_sweep(args.beta_sweep) if args.beta_sweep else None,
        s=args.s,
        k=args.k,
        omega=parse_sweep(args.omega_sweep),
    )
    rows = run_benchmark(args.example, methods, grid, SolveOptions(args.tol, args.max_iter), n=args.n)
    if args.best_omega:
        rows = best_omega(rows)
    sys.stdout.write(format_rows(rows, args.format))
    if any(r.status == "error" for r in rows):
        for r in rows:
            if r.status == "error":
                print(f"{r.method}: {r.message}", file=sys.stderr)
    return EXIT_OK


def _cmd_rho(args):
    est = spectral_radius(load_tensor(args.tensor), args.tol, args.max_iter)
    _emit(est.to_dict())
    return EXIT_OK if est.converged else EXIT_NOT_CONVERGED


def _cmd_check(args):
    A = load_tensor(args.tensor)
    result = classify(A).to_dict()
    spec = PreconditionerSpec(Variant.FULL_BAND, args.alpha, args.beta, args.s, args.k)
    try:
        An = A if has_unit_diagonal(A) else normalize(A)[0]
        result["conditions"] = check_conditions(An, spec, banded=args.banded).to_dict()
    except MsplitError as exc:
        result["conditions_error"] = str(exc)
    _emit(result)
    return EXIT_OK


_COMMANDS = {"solve": _cmd_solve, "bench": _cmd_bench, "rho": _cmd_rho, "check": _cmd_check}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (MsplitError, ValueError, OSError) as exc:
        print(f"msplit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
