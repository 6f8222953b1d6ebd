"""Command-line front end: ``gapbound {bound,sweep,simulate,catalog,verify}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings

from . import geometry
from .catalog import builtin_models, consistency_check
from .coupling_sim import SimConfig, contraction_check, simulate
from .errors import ConsistencyFailure, GapBoundError
from .solver import (
    TrialFunction,
    make_operator,
    optimal_bound,
    ratio_grid,
    trial_bound,
    trial_ratio,
)
from .verify import run_suite

EXIT_VALIDATION = 2
EXIT_CHECK_FAILED = 3


class UsageError(GapBoundError):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, allow_nan=False)


def _add_class_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True,
                   choices=["riemannian", "kahler", "quaternion-kahler", "quaternion"])
    p.add_argument("--n", type=int, help="real dimension (riemannian)")
    p.add_argument("--m", type=int, help="complex or quaternionic dimension")
    p.add_argument("--k", type=float, help="Ric >= (n-1) k (riemannian)")
    p.add_argument("--k1", type=float, help="H >= 4 k1 or Q >= 12 k1")
    p.add_argument("--k2", type=float, default=0.0, help="Ric_perp lower bound parameter")
    p.add_argument("--diameter", type=float, required=True)
    p.add_argument("--clip-diameter", action="store_true",
                   help="shrink D by a relative 1e-9 (for diameters attaining the bound)")


def _add_trial_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trial", choices=["sine-halfpi", "sine"], default="sine-halfpi")
    p.add_argument("--omega", type=float, help="frequency for --trial sine")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gapbound",
        description="First-eigenvalue lower bounds from curvature bounds and diameter.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="print a BoundResult as JSON")
    _add_class_args(p)
    _add_trial_args(p)
    p.add_argument("--method", choices=["trial", "optimal", "both"], default="both")
    p.add_argument("--grid", type=int, default=2048)

    p = sub.add_parser("sweep", help="CSV of r, drift, L g / g over the grid")
    _add_class_args(p)
    _add_trial_args(p)
    p.add_argument("--grid", type=int, default=256)

    p = sub.add_parser("simulate", help="Monte-Carlo contraction check")
    _add_class_args(p)
    _add_trial_args(p)
    p.add_argument("--grid", type=int, default=1024)
    p.add_argument("--rho0", type=float, help="initial distance (default D/2)")
    p.add_argument("--t-end", type=float, default=0.25)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--paths", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", choices=["json", "csv"], default="json")

    p = sub.add_parser("catalog", help="model-space registry and consistency checks")
    p.add_argument("--max-m", type=int, default=3)
    p.add_argument("--check", action="store_true", help="run consistency checks")
    p.add_argument("--grid", type=int, default=2048)

    p = sub.add_parser("verify", help="identity and exactness suite")
    p.add_argument("--grid", type=int, default=2048)
    return parser


def _class_from_args(args) -> geometry.CurvatureClass:
    fam = args.family
    if fam == "riemannian":
        if args.n is None or args.k is None:
            raise UsageError("--family riemannian needs --n and --k")
        return geometry.Riemannian(args.n, args.k)
    if args.m is None or args.k1 is None:
        raise UsageError(f"--family {fam} needs --m and --k1")
    kind = geometry.Kahler if fam == "kahler" else geometry.QuaternionKahler
    return kind(args.m, args.k1, args.k2)


def _operator_from_args(args):
    cls = _class_from_args(args)
    D = args.diameter
    if args.clip_diameter:
        D = geometry.clip_diameter(D)
    return make_operator(cls, D)


def _trial_from_args(args, D: float) -> TrialFunction:
    if args.trial == "sine":
        if args.omega is None:
            raise UsageError("--trial sine needs --omega")
        return TrialFunction.sine(args.omega)
    return TrialFunction.sine_halfpi(D)


def _cmd_bound(args, out) -> int:
    op = _operator_from_args(args)
    results = []
    if args.method in ("trial", "both"):
        g = _trial_from_args(args, op.diameter)
        results.append(trial_bound(op, g, max(args.grid, 64)).to_dict())
    if args.method in ("optimal", "both"):
        with warnings.catch_warnings(record=True):
            warnings.simplefilter("always")
            results.append(optimal_bound(op, args.grid).to_dict())
    out.write(_dumps(results[0] if len(results) == 1 else results) + "\n")
    return 0


def _cmd_sweep(args, out) -> int:
    op = _operator_from_args(args)
    g = _trial_from_args(args, op.diameter)
    r = ratio_grid(op.diameter, args.grid)
    drift = op.b(r)
    ratio = trial_ratio(op, g, r)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["r", "drift", "ratio"])
    for row in zip(r, drift, ratio):
        writer.writerow([f"{float(v):.9g}" for v in row])
    return 0


def _cmd_simulate(args, out) -> int:
    op = _operator_from_args(args)
    g = _trial_from_args(args, op.diameter)
    delta = trial_bound(op, g, max(args.grid, 64)).delta
    rho0 = args.rho0 if args.rho0 is not None else op.diameter / 2.0
    cfg = SimConfig(rho0, args.t_end, args.dt, args.paths, args.seed, args.workers)
    result = simulate(op, cfg, g)
    report = contraction_check(op, g, delta, cfg, result)
    if args.out == "csv":
        out.write(result.to_csv())
        status = "pass" if report.passed else "fail"
        sys.stderr.write(f"contraction check (delta={delta!r}): {status}\n")
    else:
        out.write(_dumps({"simulation": result.to_dict(), "report": report.to_dict()}) + "\n")
    return 0


def _cmd_catalog(args, out) -> int:
    models = builtin_models(args.max_m)
    if not args.check:
        out.write(_dumps([m.to_dict() for m in models]) + "\n")
        return 0
    reports, failed = [], False
    for model in models:
        if not model.compact:
            continue
        try:
            reports.append({"status": "pass", **consistency_check(model, args.grid)})
        except ConsistencyFailure as exc:
            failed = True
            reports.append({"model": model.name, "status": "fail", "error": str(exc)})
    out.write(_dumps(reports) + "\n")
    return EXIT_CHECK_FAILED if failed else 0


def _cmd_verify(args, out) -> int:
    rows = run_suite(grid_n=args.grid)
    width = max(len(r.name) for r in rows)
    for r in rows:
        out.write(f"{r.name:<{width}}  {'pass' if r.passed else 'fail'}  {r.detail}\n")
    return 0 if all(r.passed for r in rows) else EXIT_CHECK_FAILED


COMMANDS = {
    "bound": _cmd_bound,
    "sweep": _cmd_sweep,
    "simulate": _cmd_simulate,
    "catalog": _cmd_catalog,
    "verify": _cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    # buffer so that a failing command prints nothing to stdout
    buf = io.StringIO()
    try:
        code = COMMANDS[args.command](args, buf)
    except ConsistencyFailure as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_CHECK_FAILED
    except GapBoundError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_VALIDATION
    out.write(buf.getvalue())
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
