"""Command-line surface: norms, series, fits, scenario verification, sweeps.

Exit codes: 0 on success (and all scenarios passing), 1 when a
verification or numerical run fails, 2 on usage/configuration errors.
Output files are deterministic for a fixed configuration: 17 significant
digits, comma-separated, LF line endings.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import analysis, model, scenarios
from .analysis import NormSeries, fit_log, fit_power, norm_series
from .model import DataError, Problem
from .quadrature import QuadConfig, QuadratureError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _load_problem(path) -> Problem:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read problem file: {exc}")
    try:
        return Problem.from_json_str(text)
    except DataError as exc:
        raise UsageError(f"bad problem description: {exc}")


def _quad_config(args) -> QuadConfig:
    try:
        return QuadConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                          max_halfperiods=args.max_halfperiods,
                          panel_order=args.panel_order)
    except ValueError as exc:
        raise UsageError(str(exc))


def _t_grid(args):
    if args.t_list:
        try:
            grid = [float(x) for x in args.t_list.split(",") if x.strip()]
        except ValueError as exc:
            raise UsageError(f"bad --t-list: {exc}")
    else:
        if args.t_min is None or args.t_max is None:
            raise UsageError("need either --t-list or --t-min/--t-max")
        if args.t_min <= 0 or args.t_max <= args.t_min or args.points < 1:
            raise UsageError("need 0 < t-min < t-max and points >= 1")
        grid = list(np.logspace(math.log10(args.t_min), math.log10(args.t_max),
                                args.points))
    if not grid:
        raise UsageError("empty time grid")
    return grid


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _add_quad_args(parser):
    parser.add_argument("--rel-tol", type=float, default=1e-10)
    parser.add_argument("--abs-tol", type=float, default=1e-14)
    parser.add_argument("--max-halfperiods", type=int, default=10_000_000)
    parser.add_argument("--panel-order", type=int, default=16)


def cmd_norm(args):
    problem = _load_problem(args.problem)
    cfg = _quad_config(args)
    if args.t < 0:
        raise UsageError("t must be nonnegative")
    value, err = analysis.norm_sq_with_error(problem, args.t, cfg)
    result = {"t": args.t, "norm_sq": value,
              "norm": math.sqrt(max(value, 0.0)), "err_estimate": err}
    if args.format == "json":
        _write(args.output, json.dumps(result, indent=2, sort_keys=True))
    else:
        lines = ["quantity,value",
                 f"norm_sq,{value:.17g}",
                 f"norm,{math.sqrt(max(value, 0.0)):.17g}",
                 f"err_estimate,{err:.17g}"]
        _write(args.output, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_series(args):
    problem = _load_problem(args.problem)
    cfg = _quad_config(args)
    grid = _t_grid(args)
    try:
        series = norm_series(problem, grid, args.quantity, cfg, delta0=args.delta0)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.format == "json":
        _write(args.output, json.dumps(series.to_json(), indent=2, sort_keys=True))
    else:
        _write(args.output, series.to_csv())
    return EXIT_OK


def cmd_fit(args):
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            series = NormSeries.from_csv(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read series CSV: {exc}")
    except ValueError as exc:
        raise UsageError(f"bad series CSV: {exc}")
    try:
        fit = fit_power(series) if args.model == "power" else fit_log(series)
    except ValueError as exc:
        raise UsageError(str(exc))
    _write(args.output, json.dumps(fit.to_json(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_verify(args):
    cfg = _quad_config(args)
    ids = args.scenarios
    if not ids or ids == ["all"]:
        ids = sorted(scenarios.SCENARIOS)
    else:
        unknown = [sid for sid in ids if sid not in scenarios.SCENARIOS]
        if unknown:
            raise UsageError(f"unknown scenario id(s): {', '.join(unknown)}; "
                             f"known: {', '.join(sorted(scenarios.SCENARIOS))}")
    reports = [scenarios.run_scenario(sid, cfg, n=args.n, delta0=args.delta0)
               for sid in ids]
    bundle = {"passed": all(r.passed for r in reports),
              "reports": [r.to_json() for r in reports]}
    _write(args.output, json.dumps(bundle, indent=2, sort_keys=True))
    for r in reports:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.scenario_id} "
              f"({r.runtime_seconds:.1f}s)", file=sys.stderr)
    return EXIT_OK if bundle["passed"] else EXIT_FAILURE


def cmd_sweep(args):
    cfg = _quad_config(args)
    try:
        sigmas = [float(x) for x in args.sigmas.split(",") if x.strip()]
        ns = [int(x) for x in args.ns.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad sweep grid: {exc}")
    if not sigmas or not ns:
        raise UsageError("sweep needs at least one sigma and one n")
    rows = scenarios.sigma_sweep(sigmas, ns, cfg)
    lines = ["sigma,n,class,alpha"]
    lines += [",".join(cell.to_row()) for cell in rows]
    _write(args.output, "\n".join(lines) + "\n")
    bad = [cell for cell in rows if cell.classification == "error"]
    return EXIT_FAILURE if bad else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="platelab",
        description="Fourier-space laboratory for L2 growth of plate-type "
                    "dispersive equations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="evaluate ||u(t)||^2 at one time")
    p.add_argument("--problem", required=True, help="problem JSON file")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--output", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    _add_quad_args(p)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("series", help="evaluate a functional on a t grid")
    p.add_argument("--problem", required=True)
    p.add_argument("--quantity", choices=analysis.QUANTITIES, default="norm_sq")
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--points", type=int, default=13)
    p.add_argument("--t-list", default=None, help="comma-separated explicit grid")
    p.add_argument("--delta0", type=float, default=analysis.DEFAULT_DELTA0)
    p.add_argument("--output", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_quad_args(p)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("fit", help="fit a growth law to a series CSV")
    p.add_argument("--input", required=True, help="CSV from the series command")
    p.add_argument("--model", choices=("power", "log"), default="power")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="run verification scenarios")
    p.add_argument("scenarios", nargs="*", default=["all"],
                   help="scenario ids, or 'all'")
    p.add_argument("--n", type=int, default=None,
                   help="restrict dimension where the scenario supports it")
    p.add_argument("--delta0", type=float, default=analysis.DEFAULT_DELTA0)
    p.add_argument("--output", default=None)
    _add_quad_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="classify growth over a (sigma, n) grid")
    p.add_argument("--sigmas", default="1,1.5,2,3")
    p.add_argument("--ns", default="1,2,3,4,5,6,7")
    p.add_argument("--output", default=None)
    _add_quad_args(p)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already; normalise others
        return EXIT_USAGE if exc.code not in (0,) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, DataError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
