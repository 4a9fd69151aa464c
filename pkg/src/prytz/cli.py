"""Command-line front door: tracing, holonomy, Menzin scans, Hill studies, serve.

Exit codes: 0 success, 2 usage (argparse), 3 bad input, 4 numeric failure.
Outputs are deterministic: identical flags and input files give byte-identical
files (floats at 17 significant digits, no timestamps).
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__, jsonio
from .dynamics import area_identity_report, integrate, standard_tractrix, trace_loop
from .errors import InputError, NumericError
from .estimator import error_order_study, hill_predict, measure_once
from .geom2d import PlanarPath, Point2, moments_about
from .holonomy import ConnectionParams, holonomy_curve, holonomy_polygon, winding_number
from .menzin import (ParallelogramSpec, circle_closed_tractrix, family_from_config,
                     menzin_minimum_check, menzin_scan, parallelogram_holonomy)
from .su11 import HolonomyKind

CONFIG_KEYS = ("ell", "step", "theta0", "format", "samples", "seed", "port", "bind")


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_path_file(path: str) -> PlanarPath:
    try:
        obj = jsonio.loads(_read_text(path))
    except ValueError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return jsonio.path_from_obj(obj)


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _parse_pair(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"{flag} expects 'x,y'")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise InputError(f"{flag} expects numbers: {exc}") from exc


def _trace_text(result, fmt: str, samples: int, report=None) -> str:
    if fmt == "json":
        return jsonio.dumps(jsonio.trace_to_obj(result, samples, report)) + "\n"
    if fmt == "csv":
        return jsonio.trace_to_csv(result, samples)
    if fmt == "svg":
        return jsonio.svg_document(
            [(result.points, "#1f77b4"), (result.chisel_points, "#d62728")], result.ell)
    raise InputError(f"unknown format {fmt!r}")


def cmd_tractrix(args) -> int:
    if (args.line is None) == (args.path is None):
        raise InputError("give exactly one of --line or --path")
    if args.line is not None:
        path = PlanarPath([(0.0, 0.0), (float(args.line), 0.0)])
    else:
        path = _load_path_file(args.path)
        if path.closed:
            path = PlanarPath(path.traversal(), closed=False, validate=False)
    result = integrate(path, args.theta0, args.ell, args.step)
    _emit(_trace_text(result, args.format, args.samples), args.output)
    return 0


def cmd_trace(args) -> int:
    path = _load_path_file(args.path)
    if args.loop and not path.closed:
        raise InputError("--loop requires a closed path")
    if path.closed:
        report = area_identity_report(path, args.base_index, args.theta0, args.ell, args.step)
        result = report.trace
        if args.format == "json":
            _emit(jsonio.dumps(jsonio.trace_to_obj(result, args.samples, report)) + "\n",
                  args.output)
        else:
            _emit(_trace_text(result, args.format, args.samples, report), args.output)
        print(f"A_region   = {jsonio.format_float(report.a_region)}", file=sys.stderr)
        print(f"ell_sigma  = {jsonio.format_float(report.ell_sigma)}", file=sys.stderr)
        print(f"A_gamma    = {jsonio.format_float(report.a_gamma)}", file=sys.stderr)
        print(f"residual   = {jsonio.format_float(report.residual)}", file=sys.stderr)
    else:
        result = integrate(path, args.theta0, args.ell, args.step)
        _emit(_trace_text(result, args.format, args.samples), args.output)
    return 0


def cmd_holonomy(args) -> int:
    path = _load_path_file(args.path)
    params = ConnectionParams(args.ell)
    if args.ode:
        hol = holonomy_curve(path, args.base_index, params, args.step)
    else:
        hol = holonomy_polygon(path, args.base_index, params)
    obj = jsonio.holonomy_to_obj(hol)
    if args.winding and hol.classification.kind is HolonomyKind.HYPERBOLIC:
        theta_plus = math.atan2(hol.classification.attracting.imag,
                                hol.classification.attracting.real)
        obj["winding"] = winding_number(path, args.base_index, theta_plus, params, args.step)
    _emit(jsonio.dumps(obj) + "\n", args.output)
    return 0


def cmd_menzin(args) -> int:
    if args.min_check:
        result = menzin_minimum_check()
        _emit(jsonio.dumps({"minimum": result.value, "x": result.x, "y": result.y,
                            "theta": result.theta}) + "\n", args.output)
        return 0
    if args.circle is not None:
        radius = circle_closed_tractrix(args.circle, args.ell)
        _emit(jsonio.dumps({"R": args.circle, "ell": args.ell,
                            "closed_tractrix_radius": radius}) + "\n", args.output)
        return 0
    if args.scan is not None:
        config = jsonio.loads(_read_text(args.scan))
        ell = float(config.get("ell", args.ell if args.ell is not None else 1.0))
        ids, regions = family_from_config(config)
        rows = menzin_scan(regions, ell, args.step, ids)
        _emit(jsonio.scan_to_csv(rows), args.output)
        return 0
    if args.v is None or args.w is None or args.ell is None:
        raise InputError("single-parallelogram report needs --v, --w, and --ell")
    spec = ParallelogramSpec(_parse_pair(args.v, "--v"), _parse_pair(args.w, "--w"), args.ell)
    report = parallelogram_holonomy(spec)
    _emit(jsonio.dumps(jsonio.menzin_report_to_obj(report)) + "\n", args.output)
    return 0


def cmd_hill(args) -> int:
    path = _load_path_file(args.path)
    base = Point2(*_parse_pair(args.base, "--base")) if args.base else None
    if args.scales:
        scales = [float(s) for s in args.scales.split(",")]
        study = error_order_study(path, args.base_index, args.theta0, args.ell,
                                  scales, args.step)
        if args.format == "csv":
            rows = [[r.scale, r.area, r.reading, r.prediction, r.averaged_reading,
                     r.averaged_prediction, r.err_raw_vs_area, r.err_raw_vs_prediction,
                     r.err_avg_vs_prediction] for r in study.rows]
            _emit(jsonio.csv_lines(
                ["scale", "area", "reading", "hill_prediction", "averaged_reading",
                 "averaged_prediction", "err_raw_vs_area", "err_raw_vs_prediction",
                 "err_avg_vs_prediction"], rows), args.output)
        else:
            _emit(jsonio.dumps({
                "exponent_raw_vs_area": study.exponent_raw_vs_area,
                "exponent_raw_vs_prediction": study.exponent_raw_vs_prediction,
                "exponent_avg_vs_prediction": study.exponent_avg_vs_prediction,
                "r2": [study.r2_raw_vs_area, study.r2_raw_vs_prediction,
                       study.r2_avg_vs_prediction],
                "rows": [{"scale": r.scale, "area": r.area, "reading": r.reading,
                          "prediction": r.prediction, "averaged_reading": r.averaged_reading,
                          "averaged_prediction": r.averaged_prediction} for r in study.rows],
            }) + "\n", args.output)
        return 0
    anchor = base if base is not None else Point2(*path.rolled(args.base_index).vertices[0])
    reading = measure_once(path, args.base_index, args.theta0, args.ell, args.step, base)
    opposite = measure_once(path, args.base_index, args.theta0 + math.pi, args.ell,
                            args.step, base)
    moments = moments_about(path, anchor)
    pred = hill_predict(moments, anchor, args.theta0, args.ell)
    _emit(jsonio.dumps({
        "reading": reading,
        "reading_opposite": opposite,
        "averaged_reading": 0.5 * (reading + opposite),
        "ell_sigma_predicted": pred.ell_sigma_predicted,
        "averaged_predicted": pred.averaged_predicted,
        "area": moments.area,
        "moments": jsonio.moments_to_obj(moments),
    }) + "\n", args.output)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.bind, port=args.port, log_level="warning")
    return 0


def _build_parser(defaults: dict) -> argparse.ArgumentParser:
    """Build the CLI; values from a --config file relax the matching required
    flags (explicit flags still win over config values)."""
    parser = argparse.ArgumentParser(prog="prytz",
                                     description="virtual hatchet-planimeter engine")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="JSON file with default values for common flags")

    def add(p, flag, required=False, **kw):
        dest = flag.lstrip("-").replace("-", "_")
        if dest in defaults:
            kw["default"] = defaults[dest]
            required = False
        p.add_argument(flag, required=required, **kw)

    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_ell=True):
        add(p, "--ell", type=float, required=needs_ell, default=None, help="rod length")
        add(p, "--step", type=float, default=None, help="integration substep")
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")

    p = sub.add_parser("tractrix", help="chisel curve for a line or traced path")
    p.add_argument("--line", type=float, default=None, help="trace the x-axis for this length")
    p.add_argument("--path", default=None, help="path JSON file")
    add(p, "--theta0", type=float, required=True, default=None)
    add(p, "--format", choices=("json", "csv", "svg"), default="json")
    add(p, "--samples", type=int, default=512)
    common(p)
    p.set_defaults(func=cmd_tractrix)

    p = sub.add_parser("trace", help="trace a path; closed loops get the area identity report")
    p.add_argument("--path", required=True)
    add(p, "--theta0", type=float, required=True, default=None)
    p.add_argument("--base-index", type=int, default=0)
    p.add_argument("--loop", action="store_true", help="require loop tracing")
    add(p, "--format", choices=("json", "csv", "svg"), default="json")
    add(p, "--samples", type=int, default=512)
    common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("holonomy", help="loop holonomy, classification, fixed points")
    p.add_argument("--path", required=True)
    p.add_argument("--base-index", type=int, default=0)
    p.add_argument("--ode", action="store_true", help="integrate the transport ODE "
                                                      "instead of the closed-form product")
    p.add_argument("--winding", action="store_true",
                   help="also trace the loop at the attracting direction")
    common(p)
    p.set_defaults(func=cmd_holonomy)

    p = sub.add_parser("menzin", help="parallelogram report, scans, minimum check")
    p.add_argument("--v", default=None, help="first side 'x,y'")
    p.add_argument("--w", default=None, help="second side 'x,y'")
    p.add_argument("--min-check", action="store_true")
    p.add_argument("--circle", type=float, default=None,
                   help="closed-tractrix radius for a circle of this radius")
    p.add_argument("--scan", default=None, help="family config JSON; emits CSV")
    common(p, needs_ell=False)
    p.set_defaults(func=cmd_menzin)

    p = sub.add_parser("hill", help="readings vs moment-series predictions")
    p.add_argument("--path", required=True)
    p.add_argument("--base-index", type=int, default=0)
    p.add_argument("--base", default=None, help="off-boundary base point 'x,y' "
                                                "(out-and-back protocol)")
    add(p, "--theta0", type=float, required=True, default=None)
    p.add_argument("--scales", default=None, help="comma list; runs the error-order study")
    add(p, "--format", choices=("json", "csv"), default="json")
    common(p)
    p.set_defaults(func=cmd_hill)

    p = sub.add_parser("serve", help="run the local JSON service")
    add(p, "--port", type=int, default=8787)
    add(p, "--bind", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)

    # config file supplies defaults; explicit flags win
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    pre, _ = probe.parse_known_args(argv)
    defaults = {}
    if pre.config:
        try:
            config = jsonio.loads(_read_text(pre.config))
        except (InputError, ValueError) as exc:
            print(f"error: bad config: {exc}", file=sys.stderr)
            return 3
        if not isinstance(config, dict):
            print("error: config must be a JSON object", file=sys.stderr)
            return 3
        defaults = {k: v for k, v in config.items() if k in CONFIG_KEYS}

    args = _build_parser(defaults).parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
