"""Command line front end.

Subcommands mirror the library: ``generate2d``, ``generate3d``, ``verify``,
``simulate`` and ``scale``.  Every command accepts ``--config FILE`` with a
flat JSON object of option values; explicit flags override the file.  Exit
codes: 0 success, 2 validation failure, 3 I/O failure, 4 verification ran
but did not pass.  Set ``RAMPFORGE_LOG=DEBUG|INFO|WARNING|ERROR`` to control
logging (stderr; stdout carries only the JSON summaries).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import exporters
from .errors import (ContractViolationError, IntegrationError, ParameterError,
                     SingularFieldError)
from .ode import DEFAULT_STEP_FACTOR, IntegratorConfig
from .params import FrictionSpec, make_spec, spec_from_mu, spec_to_dict
from .planar import (Branch, apex_param, asymptote_gap, default_span, make_ramp,
                     sample_ramp)
from .ramp3d import (SpaceCurve3D, TangentField, build_surface, builtin_field,
                     hemisphere_point, integrate_ramp3d)
from .sim import simulate
from .verify import (Verdict, planar_reduction_check, verify_2d, verify_3d,
                     verify_scaling)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_VERIFICATION = 4

log = logging.getLogger(__name__)


def _setup_logging() -> None:
    name = os.environ.get("RAMPFORGE_LOG", "WARNING").upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _emit(payload: dict) -> None:
    print(exporters.dumps_json(payload))


def _parse_field(text: str | None) -> TangentField:
    if not text:
        raise ParameterError("--field is required for 3d geometry", code="config")
    if text.startswith("blend:"):
        try:
            weight = float(text.split(":", 1)[1])
        except ValueError as exc:
            raise ParameterError(f"bad blend weight in {text!r}", code="config") from exc
        return builtin_field("blend", weight)
    return builtin_field(text)


def _parse_mesh(text: str) -> tuple[int, int]:
    try:
        n_s, n_r = (int(part) for part in text.lower().split("x"))
    except ValueError as exc:
        raise ParameterError(f"--mesh expects NxM, got {text!r}", code="config") from exc
    return n_s, n_r


def _spec_from_args(args: argparse.Namespace) -> FrictionSpec:
    have_mu = args.mu is not None
    have_delta = args.delta_deg is not None
    if have_mu == have_delta:
        raise ParameterError("provide exactly one of --mu / --delta-deg",
                             code="config")
    if args.v is None:
        raise ParameterError("--v (block speed) is required", code="config")
    if have_mu:
        return spec_from_mu(args.mu, g=args.g, v=args.v, m=args.mass)
    return make_spec(math.radians(args.delta_deg), g=args.g, v=args.v, m=args.mass)


def _normalized_y0(values) -> np.ndarray:
    if values is None:
        raise ParameterError("--y0 (initial direction) is required for 3d geometry",
                             code="config")
    y0 = np.asarray([float(v) for v in values], dtype=float)
    if y0.shape != (3,):
        raise ParameterError(f"--y0 expects three components, got {values!r}",
                             code="config")
    norm = float(np.linalg.norm(y0))
    if norm == 0.0 or not math.isfinite(norm):
        raise ParameterError(f"--y0 must be a nonzero finite vector, got {values!r}",
                             code="config")
    return hemisphere_point(y0 / norm)


def _integrate_from_args(spec: FrictionSpec, args: argparse.Namespace) -> SpaceCurve3D:
    tangent_field = _parse_field(args.field)
    y0 = _normalized_y0(args.y0)
    s_max = args.smax if args.smax is not None else 5.0 / spec.a
    step = args.step if args.step is not None else DEFAULT_STEP_FACTOR / spec.a
    return integrate_ramp3d(spec, tangent_field, y0, s_max,
                            IntegratorConfig(step=step))


def _pick_geometry(spec: FrictionSpec, args: argparse.Namespace):
    two_d = args.branch is not None
    three_d = args.field is not None
    if two_d == three_d:
        raise ParameterError("choose exactly one of --branch (planar) or "
                             "--field (spatial)", code="config")
    if two_d:
        return make_ramp(spec, args.branch)
    return _integrate_from_args(spec, args)


def cmd_generate2d(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    ramp = make_ramp(spec, args.branch)
    span = args.span if args.span is not None else default_span(spec)
    if not (math.isfinite(span) and span > 0.0):
        raise ParameterError(f"--span must be positive, got {span!r}")
    if args.samples < 2:
        raise ParameterError(f"--samples must be at least 2, got {args.samples}")
    s = np.linspace(0.0, span, args.samples)
    data = sample_ramp(spec, ramp, s)

    out = None
    if args.out:
        out = Path(args.out)
        if args.format == "csv":
            exporters.write_curve2d_csv(out, data)
        elif args.format == "json":
            exporters.write_curve2d_json(out, spec, data,
                                         extra={"branch": ramp.branch.value})
        else:
            exporters.write_curve2d_svg(out, data["x"], data["y"])
    _emit({
        "apex_s0": apex_param(spec),
        "asymptote_gap": asymptote_gap(spec),
        "branch": ramp.branch.value,
        "span": float(span),
        "samples": int(args.samples),
        "spec": spec_to_dict(spec),
        "out": str(out) if out else None,
    })
    return EXIT_OK


def cmd_generate3d(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    if not args.out:
        raise ParameterError("--out base path is required", code="config")
    curve = _integrate_from_args(spec, args)
    surface = build_surface(curve, curve.field, r_extent=tuple(args.r_extent),
                            resolution=_parse_mesh(args.mesh))
    report = verify_3d(spec, curve)
    reduction = planar_reduction_check(spec, curve)

    base = Path(args.out)
    obj_path = base.parent / (base.name + ".obj")
    csv_path = base.parent / (base.name + ".curve.csv")
    report_path = base.parent / (base.name + ".report.json")
    exporters.write_obj(obj_path, surface)
    exporters.write_curve3d_csv(csv_path, curve, spec)
    exporters.write_json(report_path, {
        "spec": spec_to_dict(spec),
        "field": curve.field.name,
        "report": exporters.report_to_dict(report),
        "planar_reduction": reduction,
        "norm_drift_total": curve.norm_drift_total,
        "stopped_early": curve.stopped_early,
        "stop_reason": curve.stop_reason,
    })
    _emit({
        "verdict": report.verdict.value,
        "max_residual": report.max_residual,
        "lambda_min": report.lambda_min,
        "planar_reduction": reduction,
        "stopped_early": curve.stopped_early,
        "files": {"mesh": str(obj_path), "curve": str(csv_path),
                  "report": str(report_path)},
    })
    return EXIT_OK if report.verdict is Verdict.VALID else EXIT_VERIFICATION


def cmd_verify(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    geometry = _pick_geometry(spec, args)
    if isinstance(geometry, SpaceCurve3D):
        report = verify_3d(spec, geometry, n_samples=args.samples)
    else:
        t_span = tuple(args.t_span) if args.t_span else None
        report = verify_2d(spec, geometry, t_span=t_span, n_samples=args.samples)
    if args.out:
        exporters.write_json(Path(args.out), exporters.report_to_dict(report))
    _emit(exporters.report_to_dict(report, include_profiles=False))
    return EXIT_OK if report.verdict is Verdict.VALID else EXIT_VERIFICATION


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    geometry = _pick_geometry(spec, args)
    trace = simulate(spec, geometry, tuple(args.t_span), fps=args.fps)
    out = None
    if args.out:
        out = Path(args.out)
        if args.format == "csv":
            exporters.write_frames_csv(out, trace)
        else:
            exporters.write_frames_jsonl(out, trace)
    summary = exporters.trace_summary(trace)
    summary["out"] = str(out) if out else None
    _emit(summary)
    return EXIT_OK


def cmd_scale(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    if args.kappa is None:
        raise ParameterError("--kappa is required", code="config")
    geometry = _pick_geometry(spec, args)
    result = verify_scaling(spec, geometry, args.kappa, n_samples=args.samples)
    if args.out:
        exporters.write_json(Path(args.out),
                             exporters.scaling_to_dict(result, include_profiles=True))
    _emit(exporters.scaling_to_dict(result, include_profiles=False))
    return EXIT_OK if result.both_valid else EXIT_VERIFICATION


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", type=str, default=None,
                     help="JSON file with option values; flags override it")
    grp = sub.add_argument_group("physical parameters")
    grp.add_argument("--mu", type=float, default=None,
                     help="kinetic friction coefficient in (0, 1)")
    grp.add_argument("--delta-deg", dest="delta_deg", type=float, default=None,
                     help="friction angle in degrees (alternative to --mu)")
    grp.add_argument("--v", type=float, default=None, help="block speed, m/s")
    grp.add_argument("--g", type=float, default=9.81,
                     help="gravity, m/s^2 (default 9.81)")
    grp.add_argument("--mass", type=float, default=1.0,
                     help="block mass, kg (default 1)")


def _add_geometry3d(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--field", type=str, default=None,
                     help="tangent field: upslope | horizontal | blend:W")
    sub.add_argument("--y0", type=float, nargs=3, default=None,
                     metavar=("Y1", "Y2", "Y3"),
                     help="initial direction (normalized on input, y3 <= 0)")
    sub.add_argument("--smax", type=float, default=None,
                     help="arc length to integrate (default 5/a)")
    sub.add_argument("--step", type=float, default=None,
                     help="integrator step (default 1e-3/a)")


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="rampforge",
        description="Constant-speed ramp curves, surfaces and force checks.")
    commands = parser.add_subparsers(dest="command", metavar="command")
    registry: dict = {}

    def register(name: str, sub: argparse.ArgumentParser, func) -> None:
        sub.set_defaults(func=func)
        registry[name] = (sub, {a.dest for a in sub._actions}
                          - {"help", "func", "command"})

    sub = commands.add_parser("generate2d", help="sample a planar ramp branch")
    _add_common(sub)
    sub.add_argument("--branch", choices=[b.value for b in Branch], default="lower")
    sub.add_argument("--span", type=float, default=None,
                     help="arc length to sample (default 8/a)")
    sub.add_argument("--samples", type=int, default=400)
    sub.add_argument("--out", type=str, default=None)
    sub.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    register("generate2d", sub, cmd_generate2d)

    sub = commands.add_parser("generate3d",
                              help="integrate a hemisphere flow and mesh the strip")
    _add_common(sub)
    _add_geometry3d(sub)
    sub.add_argument("--r-extent", dest="r_extent", type=float, nargs=2,
                     default=[-0.5, 0.5], metavar=("RMIN", "RMAX"))
    sub.add_argument("--mesh", type=str, default="200x16",
                     help="surface resolution as NxM quads (default 200x16)")
    sub.add_argument("--out", type=str, default=None,
                     help="base path; writes .obj, .curve.csv and .report.json")
    register("generate3d", sub, cmd_generate3d)

    sub = commands.add_parser("verify", help="force-balance check of a geometry")
    _add_common(sub)
    _add_geometry3d(sub)
    sub.add_argument("--branch", choices=[b.value for b in Branch], default=None)
    sub.add_argument("--t-span", dest="t_span", type=float, nargs=2, default=None,
                     metavar=("T0", "T1"))
    sub.add_argument("--samples", type=int, default=400)
    sub.add_argument("--out", type=str, default=None, help="report JSON path")
    register("verify", sub, cmd_verify)

    sub = commands.add_parser("simulate", help="frame-by-frame force decomposition")
    _add_common(sub)
    _add_geometry3d(sub)
    sub.add_argument("--branch", choices=[b.value for b in Branch], default=None)
    sub.add_argument("--t-span", dest="t_span", type=float, nargs=2,
                     default=[0.0, 2.0], metavar=("T0", "T1"))
    sub.add_argument("--fps", type=float, default=30.0)
    sub.add_argument("--out", type=str, default=None)
    sub.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    register("simulate", sub, cmd_simulate)

    sub = commands.add_parser("scale",
                              help="dilate a geometry and verify both readings")
    _add_common(sub)
    _add_geometry3d(sub)
    sub.add_argument("--branch", choices=[b.value for b in Branch], default=None)
    sub.add_argument("--kappa", type=float, default=None, help="dilation factor")
    sub.add_argument("--samples", type=int, default=400)
    sub.add_argument("--out", type=str, default=None, help="full report JSON path")
    register("scale", sub, cmd_scale)

    return parser, registry


def _peek_config(argv: list[str]) -> str | None:
    for i, token in enumerate(argv):
        if token == "--config":
            if i + 1 >= len(argv):
                raise ParameterError("--config needs a file path", code="config")
            return argv[i + 1]
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def _apply_config(argv: list[str], registry: dict) -> None:
    path = _peek_config(argv)
    if path is None:
        return
    command = next((t for t in argv if not t.startswith("-")), None)
    if command not in registry:
        return  # argparse will produce its own usage error
    sub, known = registry[command]
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParameterError(f"config file {path} is not valid JSON: {exc}",
                             code="config") from exc
    if not isinstance(data, dict):
        raise ParameterError(f"config file {path} must hold a JSON object",
                             code="config")
    unknown = set(data) - known
    if unknown:
        raise ParameterError(
            f"config file {path} has unknown keys: {sorted(unknown)}", code="config")
    sub.set_defaults(**data)


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    _setup_logging()
    parser, registry = build_parser()
    try:
        _apply_config(argv, registry)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        if getattr(args, "func", None) is None:
            parser.print_usage(sys.stderr)
            return EXIT_VALIDATION
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ContractViolationError, IntegrationError, SingularFieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
