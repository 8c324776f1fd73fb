"""Deterministic writers for curves, meshes, reports and frame streams.

Numbers are serialized with ``repr`` (shortest round-trip, at most 17
significant digits) except in SVG, where 6 significant digits are plenty for
figures.  Nothing here embeds timestamps or environment state, so repeated
runs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .ode import ThetaTrace, theta_closed_form
from .params import FrictionSpec, spec_to_dict
from .ramp3d import RampSurface3D, SpaceCurve3D, lambda_3d
from .sim import MotionTrace
from .verify import FeasibilityReport, ForceBalanceReport, ScalingVerification

CURVE2D_HEADER = "s,x,y,tx,ty,nx,ny,lambda"
CURVE3D_HEADER = "s,x,y,z,tx,ty,tz,lambda"
THETA_HEADER = "s,theta,theta_closed,abs_err"
PROFILE_HEADER = "t,residual,lambda"


def fmt(value: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(value))


def fmt6(value: float) -> str:
    return format(float(value), ".6g")


def _write_lines(path: str | Path, lines: list[str]) -> None:
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                          newline="\n")


def dumps_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def write_curve2d_csv(path: str | Path, samples: dict) -> None:
    """Columns ``s,x,y,tx,ty,nx,ny,lambda`` from :func:`planar.sample_ramp`."""
    keys = CURVE2D_HEADER.split(",")
    rows = [CURVE2D_HEADER]
    for i in range(len(samples["s"])):
        rows.append(",".join(fmt(samples[k][i]) for k in keys))
    _write_lines(path, rows)


def write_curve2d_json(path: str | Path, spec: FrictionSpec, samples: dict,
                       extra: dict | None = None) -> None:
    keys = CURVE2D_HEADER.split(",")
    payload = {
        "spec": spec_to_dict(spec),
        "columns": keys,
        "samples": [[float(samples[k][i]) for k in keys]
                    for i in range(len(samples["s"]))],
    }
    if extra:
        payload.update(extra)
    write_json(path, payload)


def write_curve2d_svg(path: str | Path, x: np.ndarray, y: np.ndarray,
                      width: float = 800.0) -> None:
    """Polyline figure of a planar curve; the y axis is flipped to screen
    orientation."""
    x = np.asarray(x, dtype=float)
    y = -np.asarray(y, dtype=float)
    span_x = float(x.max() - x.min()) or 1.0
    span_y = float(y.max() - y.min()) or 1.0
    margin = 0.05 * max(span_x, span_y)
    x0, y0 = float(x.min()) - margin, float(y.min()) - margin
    w, h = span_x + 2 * margin, span_y + 2 * margin
    height = width * h / w
    stroke = 0.004 * max(w, h)
    d = "M " + " L ".join(f"{fmt6(px)} {fmt6(py)}" for px, py in zip(x, y))
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt6(width)}" '
        f'height="{fmt6(height)}" viewBox="{fmt6(x0)} {fmt6(y0)} {fmt6(w)} {fmt6(h)}">\n'
        f'  <path d="{d}" fill="none" stroke="black" stroke-width="{fmt6(stroke)}"/>\n'
        f'</svg>'
    )
    Path(path).write_text(svg + "\n", newline="\n")


def write_curve3d_csv(path: str | Path, curve: SpaceCurve3D, spec: FrictionSpec) -> None:
    """Columns ``s,x,y,z,tx,ty,tz,lambda`` on the stored integration grid."""
    lam = lambda_3d(spec, curve.gamma)
    rows = [CURVE3D_HEADER]
    for i in range(curve.s.shape[0]):
        cells = [curve.s[i], *curve.alpha[i], *curve.gamma[i], lam[i]]
        rows.append(",".join(fmt(c) for c in cells))
    _write_lines(path, rows)


def write_theta_csv(path: str | Path, trace: ThetaTrace, spec: FrictionSpec) -> None:
    """Columns ``s,theta,theta_closed,abs_err`` comparing against the closed form."""
    closed = np.asarray(theta_closed_form(spec, trace.s), dtype=float)
    rows = [THETA_HEADER]
    for i in range(trace.s.shape[0]):
        err = abs(float(trace.theta[i]) - float(closed[i]))
        rows.append(",".join(fmt(c) for c in (trace.s[i], trace.theta[i], closed[i], err)))
    _write_lines(path, rows)


def write_obj(path: str | Path, surface: RampSurface3D) -> None:
    """Wavefront OBJ mesh of a ruled strip.

    Vertices are row-major in ``(s, r)``; one normal per s row is shared by
    the whole ruling; quads are split into two triangles wound so the face
    normals agree with the contact normal side.
    """
    n_s, n_r = surface.resolution
    lines = ["# ruled constant-speed ramp strip",
             f"# rows (s): {n_s + 1}  columns (r): {n_r + 1}"]
    for i in range(n_s + 1):
        for j in range(n_r + 1):
            vx, vy, vz = surface.vertices[i, j]
            lines.append(f"v {fmt(vx)} {fmt(vy)} {fmt(vz)}")
    for i in range(n_s + 1):
        nx, ny, nz = surface.vertex_normals[i]
        lines.append(f"vn {fmt(nx)} {fmt(ny)} {fmt(nz)}")

    def vid(i: int, j: int) -> int:
        return i * (n_r + 1) + j + 1

    for i in range(n_s):
        for j in range(n_r):
            a, b = vid(i, j), vid(i, j + 1)
            c, d = vid(i + 1, j), vid(i + 1, j + 1)
            lines.append(f"f {a}//{i + 1} {b}//{i + 1} {c}//{i + 2}")
            lines.append(f"f {b}//{i + 1} {d}//{i + 2} {c}//{i + 2}")
    _write_lines(path, lines)


def write_obj_polyline(path: str | Path, points: np.ndarray) -> None:
    """OBJ polyline (``l`` element) through the given points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    lines = ["# trajectory polyline"]
    for p in points:
        lines.append(f"v {fmt(p[0])} {fmt(p[1])} {fmt(p[2])}")
    lines.append("l " + " ".join(str(i + 1) for i in range(points.shape[0])))
    _write_lines(path, lines)


def report_to_dict(report: ForceBalanceReport, include_profiles: bool = True) -> dict:
    payload = {
        "verdict": report.verdict.value,
        "max_residual": float(report.max_residual),
        "max_normal_residual": float(report.max_normal_residual),
        "max_tangential_residual": float(report.max_tangential_residual),
        "lambda_min": float(report.lambda_min),
        "tol_residual": float(report.tol_residual),
        "tol_lambda": float(report.tol_lambda),
        "meta": report.meta,
    }
    if include_profiles:
        payload["t"] = [float(v) for v in report.t]
        payload["residual_norm"] = [float(v) for v in report.residual_norm]
        payload["lambda"] = [float(v) for v in report.lambda_profile]
    return payload


def feasibility_to_dict(report: FeasibilityReport) -> dict:
    return {
        "verdict": report.verdict.value,
        "lambda_min": float(report.lambda_min),
        "friction_consistency_max": float(report.friction_consistency_max),
        "tol": float(report.tol),
        "t": [float(v) for v in report.t],
        "lambda_required": [float(v) for v in report.lambda_required],
        "meta": report.meta,
    }


def scaling_to_dict(result: ScalingVerification, include_profiles: bool = False) -> dict:
    return {
        "kappa": float(result.kappa),
        "both_valid": result.both_valid,
        "speed_reinterpretation": {
            "spec": spec_to_dict(result.speed_spec),
            "report": report_to_dict(result.speed_report, include_profiles),
        },
        "gravity_reinterpretation": {
            "spec": spec_to_dict(result.gravity_spec),
            "report": report_to_dict(result.gravity_report, include_profiles),
        },
    }


def write_profile_csv(path: str | Path, report: ForceBalanceReport) -> None:
    """Columns ``t,residual,lambda`` for plotting a verification profile."""
    rows = [PROFILE_HEADER]
    for i in range(report.t.shape[0]):
        rows.append(",".join(fmt(c) for c in
                             (report.t[i], report.residual_norm[i],
                              report.lambda_profile[i])))
    _write_lines(path, rows)


def _frame_dict(frame) -> dict:
    return {
        "t": frame.t,
        "position": list(frame.position),
        "velocity": list(frame.velocity),
        "gravity_force": list(frame.gravity_force),
        "normal_force": list(frame.normal_force),
        "friction_force": list(frame.friction_force),
        "residual": list(frame.residual),
    }


def write_frames_jsonl(path: str | Path, trace: MotionTrace) -> None:
    """One JSON object per line, one line per frame."""
    lines = [json.dumps(_frame_dict(f), sort_keys=True) for f in trace.frames]
    _write_lines(path, lines if lines else [""])


def write_frames_csv(path: str | Path, trace: MotionTrace) -> None:
    axes = "xyz"[:trace.dimension]
    groups = [("p", "position"), ("v", "velocity"), ("g", "gravity_force"),
              ("n", "normal_force"), ("f", "friction_force"), ("r", "residual")]
    header = "t," + ",".join(f"{prefix}{ax}" for prefix, _ in groups for ax in axes)
    rows = [header]
    for frame in trace.frames:
        cells = [frame.t]
        for _, name in groups:
            cells.extend(getattr(frame, name))
        rows.append(",".join(fmt(c) for c in cells))
    _write_lines(path, rows)


def trace_summary(trace: MotionTrace) -> dict:
    return {
        "frames": len(trace.frames),
        "fps": float(trace.fps),
        "dimension": trace.dimension,
        "truncated": trace.truncated,
        "warning": trace.warning,
        "meta": trace.meta,
    }
