"""Force-balance verification for planar and spatial ramps.

Everything here reduces to checking Newton's law for the sliding block,

    F_gravity + lambda * n - mu * lambda * beta' / |beta'| = m * beta''

sampled along a motion, together with the contact sign condition
``lambda >= 0`` (a ramp can push, never pull).  The report keeps the normal
and tangential residual components separately so a cancellation in the norm
cannot mask a bad component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .errors import ContractViolationError, ParameterError
from .ode import integrate_fixed
from .params import FrictionSpec, make_spec
from .planar import Ramp2D, default_span, normal_force_2d, tangent_angle_orbit_position
from .ramp3d import E3, RampSurface3D, SpaceCurve3D, TangentField, lambda_3d, scale_ramp

TOL_RESIDUAL_2D = 1e-8   # N, closed-form geometry
TOL_RESIDUAL_3D = 1e-6   # N, integrated geometry
TOL_LAMBDA = 1e-10       # N, slack on the sign condition
_UNIT_TANGENT_TOL = 1e-8


class Verdict(str, Enum):
    VALID = "Valid"
    LAMBDA_NEGATIVE = "LambdaNegative"
    RESIDUAL_EXCEEDED = "ResidualExceeded"


class Feasibility(str, Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class ForceBalanceReport:
    """Outcome of sampling Newton's law along one geometry.

    ``t`` holds the sample times; ``residual_norm`` and ``lambda_profile``
    are aligned with it.  The verdict is ``Valid`` exactly when the minimum
    normal force clears ``-tol_lambda`` and the largest residual norm stays
    within ``tol_residual``.
    """

    verdict: Verdict
    max_residual: float
    max_normal_residual: float
    max_tangential_residual: float
    lambda_min: float
    tol_residual: float
    tol_lambda: float
    t: np.ndarray
    residual_norm: np.ndarray
    lambda_profile: np.ndarray
    meta: dict = field(default_factory=dict)


def _verdict(lambda_min: float, max_residual: float,
             tol_lambda: float, tol_residual: float) -> Verdict:
    if lambda_min < -tol_lambda:
        return Verdict.LAMBDA_NEGATIVE
    if max_residual > tol_residual:
        return Verdict.RESIDUAL_EXCEEDED
    return Verdict.VALID


def verify_2d(spec: FrictionSpec, ramp: Ramp2D,
              t_span: tuple[float, float] | None = None, n_samples: int = 400,
              tol_residual: float = TOL_RESIDUAL_2D,
              tol_lambda: float = TOL_LAMBDA) -> ForceBalanceReport:
    """Check the force balance along a planar ramp branch.

    The normal force comes from the closed-form profile for ``ramp.branch``
    under ``spec``; the acceleration comes from the curve's own second
    derivative.  A mismatch between the spec and the geometry (wrong ``mu``,
    dilated curve verified at the wrong speed) therefore shows up as a
    residual, not as a silently recomputed balance.

    Raises
    ------
    ContractViolationError
        if the curve is not arc-length parametrized or the normal is not a
        unit vector orthogonal to the tangent.
    """
    if t_span is None:
        t_span = (0.0, default_span(spec) / spec.v)
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (t1 > t0 >= 0.0):
        raise ParameterError(f"need 0 <= t0 < t1, got {t_span!r}")
    if n_samples < 2:
        raise ParameterError(f"need at least 2 samples, got {n_samples}")

    t = np.linspace(t0, t1, n_samples)
    s = spec.v * t
    tangents = ramp.curve.tangent(s)
    tangent_norms = np.linalg.norm(tangents, axis=-1)
    if np.max(np.abs(tangent_norms - 1.0)) > _UNIT_TANGENT_TOL:
        raise ContractViolationError(
            "curve tangent is not unit length; verify_2d needs an arc-length "
            "parametrization")
    normals = ramp.normal(s)
    if (np.max(np.abs(np.linalg.norm(normals, axis=-1) - 1.0)) > _UNIT_TANGENT_TOL
            or np.max(np.abs(np.einsum("ij,ij->i", normals, tangents))) > _UNIT_TANGENT_TOL):
        raise ContractViolationError("ramp normal is not a unit vector orthogonal "
                                     "to the tangent")

    lam = np.asarray(normal_force_2d(spec, ramp.branch, t), dtype=float)
    accel = spec.v * spec.v * ramp.curve.second_derivative(s)
    gravity = np.array([0.0, -spec.m * spec.g])
    residual = (gravity[None, :] + lam[:, None] * normals
                - spec.mu * lam[:, None] * tangents - spec.m * accel)

    residual_norm = np.linalg.norm(residual, axis=-1)
    normal_comp = np.abs(np.einsum("ij,ij->i", residual, normals))
    tangential_comp = np.abs(np.einsum("ij,ij->i", residual, tangents))
    lambda_min = float(lam.min())
    max_residual = float(residual_norm.max())
    return ForceBalanceReport(
        verdict=_verdict(lambda_min, max_residual, tol_lambda, tol_residual),
        max_residual=max_residual,
        max_normal_residual=float(normal_comp.max()),
        max_tangential_residual=float(tangential_comp.max()),
        lambda_min=lambda_min,
        tol_residual=tol_residual, tol_lambda=tol_lambda,
        t=t, residual_norm=residual_norm, lambda_profile=lam,
        meta={"dimension": "2d", "branch": ramp.branch.value})


def verify_3d(spec: FrictionSpec, curve: SpaceCurve3D,
              tangent_field: TangentField | None = None, n_samples: int = 400,
              tol_residual: float = TOL_RESIDUAL_3D,
              tol_lambda: float = TOL_LAMBDA) -> ForceBalanceReport:
    """Check the force balance along an integrated space curve.

    The acceleration term uses the derivative samples recorded at
    integration time, while the force side is rebuilt fresh from the stored
    direction samples.  Corrupting either side (rescaled directions, dilated
    curve verified at the original speed) breaks the match.
    """
    if tangent_field is None:
        tangent_field = curve.field
    if curve.s.shape[0] < 2:
        raise ParameterError("curve holds fewer than 2 samples")
    count = min(n_samples, curve.s.shape[0])
    idx = np.unique(np.round(np.linspace(0, curve.s.shape[0] - 1, count)).astype(int))

    gamma = curve.gamma[idx]
    dgamma = curve.dgamma[idx]
    normals = np.stack([tangent_field.eval(y) for y in gamma])
    lam = lambda_3d(spec, gamma)
    gravity = np.array([0.0, 0.0, -spec.m * spec.g])
    residual = (gravity[None, :] + lam[:, None] * normals
                - spec.mu * lam[:, None] * gamma
                - spec.m * spec.v * spec.v * dgamma)

    residual_norm = np.linalg.norm(residual, axis=-1)
    normal_comp = np.abs(np.einsum("ij,ij->i", residual, normals))
    tangential_comp = np.abs(np.einsum("ij,ij->i", residual, gamma))
    lambda_min = float(lam.min())
    max_residual = float(residual_norm.max())
    return ForceBalanceReport(
        verdict=_verdict(lambda_min, max_residual, tol_lambda, tol_residual),
        max_residual=max_residual,
        max_normal_residual=float(normal_comp.max()),
        max_tangential_residual=float(tangential_comp.max()),
        lambda_min=lambda_min,
        tol_residual=tol_residual, tol_lambda=tol_lambda,
        t=curve.s[idx] / spec.v, residual_norm=residual_norm, lambda_profile=lam,
        meta={"dimension": "3d", "field": tangent_field.name,
              "max_gamma3": float(curve.gamma[:, 2].max()),
              "norm_drift_total": curve.norm_drift_total,
              "stopped_early": curve.stopped_early})


def planar_reduction_check(spec: FrictionSpec, curve: SpaceCurve3D) -> dict:
    """Compare an upslope-field space curve against the planar closed form.

    Upslope trajectories never leave the vertical plane through the start
    direction, so the integrated curve must coincide with the closed-form
    planar solution embedded in that plane.  Returns ``{"applicable": False}``
    for other fields; otherwise reports the largest position deviation.
    """
    if curve.field.name != "upslope":
        return {"applicable": False, "reason": f"field {curve.field.name!r} "
                "has no planar closed form"}
    y0 = curve.gamma[0]
    horizontal = math.hypot(float(y0[0]), float(y0[1]))
    if horizontal < 1e-12:
        return {"applicable": False, "reason": "start direction is vertical"}
    u = np.array([y0[0] / horizontal, y0[1] / horizontal, 0.0])
    theta0 = math.atan2(float(y0[2]), horizontal)
    reference = tangent_angle_orbit_position(spec, theta0, curve.s)
    embedded = reference[:, 0, None] * u + reference[:, 1, None] * E3
    deviation = float(np.linalg.norm(curve.alpha - embedded, axis=-1).max())
    return {"applicable": True, "max_deviation": deviation, "theta0": theta0}


@dataclass(frozen=True)
class Motion:
    """Reparametrization ``t -> h(t)`` of a ramp curve with its derivatives."""

    h: Callable[[np.ndarray], np.ndarray]
    h_dot: Callable[[np.ndarray], np.ndarray]
    h_ddot: Callable[[np.ndarray], np.ndarray]

    @staticmethod
    def static(param: float) -> "Motion":
        """Block parked at a fixed curve parameter."""
        return Motion(h=lambda t: np.full_like(np.asarray(t, dtype=float), param),
                      h_dot=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                      h_ddot=lambda t: np.zeros_like(np.asarray(t, dtype=float)))

    @staticmethod
    def constant_rate(rate: float, start: float = 0.0) -> "Motion":
        """Curve parameter advancing linearly in time."""
        return Motion(h=lambda t: start + rate * np.asarray(t, dtype=float),
                      h_dot=lambda t: np.full_like(np.asarray(t, dtype=float), rate),
                      h_ddot=lambda t: np.zeros_like(np.asarray(t, dtype=float)))

    @staticmethod
    def constant_speed(ramp: Ramp2D, speed: float, start: float,
                       t_span: tuple[float, float], grid: int = 2048) -> "Motion":
        """Motion traversing ``ramp`` at constant metric speed.

        The parameter history solves ``h' = speed / |curve'(h)|``; it is
        integrated once over ``t_span`` and interpolated, while both
        derivatives are evaluated from the curve analytically.
        """
        curve = ramp.curve

        def speed_of(u):
            return np.linalg.norm(curve.tangent(np.asarray(u, dtype=float)), axis=-1)

        def rhs(_t, u):
            return speed / speed_of(u)

        t0, t1 = float(t_span[0]), float(t_span[1])
        ts, hs = integrate_fixed(rhs, float(start), t0, t1, (t1 - t0) / grid)
        step = ts[1] - ts[0]

        def h(t):
            t = np.asarray(t, dtype=float)
            i = np.clip((t - t0) // step, 0, len(ts) - 2).astype(int)
            u = (t - ts[i]) / step
            d0 = speed / speed_of(hs[i])
            d1 = speed / speed_of(hs[i + 1])
            u2, u3 = u * u, u * u * u
            return ((2 * u3 - 3 * u2 + 1) * hs[i] + (u3 - 2 * u2 + u) * step * d0
                    + (-2 * u3 + 3 * u2) * hs[i + 1] + (u3 - u2) * step * d1)

        def h_dot(t):
            return speed / speed_of(h(t))

        def h_ddot(t):
            u = h(t)
            g1 = curve.tangent(u)
            g2 = curve.second_derivative(u)
            norm2 = np.einsum("...i,...i->...", g1, g1)
            return -speed * speed * np.einsum("...i,...i->...", g1, g2) / (norm2 * norm2)

        return Motion(h=h, h_dot=h_dot, h_ddot=h_ddot)


@dataclass(frozen=True)
class FeasibilityReport:
    """Sign profile of the normal force a prescribed motion would require."""

    verdict: Feasibility
    lambda_min: float
    friction_consistency_max: float
    tol: float
    t: np.ndarray
    lambda_required: np.ndarray
    meta: dict = field(default_factory=dict)


def normal_sign_diagnostic(ramp: Ramp2D, force, mass: float, motion: Motion,
                           t_span: tuple[float, float], n_samples: int = 200,
                           mu: float = 0.0, tol: float = 1e-9) -> FeasibilityReport:
    """Recover the normal force a motion on a ramp would require and test its sign.

    Projecting ``m beta'' - F`` on the ramp normal isolates lambda without
    assuming the balance holds; any sample with ``lambda < -tol`` makes the
    configuration infeasible (the ramp would have to pull).  The tangential
    projection is returned separately as a friction consistency error; it
    vanishes only if the motion is dynamically possible at friction ``mu``.

    ``force`` is a constant vector or a callable mapping positions of shape
    ``(n, 2)`` to forces of the same shape.  The ramp curve may carry any
    regular parametrization here, not just arc length.
    """
    t = np.linspace(float(t_span[0]), float(t_span[1]), n_samples)
    u = np.asarray(motion.h(t), dtype=float)
    du = np.asarray(motion.h_dot(t), dtype=float)
    ddu = np.asarray(motion.h_ddot(t), dtype=float)

    g1 = ramp.curve.tangent(u)
    g2 = ramp.curve.second_derivative(u)
    normals = ramp.normal(u)
    beta_ddot = ddu[:, None] * g1 + (du * du)[:, None] * g2

    if callable(force):
        f = np.asarray(force(ramp.curve.position(u)), dtype=float)
    else:
        f = np.broadcast_to(np.asarray(force, dtype=float), (n_samples, 2))
    need = mass * beta_ddot - f
    lam = np.einsum("ij,ij->i", need, normals)

    direction = np.sign(du)[:, None] * g1 / np.linalg.norm(g1, axis=-1, keepdims=True)
    consistency = np.abs(np.einsum("ij,ij->i", need, direction) + mu * lam)

    lambda_min = float(lam.min())
    verdict = Feasibility.FEASIBLE if lambda_min >= -tol else Feasibility.INFEASIBLE
    return FeasibilityReport(verdict=verdict, lambda_min=lambda_min,
                             friction_consistency_max=float(consistency.max()),
                             tol=tol, t=t, lambda_required=lam,
                             meta={"mu": mu, "branch": ramp.branch.value})


@dataclass(frozen=True)
class ScalingVerification:
    """Both reinterpretations of a dilated geometry, verified independently."""

    kappa: float
    speed_spec: FrictionSpec
    gravity_spec: FrictionSpec
    speed_report: ForceBalanceReport
    gravity_report: ForceBalanceReport

    @property
    def both_valid(self) -> bool:
        return (self.speed_report.verdict is Verdict.VALID
                and self.gravity_report.verdict is Verdict.VALID)


def verify_scaling(spec: FrictionSpec, geometry, kappa: float,
                   n_samples: int = 400) -> ScalingVerification:
    """Dilate ``geometry`` by ``kappa`` and verify both equivalent readings.

    The dilated shape must balance for speed ``sqrt(kappa) * v`` at gravity
    ``g`` and for speed ``v`` at gravity ``g / kappa`` (same friction angle,
    same mass).  Works for planar ramps, space curves and surfaces (their
    base curve).
    """
    if isinstance(geometry, RampSurface3D):
        geometry = geometry.base
    scaled = scale_ramp(geometry, kappa)
    speed_spec = make_spec(spec.delta, g=spec.g, v=math.sqrt(kappa) * spec.v, m=spec.m)
    gravity_spec = make_spec(spec.delta, g=spec.g / kappa, v=spec.v, m=spec.m)
    if isinstance(scaled, Ramp2D):
        speed_report = verify_2d(speed_spec, scaled, n_samples=n_samples)
        gravity_report = verify_2d(gravity_spec, scaled, n_samples=n_samples)
    elif isinstance(scaled, SpaceCurve3D):
        speed_report = verify_3d(speed_spec, scaled, n_samples=n_samples)
        gravity_report = verify_3d(gravity_spec, scaled, n_samples=n_samples)
    else:
        raise ParameterError(f"cannot verify scaling of {type(geometry).__name__}",
                             code="config")
    return ScalingVerification(kappa=float(kappa), speed_spec=speed_spec,
                               gravity_spec=gravity_spec,
                               speed_report=speed_report, gravity_report=gravity_report)
