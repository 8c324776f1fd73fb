"""Constant-speed ramps in space via tangent flows on the unit sphere.

A unit-speed motion direction lives on the south hemisphere ``y3 <= 0``.
Prescribing the contact normal as a tangent field ``N`` on that hemisphere,
the constant-speed condition forces the direction to evolve along

    X(y) = -(g / v**2) * (e3T(y) + (y3 / mu) * N(y)),   e3T(y) = e3 - (e3.y) y

with normal force per unit mass ``lambda(y) = -(g / mu) * y3``.  Integrating
the flow once gives the direction curve ``gamma``; integrating ``gamma``
again gives the space curve ``alpha`` the block travels, and sweeping the
ruling ``alpha' x N`` along it gives a developable strip to build the ramp
from.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import ContractViolationError, ParameterError, SingularFieldError
from .ode import DEFAULT_STEP_FACTOR, IntegratorConfig
from .params import FrictionSpec
from .planar import PlanarCurve, Ramp2D

log = logging.getLogger(__name__)

E3 = np.array([0.0, 0.0, 1.0])

SINGULAR_TOL = 1e-8       # distance to a field's singular set that stops evaluation
HEMISPHERE_NORM_TOL = 1e-10
HEMISPHERE_HEIGHT_TOL = 1e-12
FIELD_CHECK_TOL = 1e-8    # unit-norm/tangency slack allowed of a field at the start


def hemisphere_point(y) -> np.ndarray:
    """Validate and return a direction on the closed south hemisphere."""
    y = np.asarray(y, dtype=float)
    if y.shape != (3,) or not np.all(np.isfinite(y)):
        raise ParameterError(f"hemisphere point must be 3 finite components, got {y!r}",
                             code="hemisphere")
    if abs(float(np.linalg.norm(y)) - 1.0) > HEMISPHERE_NORM_TOL:
        raise ParameterError(f"direction {y.tolist()} is not unit length",
                             code="hemisphere")
    if y[2] > HEMISPHERE_HEIGHT_TOL:
        raise ParameterError(
            f"direction {y.tolist()} points upward (y3 > 0); the block cannot "
            "gain height at constant speed", code="hemisphere")
    return y


def e3_tangential(y: np.ndarray) -> np.ndarray:
    """Component of gravity direction tangent to the sphere at ``y``."""
    y = np.asarray(y, dtype=float)
    return E3 - y[..., 2, None] * y


@dataclass(frozen=True)
class TangentField:
    """Unit tangent field on the hemisphere: ``eval(y)`` with ``N.y = 0``.

    ``eval`` must raise :class:`SingularFieldError` within ``SINGULAR_TOL``
    of the field's singular set.  ``singular_set`` is a human-readable
    description used in diagnostics.
    """

    name: str
    eval: Callable[[np.ndarray], np.ndarray]
    singular_set: str = "none"

    def __call__(self, y: np.ndarray) -> np.ndarray:
        return self.eval(y)


def _normalized_or_singular(w: np.ndarray, y: np.ndarray, name: str) -> np.ndarray:
    n = float(np.linalg.norm(w))
    if n < SINGULAR_TOL:
        raise SingularFieldError(
            f"field {name!r} is singular at {np.asarray(y).tolist()}", point=y)
    return w / n


def _upslope_eval(y: np.ndarray) -> np.ndarray:
    return _normalized_or_singular(e3_tangential(y), y, "upslope")


def _horizontal_eval(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    w = np.array([y[1], -y[0], 0.0])  # y x e3
    return _normalized_or_singular(w, y, "horizontal")


def builtin_field(kind: str, weight: float | None = None) -> TangentField:
    """Named fields: ``"upslope"``, ``"horizontal"``, ``"blend"`` (with weight).

    Upslope points against the tangential gravity pull (steepest ascent on
    the contact plane), horizontal is level and makes the ramp spiral, blend
    is the normalized mix ``w*upslope + (1-w)*horizontal``.  All three are
    singular exactly at the south pole.
    """
    kind = kind.lower()
    if kind == "upslope":
        if weight is not None:
            raise ParameterError("upslope takes no weight", code="config")
        return TangentField(name="upslope", eval=_upslope_eval,
                            singular_set="south pole (0, 0, -1)")
    if kind == "horizontal":
        if weight is not None:
            raise ParameterError("horizontal takes no weight", code="config")
        return TangentField(name="horizontal", eval=_horizontal_eval,
                            singular_set="south pole (0, 0, -1)")
    if kind == "blend":
        if weight is None or not (math.isfinite(weight) and 0.0 <= weight <= 1.0):
            raise ParameterError(f"blend weight must lie in [0, 1], got {weight!r}",
                                 code="config")
        w = float(weight)

        def _blend_eval(y: np.ndarray) -> np.ndarray:
            mix = w * _upslope_eval(y) + (1.0 - w) * _horizontal_eval(y)
            return _normalized_or_singular(mix, y, f"blend:{w}")

        return TangentField(name=f"blend:{w!r}", eval=_blend_eval,
                            singular_set="south pole (0, 0, -1)")
    raise ParameterError(f"unknown field kind {kind!r}", code="config")


def field_x(spec: FrictionSpec, tangent_field: TangentField, y: np.ndarray) -> np.ndarray:
    """Flow direction of the motion-direction curve at ``y``."""
    y = np.asarray(y, dtype=float)
    return -(spec.g / (spec.v * spec.v)) * (
        e3_tangential(y) + (y[2] / spec.mu) * tangent_field.eval(y))


def lambda_3d(spec: FrictionSpec, y) -> np.ndarray:
    """Contact force magnitude ``-m g y3 / mu`` for direction(s) ``y``, N."""
    y = np.asarray(y, dtype=float)
    return -(spec.m * spec.g / spec.mu) * y[..., 2]


def cumulative_simpson(values: np.ndarray, step: float) -> np.ndarray:
    """Cumulative integral of uniformly spaced samples, fourth-order accurate.

    Even-index nodes accumulate the composite Simpson pair rule (exact
    through cubics); odd-index nodes ride the same rule shifted by one,
    seeded with the three-point Newton-Cotes value for the first interval
    (local error ``O(step**4)``).
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    out = np.zeros_like(values)
    if n == 1:
        return out
    if n == 2:
        out[1] = 0.5 * step * (values[0] + values[1])
        return out
    out[1] = step * (5.0 * values[0] + 8.0 * values[1] - values[2]) / 12.0
    # pair-rule increments from k-2 to k, accumulated separately per parity
    inc = step * (values[:-2] + 4.0 * values[1:-1] + values[2:]) / 3.0
    out[2::2] = np.cumsum(inc[0::2], axis=0)
    out[3::2] = out[1] + np.cumsum(inc[1::2], axis=0)
    return out


@dataclass(frozen=True)
class SpaceCurve3D:
    """Sampled output of the hemisphere flow on a uniform grid.

    ``gamma[i]`` is the unit motion direction at arc length ``s[i]``,
    ``dgamma[i]`` the flow right-hand side recorded at that sample, and
    ``alpha[i]`` the integrated position.  ``norm_drift_total`` accumulates
    the per-step departure of ``|gamma|`` from 1 before renormalization.
    """

    s: np.ndarray
    gamma: np.ndarray
    dgamma: np.ndarray
    alpha: np.ndarray
    field: TangentField
    norm_drift_total: float
    norm_drift_max: float
    stopped_early: bool = False
    stop_reason: str | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def s_end(self) -> float:
        return float(self.s[-1])

    @property
    def step(self) -> float:
        return float(self.s[1] - self.s[0]) if self.s.shape[0] > 1 else 0.0

    def _locate(self, s) -> tuple[np.ndarray, np.ndarray]:
        s = np.asarray(s, dtype=float)
        if np.any(s < self.s[0] - 1e-12) or np.any(s > self.s[-1] + 1e-12):
            raise ParameterError(
                f"parameter outside the integrated span [0, {self.s_end!r}]",
                code="magnitude")
        h = self.step
        idx = np.clip((s - self.s[0]) // h, 0, self.s.shape[0] - 2).astype(int)
        u = (s - self.s[idx]) / h
        return idx, u

    def _hermite(self, nodes: np.ndarray, derivs: np.ndarray, s) -> np.ndarray:
        idx, u = self._locate(s)
        h = self.step
        u = u[..., None]
        u2 = u * u
        u3 = u2 * u
        p0, p1 = nodes[idx], nodes[idx + 1]
        m0, m1 = derivs[idx], derivs[idx + 1]
        return ((2.0 * u3 - 3.0 * u2 + 1.0) * p0 + (u3 - 2.0 * u2 + u) * h * m0
                + (-2.0 * u3 + 3.0 * u2) * p1 + (u3 - u2) * h * m1)

    def position(self, s) -> np.ndarray:
        """Cubic Hermite interpolation of ``alpha`` (derivative ``gamma``)."""
        return self._hermite(self.alpha, self.gamma, s)

    def tangent(self, s) -> np.ndarray:
        """Cubic Hermite interpolation of ``gamma`` (derivative ``dgamma``)."""
        return self._hermite(self.gamma, self.dgamma, s)

    def derivative(self, s) -> np.ndarray:
        """Quadratic interpolation of the recorded flow derivative."""
        if self.s.shape[0] < 3:
            idx, u = self._locate(s)
            u = u[..., None]
            return (1.0 - u) * self.dgamma[idx] + u * self.dgamma[idx + 1]
        s = np.asarray(s, dtype=float)
        h = self.step
        j = np.clip(np.rint((s - self.s[0]) / h), 1, self.s.shape[0] - 2).astype(int)
        tau = ((s - self.s[j]) / h)[..., None]
        return (0.5 * tau * (tau - 1.0) * self.dgamma[j - 1]
                + (1.0 - tau * tau) * self.dgamma[j]
                + 0.5 * tau * (tau + 1.0) * self.dgamma[j + 1])


def integrate_ramp3d(spec: FrictionSpec, tangent_field: TangentField, y0,
                     s_max: float, config: IntegratorConfig | None = None) -> SpaceCurve3D:
    """Integrate the hemisphere flow from ``y0`` over ``[0, s_max]``.

    Fixed-step RK4 with renormalization onto the sphere after every step;
    the accumulated drift is recorded.  If the trajectory enters a field's
    singular set the run stops early with the partial curve and a reason
    instead of raising, except when the start itself is singular.

    Parameters
    ----------
    y0 : array-like
        Unit direction with ``y0[2] <= 0`` (validated).
    s_max : float
        Arc length to integrate; the grid is uniform with approximately the
        configured step.
    """
    y0 = hemisphere_point(y0)
    if not (math.isfinite(s_max) and s_max > 0.0):
        raise ParameterError(f"s_max must be positive, got {s_max!r}")
    if config is None:
        config = IntegratorConfig(step=DEFAULT_STEP_FACTOR / spec.a)
    if config.method != "rk4":
        raise ParameterError("the hemisphere flow uses the fixed-step rk4 method",
                             code="config")

    n0 = tangent_field.eval(y0)  # singular start raises here
    if (abs(float(np.linalg.norm(n0)) - 1.0) > FIELD_CHECK_TOL
            or abs(float(np.dot(n0, y0))) > FIELD_CHECK_TOL):
        raise ContractViolationError(
            f"field {tangent_field.name!r} does not return a unit tangent at {y0.tolist()}")

    n_steps = max(1, math.ceil(s_max / config.step - 1e-12))
    h = s_max / n_steps
    gamma = np.empty((n_steps + 1, 3))
    dgamma = np.empty((n_steps + 1, 3))
    gamma[0] = y0

    drift_total = 0.0
    drift_max = 0.0
    stopped_early = False
    stop_reason = None
    last = n_steps
    y = y0
    for i in range(n_steps):
        try:
            k1 = field_x(spec, tangent_field, y)
            dgamma[i] = k1
            k2 = field_x(spec, tangent_field, y + 0.5 * h * k1)
            k3 = field_x(spec, tangent_field, y + 0.5 * h * k2)
            k4 = field_x(spec, tangent_field, y + h * k3)
        except SingularFieldError as exc:
            stopped_early = True
            stop_reason = str(exc)
            last = i
            break
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        norm = float(np.linalg.norm(y))
        drift = abs(norm - 1.0)
        drift_total += drift
        drift_max = max(drift_max, drift)
        y = y / norm
        gamma[i + 1] = y
    if not stopped_early:
        try:
            dgamma[n_steps] = field_x(spec, tangent_field, y)
        except SingularFieldError as exc:
            stopped_early = True
            stop_reason = str(exc)
            last = n_steps - 1

    if stopped_early:
        gamma = gamma[:last + 1]
        dgamma = dgamma[:last + 1]
        log.warning("flow stopped early at s=%s: %s", last * h, stop_reason)
    s = h * np.arange(gamma.shape[0])
    alpha = cumulative_simpson(gamma, h)
    log.debug("integrated %d steps, norm drift total=%.3e max=%.3e",
              gamma.shape[0] - 1, drift_total, drift_max)
    return SpaceCurve3D(s=s, gamma=gamma, dgamma=dgamma, alpha=alpha,
                        field=tangent_field, norm_drift_total=drift_total,
                        norm_drift_max=drift_max, stopped_early=stopped_early,
                        stop_reason=stop_reason)


@dataclass(frozen=True)
class RampSurface3D:
    """Ruled strip swept along a space curve.

    Vertices are laid out row-major in ``(s, r)``: ``vertices[i, j]`` sits at
    parameter ``(s_grid[i], r_grid[j])``.  ``vertex_normals[i]`` is the
    contact normal ``N(gamma(s_i))``, constant along each ruling.
    """

    base: SpaceCurve3D
    s_grid: np.ndarray
    r_grid: np.ndarray
    vertices: np.ndarray
    vertex_normals: np.ndarray
    ruling: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def resolution(self) -> tuple[int, int]:
        return self.s_grid.shape[0] - 1, self.r_grid.shape[0] - 1


def _ruling_grid(r_extent: tuple[float, float], n_r: int) -> np.ndarray:
    # grid across the strip that contains r = 0 exactly
    r_min, r_max = float(r_extent[0]), float(r_extent[1])
    if not (r_min <= 0.0 <= r_max) or r_min == r_max:
        raise ParameterError(
            f"r_extent must straddle 0 with r_min < r_max, got {r_extent!r}")
    if r_min == 0.0:
        return np.linspace(0.0, r_max, n_r + 1)
    if r_max == 0.0:
        return np.linspace(r_min, 0.0, n_r + 1)
    n_neg = int(round(n_r * (-r_min) / (r_max - r_min)))
    n_neg = min(max(n_neg, 1), n_r - 1)
    return np.concatenate([np.linspace(r_min, 0.0, n_neg + 1)[:-1],
                           np.linspace(0.0, r_max, n_r - n_neg + 1)])


def build_surface(curve: SpaceCurve3D, tangent_field: TangentField,
                  r_extent: tuple[float, float] = (-0.5, 0.5),
                  resolution: tuple[int, int] = (200, 16)) -> RampSurface3D:
    """Sweep the ruling ``gamma x N(gamma)`` along the curve.

    The ruling is orthogonal to both the motion direction and the contact
    normal, so the strip contains the trajectory (its ``r = 0`` row) and
    touches the block along it with normal ``N``.
    """
    n_s, n_r = int(resolution[0]), int(resolution[1])
    if n_s < 1 or n_r < 1:
        raise ParameterError(f"resolution must be at least (1, 1), got {resolution!r}")
    s_grid = np.linspace(0.0, curve.s_end, n_s + 1)
    r_grid = _ruling_grid(r_extent, n_r)

    positions = curve.position(s_grid)
    tangents = curve.tangent(s_grid)
    tangents = tangents / np.linalg.norm(tangents, axis=-1, keepdims=True)
    normals = np.stack([tangent_field.eval(t) for t in tangents])
    ruling = np.cross(tangents, normals)
    ruling = ruling / np.linalg.norm(ruling, axis=-1, keepdims=True)

    vertices = positions[:, None, :] + r_grid[None, :, None] * ruling[:, None, :]
    return RampSurface3D(base=curve, s_grid=s_grid, r_grid=r_grid,
                         vertices=vertices, vertex_normals=normals, ruling=ruling)


def _scale_ramp2d(ramp: Ramp2D, kappa: float) -> Ramp2D:
    inner = ramp.curve

    def position(s):
        return kappa * inner.position(np.asarray(s, dtype=float) / kappa)

    def tangent(s):
        return inner.tangent(np.asarray(s, dtype=float) / kappa)

    def second_derivative(s):
        return inner.second_derivative(np.asarray(s, dtype=float) / kappa) / kappa

    def normal(s):
        return ramp.normal(np.asarray(s, dtype=float) / kappa)

    lo, hi = inner.domain
    curve = PlanarCurve(position=position, tangent=tangent,
                        second_derivative=second_derivative,
                        domain=(kappa * lo, kappa * hi))
    meta = dict(ramp.metadata)
    meta["scaled_by"] = kappa * meta.get("scaled_by", 1.0)
    meta["equivalent_specs"] = _scale_notes(meta["scaled_by"])
    return Ramp2D(curve=curve, normal=normal, branch=ramp.branch, metadata=meta)


def _scale_notes(kappa: float) -> dict:
    # the two reinterpretations under which the dilated geometry stays valid
    return {"speed_factor": math.sqrt(kappa), "gravity_factor": 1.0 / kappa}


def scale_ramp(geometry, kappa: float):
    """Dilate a ramp geometry by ``kappa`` about the origin.

    The dilated geometry is again a constant-speed ramp for speed
    ``sqrt(kappa) * v`` at unchanged gravity, or equivalently for unchanged
    speed at gravity ``g / kappa``; both reinterpretations are recorded in
    the metadata.  Accepts :class:`Ramp2D`, :class:`SpaceCurve3D` and
    :class:`RampSurface3D`.
    """
    kappa = float(kappa)
    if not (math.isfinite(kappa) and kappa > 0.0):
        raise ParameterError(f"scale factor must be positive, got {kappa!r}")
    if isinstance(geometry, Ramp2D):
        return _scale_ramp2d(geometry, kappa)
    if isinstance(geometry, SpaceCurve3D):
        meta = dict(geometry.metadata)
        meta["scaled_by"] = kappa * meta.get("scaled_by", 1.0)
        meta["equivalent_specs"] = _scale_notes(meta["scaled_by"])
        return replace(geometry, s=kappa * geometry.s, alpha=kappa * geometry.alpha,
                       dgamma=geometry.dgamma / kappa, metadata=meta)
    if isinstance(geometry, RampSurface3D):
        meta = dict(geometry.metadata)
        meta["scaled_by"] = kappa * meta.get("scaled_by", 1.0)
        meta["equivalent_specs"] = _scale_notes(meta["scaled_by"])
        return RampSurface3D(base=scale_ramp(geometry.base, kappa),
                             s_grid=kappa * geometry.s_grid,
                             r_grid=kappa * geometry.r_grid,
                             vertices=kappa * geometry.vertices,
                             vertex_normals=geometry.vertex_normals,
                             ruling=geometry.ruling, metadata=meta)
    raise ParameterError(f"cannot scale object of type {type(geometry).__name__}",
                         code="config")
