"""Frame-by-frame force decomposition along a constant-speed trajectory.

The kinematics are exact by construction (position and velocity come from
the geometry evaluated at arc length ``v * t``); what the simulation adds is
the per-frame force split into gravity, contact normal force and Coulomb
friction, plus the Newton residual as a self-check column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ParameterError
from .params import FrictionSpec
from .planar import Ramp2D, normal_force_2d
from .ramp3d import SpaceCurve3D, lambda_3d

_COUNT_EPS = 1e-9  # guards floor() against span*fps landing just under an integer


@dataclass(frozen=True)
class Frame:
    """One sampled instant; vectors are tuples so frames serialize directly."""

    t: float
    position: tuple[float, ...]
    velocity: tuple[float, ...]
    gravity_force: tuple[float, ...]
    normal_force: tuple[float, ...]
    friction_force: tuple[float, ...]
    residual: tuple[float, ...]


@dataclass(frozen=True)
class MotionTrace:
    """Uniform-rate frame sequence for one geometry."""

    frames: Sequence[Frame]
    fps: float
    spec: FrictionSpec
    dimension: int
    truncated: bool = False
    warning: str | None = None
    meta: dict = field(default_factory=dict)


def _frame_times(t_span: tuple[float, float], fps: float) -> np.ndarray:
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (math.isfinite(fps) and fps > 0.0):
        raise ParameterError(f"fps must be positive, got {fps!r}")
    if not (t1 >= t0 >= 0.0):
        raise ParameterError(f"need 0 <= t0 <= t1, got {t_span!r}")
    count = int(math.floor((t1 - t0) * fps + _COUNT_EPS)) + 1
    return t0 + np.arange(count) / fps


def _tuples(array: np.ndarray) -> list[tuple[float, ...]]:
    return [tuple(float(c) for c in row) for row in np.atleast_2d(array)]


def simulate(spec: FrictionSpec, geometry, t_span: tuple[float, float],
             fps: float = 30.0) -> MotionTrace:
    """Sample a block sliding on ``geometry`` at frame rate ``fps``.

    ``geometry`` is a :class:`Ramp2D` or :class:`SpaceCurve3D`.  Frames land
    at ``t0 + k / fps``; the count is ``floor(span * fps) + 1``.  Requests
    running past the integrated span of a space curve are truncated and
    flagged rather than extrapolated.
    """
    t = _frame_times(t_span, fps)
    if isinstance(geometry, Ramp2D):
        return _simulate_2d(spec, geometry, t, fps)
    if isinstance(geometry, SpaceCurve3D):
        return _simulate_3d(spec, geometry, t, fps)
    raise ParameterError(f"cannot simulate on {type(geometry).__name__}",
                         code="config")


def _simulate_2d(spec: FrictionSpec, ramp: Ramp2D, t: np.ndarray,
                 fps: float) -> MotionTrace:
    s = spec.v * t
    lo, hi = ramp.curve.domain
    truncated = False
    warning = None
    keep = s <= hi + 1e-12
    if not np.all(keep):
        truncated = True
        warning = (f"trajectory truncated at s={hi!r}; "
                   f"{int((~keep).sum())} frame(s) dropped")
        t, s = t[keep], s[keep]
    if t.size == 0:
        return MotionTrace(frames=[], fps=fps, spec=spec, dimension=2,
                           truncated=truncated, warning=warning,
                           meta={"branch": ramp.branch.value})

    pos = ramp.curve.position(s)
    tan = ramp.curve.tangent(s)
    vel = spec.v * tan
    lam = np.asarray(normal_force_2d(spec, ramp.branch, t), dtype=float)
    nor = ramp.normal(s)
    gravity = np.broadcast_to(np.array([0.0, -spec.m * spec.g]), pos.shape)
    normal_force = lam[:, None] * nor
    friction = -spec.mu * lam[:, None] * tan
    accel = spec.v * spec.v * ramp.curve.second_derivative(s)
    residual = gravity + normal_force + friction - spec.m * accel

    frames = [Frame(t=float(ti), position=p, velocity=v, gravity_force=g,
                    normal_force=nf, friction_force=ff, residual=r)
              for ti, p, v, g, nf, ff, r in zip(
                  t, _tuples(pos), _tuples(vel), _tuples(gravity),
                  _tuples(normal_force), _tuples(friction), _tuples(residual))]
    return MotionTrace(frames=frames, fps=fps, spec=spec, dimension=2,
                       truncated=truncated, warning=warning,
                       meta={"branch": ramp.branch.value})


def _simulate_3d(spec: FrictionSpec, curve: SpaceCurve3D, t: np.ndarray,
                 fps: float) -> MotionTrace:
    s = spec.v * t
    truncated = False
    warning = None
    keep = s <= curve.s_end + 1e-12
    if not np.all(keep):
        truncated = True
        warning = (f"trajectory truncated at s={curve.s_end!r}; "
                   f"{int((~keep).sum())} frame(s) dropped")
        t, s = t[keep], s[keep]
    if curve.stopped_early and warning is None:
        warning = f"curve itself stopped early: {curve.stop_reason}"
    if t.size == 0:
        return MotionTrace(frames=[], fps=fps, spec=spec, dimension=3,
                           truncated=truncated, warning=warning,
                           meta={"field": curve.field.name})

    pos = curve.position(s)
    gamma = curve.tangent(s)
    vel = spec.v * gamma
    lam = lambda_3d(spec, gamma)
    nor = np.stack([curve.field.eval(y) for y in np.atleast_2d(gamma)])
    gravity = np.broadcast_to(np.array([0.0, 0.0, -spec.m * spec.g]), pos.shape)
    normal_force = lam[:, None] * nor
    speed = np.linalg.norm(vel, axis=-1, keepdims=True)
    friction = -spec.mu * lam[:, None] * vel / speed
    residual = (gravity + normal_force + friction
                - spec.m * spec.v * spec.v * curve.derivative(s))

    frames = [Frame(t=float(ti), position=p, velocity=v, gravity_force=g,
                    normal_force=nf, friction_force=ff, residual=r)
              for ti, p, v, g, nf, ff, r in zip(
                  t, _tuples(pos), _tuples(vel), _tuples(gravity),
                  _tuples(normal_force), _tuples(friction), _tuples(residual))]
    return MotionTrace(frames=frames, fps=fps, spec=spec, dimension=3,
                       truncated=truncated, warning=warning,
                       meta={"field": curve.field.name})
