"""Friction/speed parameter bundle shared by every geometric construction.

The whole family of constant-speed shapes is controlled by a single friction
angle ``delta`` (kinetic friction coefficient ``mu = tan(delta)``), the block
speed ``v``, gravity ``g`` and the block mass ``m``.  Everything else derives
from the inverse length scale ``a = g / (v**2 * sin(delta))``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

from .errors import ParameterError

DELTA_MAX = math.pi / 4  # keeps mu = tan(delta) below 1

# Relative mismatch of stored derived fields tolerated when loading JSON.
_DERIVED_MISMATCH_TOL = 1e-9


@dataclass(frozen=True)
class FrictionSpec:
    """Validated parameter set.

    Attributes
    ----------
    delta : float
        Friction angle in radians, ``0 < delta < pi/4``.
    mu : float
        Kinetic friction coefficient, ``mu = tan(delta)``.
    g : float
        Gravitational acceleration, m/s^2.
    v : float
        Constant block speed, m/s.
    m : float
        Block mass, kg.
    a : float
        Derived inverse length scale ``g / (v**2 sin(delta))``, 1/m.
    """

    delta: float
    mu: float
    g: float
    v: float
    m: float
    a: float


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ParameterError(f"{name} must be finite and positive, got {value!r}",
                             code="magnitude")
    return value


def make_spec(delta: float, g: float = 9.81, v: float = 1.0, m: float = 1.0) -> FrictionSpec:
    """Build a spec from the friction angle; derived fields are computed here.

    Raises
    ------
    ParameterError
        code ``"angle_range"`` if ``delta`` is outside ``(0, pi/4)``,
        code ``"magnitude"`` if ``g``, ``v`` or ``m`` is not a positive
        finite number.
    """
    delta = float(delta)
    if not math.isfinite(delta) or not 0.0 < delta < DELTA_MAX:
        raise ParameterError(
            f"friction angle must lie strictly inside (0, pi/4), got {delta!r}",
            code="angle_range")
    g = _require_positive("g", g)
    v = _require_positive("v", v)
    m = _require_positive("m", m)
    return FrictionSpec(delta=delta, mu=math.tan(delta), g=g, v=v, m=m,
                        a=g / (v * v * math.sin(delta)))


def spec_from_mu(mu: float, g: float = 9.81, v: float = 1.0, m: float = 1.0) -> FrictionSpec:
    """Build a spec from the friction coefficient, ``mu = tan(delta)``.

    The given ``mu`` is kept verbatim; ``a`` uses the algebraically equal
    ``sin(delta) = mu / sqrt(1 + mu**2)`` so it round-trips without the ulp
    drift of ``tan(atan(mu))``.
    """
    mu = float(mu)
    if not math.isfinite(mu) or not 0.0 < mu < 1.0:
        raise ParameterError(
            f"friction coefficient must lie strictly inside (0, 1), got {mu!r}",
            code="angle_range")
    g = _require_positive("g", g)
    v = _require_positive("v", v)
    m = _require_positive("m", m)
    sin_delta = mu / math.hypot(1.0, mu)
    return FrictionSpec(delta=math.atan(mu), mu=mu, g=g, v=v, m=m,
                        a=g / (v * v * sin_delta))


def spec_to_dict(spec: FrictionSpec) -> dict:
    """Flat JSON-ready mapping, derived fields included for readability."""
    return asdict(spec)


def spec_from_dict(data: dict) -> FrictionSpec:
    """Rebuild a spec from its mapping form.

    Derived fields (``mu``, ``a``) are recomputed from the primary ones; a
    relative mismatch beyond 1e-9 against the stored values is rejected so a
    hand-edited file cannot silently describe inconsistent physics.
    """
    try:
        delta = data["delta"]
        g = data["g"]
        v = data["v"]
        m = data["m"]
    except (KeyError, TypeError) as exc:
        raise ParameterError(f"spec mapping is missing field {exc}", code="config") from exc
    spec = make_spec(delta, g=g, v=v, m=m)
    for name in ("mu", "a"):
        if name in data:
            stored = float(data[name])
            fresh = getattr(spec, name)
            if abs(stored - fresh) > _DERIVED_MISMATCH_TOL * max(1.0, abs(fresh)):
                raise ParameterError(
                    f"stored {name}={stored!r} disagrees with recomputed {fresh!r}",
                    code="config")
    return spec


def dump_spec(spec: FrictionSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec_to_dict(spec), indent=2, sort_keys=True) + "\n")


def load_spec(path: str | Path) -> FrictionSpec:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParameterError(f"spec file {path} is not valid JSON: {exc}", code="config") from exc
    return spec_from_dict(data)
