import dataclasses
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rampforge import (DELTA_MAX, ParameterError, dump_spec, load_spec,
                       make_spec, spec_from_dict, spec_from_mu, spec_to_dict)

angles = st.floats(min_value=1e-3, max_value=DELTA_MAX - 1e-3)
positives = st.floats(min_value=1e-3, max_value=1e3)


def test_make_spec_derived_fields():
    spec = make_spec(0.3, g=9.81, v=2.0, m=1.5)
    assert spec.mu == pytest.approx(math.tan(0.3), rel=1e-15)
    assert spec.a == pytest.approx(9.81 / (4.0 * math.sin(0.3)), rel=1e-15)
    assert spec.delta == 0.3
    assert (spec.g, spec.v, spec.m) == (9.81, 2.0, 1.5)


def test_spec_from_mu_keeps_mu_verbatim():
    spec = spec_from_mu(0.5, v=5.0)
    assert spec.mu == 0.5
    assert spec.delta == math.atan(0.5)
    # same physics as the angle route, up to rounding
    other = make_spec(math.atan(0.5), v=5.0)
    assert spec.a == pytest.approx(other.a, rel=1e-14)


@pytest.mark.parametrize("delta", [0.0, -0.1, DELTA_MAX, math.pi / 2,
                                   math.nan, math.inf])
def test_angle_range_rejected(delta):
    with pytest.raises(ParameterError) as err:
        make_spec(delta)
    assert err.value.code == "angle_range"


@pytest.mark.parametrize("mu", [0.0, -0.5, 1.0, 1.5, math.nan])
def test_mu_range_rejected(mu):
    with pytest.raises(ParameterError) as err:
        spec_from_mu(mu)
    assert err.value.code == "angle_range"


@pytest.mark.parametrize("kwargs", [{"g": 0.0}, {"g": -9.81}, {"v": 0.0},
                                    {"m": -1.0}, {"v": math.nan},
                                    {"m": math.inf}])
def test_magnitudes_rejected(kwargs):
    with pytest.raises(ParameterError) as err:
        make_spec(0.3, **kwargs)
    assert err.value.code == "magnitude"


def test_spec_is_frozen(fig_spec):
    with pytest.raises(dataclasses.FrozenInstanceError):
        fig_spec.v = 10.0


def test_dict_roundtrip(fig_spec):
    data = spec_to_dict(fig_spec)
    back = spec_from_dict(data)
    assert back.delta == fig_spec.delta
    assert back.a == pytest.approx(fig_spec.a, rel=1e-14)
    assert back.mu == pytest.approx(fig_spec.mu, rel=1e-14)


def test_dict_missing_field_rejected(fig_spec):
    data = spec_to_dict(fig_spec)
    del data["v"]
    with pytest.raises(ParameterError) as err:
        spec_from_dict(data)
    assert err.value.code == "config"


def test_dict_inconsistent_derived_rejected(fig_spec):
    data = spec_to_dict(fig_spec)
    data["a"] = data["a"] * 1.5  # hand-edited file with wrong derived value
    with pytest.raises(ParameterError) as err:
        spec_from_dict(data)
    assert err.value.code == "config"


def test_file_roundtrip(tmp_path, fig_spec):
    path = tmp_path / "spec.json"
    dump_spec(fig_spec, path)
    back = load_spec(path)
    assert back.delta == fig_spec.delta
    assert back.v == fig_spec.v


def test_corrupt_file_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParameterError) as err:
        load_spec(path)
    assert err.value.code == "config"


@given(delta=angles, g=positives, v=positives, m=positives)
def test_derived_fields_consistent(delta, g, v, m):
    spec = make_spec(delta, g=g, v=v, m=m)
    assert 0.0 < spec.mu < 1.0
    assert spec.a > 0.0
    assert spec.a * v * v * math.sin(delta) == pytest.approx(g, rel=1e-12)
