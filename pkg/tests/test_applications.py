from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.constants import c, hbar

from omcascade.applications import (
    DM_DENSITY_DEFAULT,
    DM_VELOCITY_DEFAULT,
    GRAVITATIONAL_CONSTANT,
    LHC_BEAM_POWER,
    PRESET_NAMES,
    DmModel,
    OscillatorSpec,
    dm_steady_amplitude,
    evaluate_preset,
    gw_tidal_scale,
    lhc_acceleration,
    lhc_steady_amplitude,
    preset,
)
from omcascade.chain import ConfigError

MILLIGRAM_SENSOR = OscillatorSpec(mass=1e-6, omega_m=2.0 * math.pi * 1e3, damping_ratio=1e-6)


def test_scenario_constants_are_pinned():
    assert GRAVITATIONAL_CONSTANT == 6.674e-11
    assert DM_DENSITY_DEFAULT == 5.3e-22
    assert DM_VELOCITY_DEFAULT == 1e5
    assert LHC_BEAM_POWER == 3.8e12


def test_zero_point_scale():
    assert MILLIGRAM_SENSOR.zero_point_scale == pytest.approx(9.160794660503e-17, rel=1e-12)


def test_oscillator_validation():
    for bad in (
        dict(mass=0.0, omega_m=1.0, damping_ratio=1e-6),
        dict(mass=1.0, omega_m=-2.0, damping_ratio=1e-6),
        dict(mass=1.0, omega_m=1.0, damping_ratio=0.0),
    ):
        with pytest.raises(ConfigError):
            OscillatorSpec(**bad)


# ---------------------------------------------------------------------------
# dark-matter wind


def test_dm_steady_state_reference_numbers():
    model = DmModel(coupling=1.0, mass_chi=1e-37)
    state = dm_steady_amplitude(model, MILLIGRAM_SENSOR)
    assert state.q_amp == pytest.approx(0.0732745210985, rel=1e-12)
    assert state.displacement == pytest.approx(6.712528416305e-18, rel=1e-12)
    assert state.omega_chi == pytest.approx(8.522465361751e13, rel=1e-12)
    assert state.lambda_chi == pytest.approx(0.0662607015, rel=1e-12)
    assert state.t_coherence == pytest.approx(7.372497323813e-7, rel=1e-12)
    assert state.theta_per_coupling == pytest.approx(1.382538133935e20, rel=1e-12)


def test_dm_internal_identities():
    model = DmModel(coupling=0.25, mass_chi=3e-37, velocity=2e5)
    state = dm_steady_amplitude(model, MILLIGRAM_SENSOR)
    # de Broglie wavelength times m v is Planck's constant
    assert state.lambda_chi * model.mass_chi * model.velocity == pytest.approx(
        2.0 * math.pi * hbar, rel=1e-15
    )
    # the chain-rule factor ties q_amp back to the drive strength
    assert state.theta_per_coupling == pytest.approx(
        state.q_amp / (model.coupling * model.density), rel=1e-12
    )
    # coherence time holds 1e7 field cycles
    assert state.t_coherence * state.omega_chi == pytest.approx(2.0 * math.pi * 1e7)
    assert state.omega_chi == pytest.approx(model.mass_chi * c**2 / hbar, rel=1e-15)


@settings(max_examples=40, deadline=None)
@given(
    coupling=st.floats(min_value=1e-6, max_value=1e6),
    scale=st.floats(min_value=1e-3, max_value=1e3),
)
def test_dm_amplitude_is_linear_in_drive(coupling, scale):
    base = dm_steady_amplitude(DmModel(coupling=1.0, mass_chi=1e-37), MILLIGRAM_SENSOR)
    scaled = dm_steady_amplitude(
        DmModel(coupling=coupling, mass_chi=1e-37, density=scale * DM_DENSITY_DEFAULT),
        MILLIGRAM_SENSOR,
    )
    assert scaled.q_amp == pytest.approx(coupling * scale * base.q_amp, rel=1e-12)
    # the conversion factor ignores the drive entirely
    assert scaled.theta_per_coupling == base.theta_per_coupling


def test_dm_model_validation():
    with pytest.raises(ConfigError):
        DmModel(coupling=1.0, mass_chi=0.0)
    with pytest.raises(ConfigError):
        DmModel(coupling=1.0, mass_chi=1e-37, density=-1.0)
    with pytest.raises(ConfigError):
        DmModel(coupling=1.0, mass_chi=1e-37, velocity=0.0)


# ---------------------------------------------------------------------------
# storage-ring beam gravity


def test_lhc_acceleration_value():
    a0 = lhc_acceleration(LHC_BEAM_POWER, 1.0)
    assert a0 == pytest.approx(1.128725624063e-14, rel=1e-12)
    assert a0 == pytest.approx(4.0 * GRAVITATIONAL_CONSTANT * LHC_BEAM_POWER / c**2, rel=1e-15)
    with pytest.raises(ConfigError):
        lhc_acceleration(LHC_BEAM_POWER, 0.0)


def test_lhc_steady_state_reference_numbers():
    state = lhc_steady_amplitude(lhc_acceleration(LHC_BEAM_POWER, 1.0), MILLIGRAM_SENSOR)
    assert state.displacement == pytest.approx(1.429547702969e-16, rel=1e-12)
    assert state.q_amp == pytest.approx(1.560506218017, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    power=st.floats(min_value=1e6, max_value=1e14),
    distance=st.floats(min_value=1e-2, max_value=1e3),
)
def test_lhc_amplitude_scales_with_power_over_distance(power, distance):
    ref = lhc_steady_amplitude(lhc_acceleration(1e12, 1.0), MILLIGRAM_SENSOR)
    got = lhc_steady_amplitude(lhc_acceleration(power, distance), MILLIGRAM_SENSOR)
    assert got.q_amp == pytest.approx(ref.q_amp * (power / 1e12) / distance, rel=1e-12)


# ---------------------------------------------------------------------------
# continuous gravitational waves


def test_gw_tidal_scale_value():
    omega = 2.0 * math.pi * 1e3
    scale = gw_tidal_scale(omega, 1e-22)
    assert scale == pytest.approx(1.973920880218e-15, rel=1e-12)
    assert scale == 0.5 * omega**2 * 1e-22


@settings(max_examples=40, deadline=None)
@given(
    strain=st.floats(min_value=1e-26, max_value=1e-18),
    ratio=st.floats(min_value=0.1, max_value=10.0),
)
def test_gw_tidal_scale_quadratic_in_frequency(strain, ratio):
    base = gw_tidal_scale(1e3, strain)
    assert gw_tidal_scale(ratio * 1e3, strain) == pytest.approx(ratio**2 * base, rel=1e-12)


def test_gw_rejects_negative_strain():
    with pytest.raises(ConfigError):
        gw_tidal_scale(1e3, -1e-22)


# ---------------------------------------------------------------------------
# presets


def test_preset_names_and_unknown():
    assert PRESET_NAMES == ("dm", "gw", "lhc")
    with pytest.raises(ConfigError) as exc_info:
        preset("axion")
    assert exc_info.value.key == "preset"


def test_preset_overrides_merge_oscillator():
    cfg = preset("lhc", {"distance": 2.0, "oscillator": {"mass": 2e-6}})
    assert cfg["distance"] == 2.0
    assert cfg["oscillator"]["mass"] == 2e-6
    # untouched oscillator entries survive the merge
    assert cfg["oscillator"]["damping_ratio"] == 1e-6
    # and the stored defaults are not mutated
    assert preset("lhc")["distance"] == 1.0
    assert preset("lhc")["oscillator"]["mass"] == 1e-6


def test_evaluate_preset_dm_keys():
    out = evaluate_preset("dm")
    assert out["scenario"] == "dm"
    assert out["q_amp"] == pytest.approx(0.0732745210985, rel=1e-12)
    assert set(out) == {
        "scenario",
        "q_amp",
        "displacement_m",
        "omega_chi",
        "lambda_chi_m",
        "t_coherence_s",
        "theta_per_coupling",
    }


def test_evaluate_preset_lhc_metadata_and_override():
    out = evaluate_preset("lhc")
    assert out["metadata"]["full_beam_rate_hz"] == 31.2e6
    assert out["metadata"]["single_bunch_rate_hz"] == 11e3
    halved = evaluate_preset("lhc", {"distance": 2.0})
    assert halved["a0_m_s2"] == pytest.approx(out["a0_m_s2"] / 2.0, rel=1e-12)


def test_evaluate_preset_gw():
    out = evaluate_preset("gw")
    assert out["tidal_scale"] == pytest.approx(1.973920880218e-15, rel=1e-12)
    assert out["strain"] == 1e-22
