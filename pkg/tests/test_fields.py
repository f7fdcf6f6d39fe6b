from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omcascade.fields import (
    FreqGrid,
    GridError,
    PulseParams,
    SampledField,
    TimeGrid,
    conjugate_freq_grid,
    conjugate_time_grid,
    default_time_grid,
    field_from_csv,
    field_from_json_obj,
    field_to_csv,
    field_to_json_obj,
    forward_transform,
    gaussian_pulse,
    gaussian_spectrum,
    inverse_transform,
    photon_number,
    photon_number_numeric,
)


def test_time_grid_samples():
    g = TimeGrid(t_start=-1.0, dt=0.5, n_points=5)
    assert np.allclose(g.times(), [-1.0, -0.5, 0.0, 0.5, 1.0])
    assert g.t_end == 1.0
    assert g.span == 2.5


def test_grid_validation():
    with pytest.raises(GridError):
        TimeGrid(0.0, -1.0, 4)
    with pytest.raises(GridError):
        TimeGrid(0.0, 1.0, 1)
    with pytest.raises(GridError):
        FreqGrid(0.0, 0.0, 4)


def test_conjugate_grids_round_trip():
    tg = TimeGrid(t_start=-3.2, dt=0.01, n_points=640)
    fg = conjugate_freq_grid(tg)
    assert fg.n_points == tg.n_points
    assert math.isclose(fg.d_omega, 2.0 * math.pi / (tg.n_points * tg.dt))
    # zero frequency sits on the grid in the fftshift layout
    assert fg.index_of_zero() == tg.n_points // 2
    back = conjugate_time_grid(fg, t_start=tg.t_start)
    assert math.isclose(back.dt, tg.dt, rel_tol=1e-14)
    assert back.n_points == tg.n_points


def test_index_of_zero_rejects_offset_grid():
    fg = FreqGrid(omega_start=0.25, d_omega=1.0, n_points=8)
    with pytest.raises(GridError):
        fg.index_of_zero()


def test_sampled_field_checks_shape_and_finiteness():
    tg = TimeGrid(0.0, 1.0, 4)
    with pytest.raises(GridError):
        SampledField(tg, np.zeros(3, dtype=complex))
    bad = np.array([1.0, np.inf, 0.0, 0.0], dtype=complex)
    with pytest.raises(GridError):
        SampledField(tg, bad)


def test_field_values_are_frozen():
    tg = TimeGrid(0.0, 1.0, 4)
    f = SampledField(tg, np.ones(4, dtype=complex))
    with pytest.raises(ValueError):
        f.values[0] = 2.0


def test_gaussian_transform_matches_closed_form(unit_pulse):
    tg = TimeGrid(t_start=-40.0, dt=40.0 / 8192, n_points=16384)
    f = gaussian_pulse(unit_pulse, tg)
    spec = forward_transform(f)
    expected = gaussian_spectrum(unit_pulse, spec.grid.omegas())
    assert np.max(np.abs(spec.values - expected)) < 1e-9


def test_transform_round_trip(unit_pulse):
    tg = TimeGrid(t_start=-30.0, dt=60.0 / 4096, n_points=4096)
    f = gaussian_pulse(unit_pulse, tg)
    back = inverse_transform(forward_transform(f), tg)
    assert np.max(np.abs(back.values - f.values)) < 1e-12


def test_parseval(unit_pulse):
    tg = TimeGrid(t_start=-30.0, dt=60.0 / 4096, n_points=4096)
    f = gaussian_pulse(unit_pulse, tg)
    spec = forward_transform(f)
    e_t = photon_number_numeric(f)
    e_w = photon_number_numeric(spec)
    assert abs(e_t - e_w) / e_t < 1e-9


def test_delayed_pulse_carries_linear_phase(unit_pulse):
    """A grid whose origin is off-center must reproduce e^{i w t0}."""
    n = 4096
    dt = 60.0 / n
    center = 3.0
    tg = TimeGrid(t_start=center - (n // 2) * dt, dt=dt, n_points=n)
    t = tg.times()
    shifted = SampledField(tg, np.exp(-0.5 * (t - center) ** 2).astype(complex))
    spec = forward_transform(shifted)
    w = spec.grid.omegas()
    expected = gaussian_spectrum(unit_pulse, w) * np.exp(1j * w * center)
    assert np.max(np.abs(spec.values - expected)) < 1e-9


def test_photon_number_closed_form():
    p = PulseParams(beta_bar=2.0, tau=0.5)
    assert math.isclose(photon_number(p), math.sqrt(math.pi) * 0.5 * 4.0)
    tg = TimeGrid(t_start=-10.0, dt=20.0 / 4096, n_points=4096)
    numeric = photon_number_numeric(gaussian_pulse(p, tg))
    assert math.isclose(numeric, photon_number(p), rel_tol=1e-10)


@settings(max_examples=30, deadline=None)
@given(
    beta=st.floats(min_value=0.1, max_value=50.0),
    tau=st.floats(min_value=0.01, max_value=20.0),
)
def test_spectrum_peak_and_width_scale(beta, tau):
    p = PulseParams(beta_bar=beta, tau=tau)
    assert math.isclose(float(gaussian_spectrum(p, 0.0)), beta * tau, rel_tol=1e-12)
    # 1/e point of the power sits at w = sqrt(2)/tau
    w_e = math.sqrt(2.0) / tau
    ratio = float(gaussian_spectrum(p, w_e)) / (beta * tau)
    assert math.isclose(ratio, math.exp(-1.0), rel_tol=1e-12)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31 - 1))
def test_round_trip_arbitrary_field(seed):
    rng = np.random.default_rng(seed)
    tg = TimeGrid(t_start=-2.0, dt=4.0 / 256, n_points=256)
    vals = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    f = SampledField(tg, vals)
    back = inverse_transform(forward_transform(f), tg)
    assert np.max(np.abs(back.values - vals)) < 1e-11


def test_default_time_grid_resolution_and_span(unit_pulse):
    g = default_time_grid(unit_pulse, [100.0, 40.0])
    assert g.dt <= 1.0 / (20.0 * 100.0)
    assert g.t_end >= 6.0 * unit_pulse.tau
    assert -g.t_start >= 40.0 / 40.0
    assert g.n_points & (g.n_points - 1) == 0
    # t = 0 is a sample
    assert np.min(np.abs(g.times())) < 1e-12


def test_default_time_grid_rejects_bad_kappas(unit_pulse):
    with pytest.raises(GridError):
        default_time_grid(unit_pulse, [])
    with pytest.raises(GridError):
        default_time_grid(unit_pulse, [-1.0])


def test_csv_round_trip(tmp_path, unit_pulse):
    tg = TimeGrid(t_start=-8.0, dt=16.0 / 128, n_points=128)
    f = gaussian_pulse(unit_pulse, tg)
    path = tmp_path / "field.csv"
    field_to_csv(f, path)
    back = field_from_csv(path)
    assert back.domain == "time"
    assert back.grid.n_points == 128
    assert np.max(np.abs(back.values - f.values)) < 1e-10


def test_json_round_trip(unit_pulse):
    tg = TimeGrid(t_start=-8.0, dt=16.0 / 64, n_points=64)
    spec = forward_transform(gaussian_pulse(unit_pulse, tg))
    back = field_from_json_obj(field_to_json_obj(spec))
    assert back.domain == "freq"
    assert back.grid == spec.grid
    assert np.array_equal(back.values, spec.values)
