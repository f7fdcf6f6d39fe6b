"""Cascaded optomechanical sensing toolkit.

A chain of N driven cavities reads a weak mechanical signal onto one
traveling light field.  The package computes the mean output amplitude
exactly (time-domain oracle) and in four closed-form regimes, and turns
the result into estimation bounds: quantum Fisher information, SNR
limits, the coherent-vs-incoherent scaling sqrt(N) eta^{(N-1)/2}, the
loss-optimal chain length, and thermal validity temperatures.
"""

from .fields import (
    FreqGrid,
    GridError,
    PulseParams,
    SampledField,
    TimeGrid,
    conjugate_freq_grid,
    conjugate_time_grid,
    default_time_grid,
    forward_transform,
    gaussian_pulse,
    gaussian_spectrum,
    inverse_transform,
    photon_number,
    photon_number_numeric,
)
from .chain import (
    CavityParams,
    ChainConfig,
    ConfigError,
    ConstantSignal,
    ContinuousHarmonic,
    HarmonicBurst,
    MechanicalSignal,
    RegimeDiagnostics,
    SampledSignal,
    SignalRangeWarning,
    config_from_dict,
    config_to_dict,
    diagnose_regime,
    halfline_inverse_fourier,
    load_config,
    mech_spectrum,
    mech_time_profile,
    response_phase,
    scaled_signals,
    spectral_lines,
    synchronized_delay,
)
from .solver import (
    CascadeSolution,
    ConvergenceWarning,
    NumericsError,
    RegimeWarning,
    ResolutionError,
    SolverOptions,
    apply_output_bookkeeping,
    rel_l2_diff,
    solution_spectrum,
    solve,
    solve_cw_continuous,
    solve_cw_finite,
    solve_direct,
    solve_first_order,
    solve_stroboscopic_strong,
    solve_stroboscopic_weak,
)
from .metrology import (
    MetrologyReport,
    ThermalParams,
    derivative_of_output,
    equal_cavity_ratio,
    optimal_n,
    optimal_n_report,
    qfi_free,
    qfi_from_derivative,
    sideband_shape_norm,
    snr_bound,
    t_max,
    thermal_correction,
    thermal_occupation,
    total_thermal_correction,
)
from .applications import (
    DmModel,
    OscillatorSpec,
    dm_steady_amplitude,
    evaluate_preset,
    gw_tidal_scale,
    lhc_acceleration,
    lhc_steady_amplitude,
    preset,
)
from . import presets

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "presets",
    # fields
    "TimeGrid",
    "FreqGrid",
    "GridError",
    "PulseParams",
    "SampledField",
    "conjugate_freq_grid",
    "conjugate_time_grid",
    "default_time_grid",
    "forward_transform",
    "inverse_transform",
    "gaussian_pulse",
    "gaussian_spectrum",
    "photon_number",
    "photon_number_numeric",
    # chain
    "CavityParams",
    "ChainConfig",
    "ConfigError",
    "MechanicalSignal",
    "ConstantSignal",
    "ContinuousHarmonic",
    "HarmonicBurst",
    "SampledSignal",
    "SignalRangeWarning",
    "RegimeDiagnostics",
    "diagnose_regime",
    "mech_time_profile",
    "mech_spectrum",
    "spectral_lines",
    "halfline_inverse_fourier",
    "response_phase",
    "scaled_signals",
    "synchronized_delay",
    "config_from_dict",
    "config_to_dict",
    "load_config",
    # solver
    "SolverOptions",
    "CascadeSolution",
    "NumericsError",
    "ResolutionError",
    "RegimeWarning",
    "ConvergenceWarning",
    "solve",
    "solve_direct",
    "solve_first_order",
    "solve_stroboscopic_weak",
    "solve_stroboscopic_strong",
    "solve_cw_finite",
    "solve_cw_continuous",
    "apply_output_bookkeeping",
    "solution_spectrum",
    "rel_l2_diff",
    # metrology
    "MetrologyReport",
    "ThermalParams",
    "thermal_occupation",
    "qfi_from_derivative",
    "derivative_of_output",
    "snr_bound",
    "sideband_shape_norm",
    "equal_cavity_ratio",
    "optimal_n",
    "optimal_n_report",
    "qfi_free",
    "thermal_correction",
    "total_thermal_correction",
    "t_max",
    # applications
    "OscillatorSpec",
    "DmModel",
    "dm_steady_amplitude",
    "lhc_acceleration",
    "lhc_steady_amplitude",
    "gw_tidal_scale",
    "preset",
    "evaluate_preset",
]
