"""Physical driving scenarios mapped onto dimensionless mechanical amplitudes.

Three weak-force sources are modeled as resonant drives of a damped
oscillator (mass m, frequency W, damping rate W zeta): an ultralight
dark-matter field, a continuous gravitational wave, and the gravity of
the particle beam in a storage ring.  Each steady-state displacement X
is converted to the dimensionless quadrature amplitude Q = X / x_zpf
with x_zpf = sqrt(hbar / 2 m W), which is what the chain signals carry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.constants import c as SPEED_OF_LIGHT, hbar

from .chain import ConfigError

# value used for the beam-gravity estimate; the scenario is quoted to two
# digits so the CODATA refinement of G is irrelevant here
GRAVITATIONAL_CONSTANT = 6.674e-11

DM_DENSITY_DEFAULT = 5.3e-22  # kg/m^3, local dark-matter mass density
DM_VELOCITY_DEFAULT = 1e5  # m/s, virial speed in the galactic halo
LHC_BEAM_POWER = 3.8e12  # W, average beam power

__all__ = [
    "OscillatorSpec",
    "DmModel",
    "SteadyAmplitude",
    "DmSteadyState",
    "dm_steady_amplitude",
    "lhc_acceleration",
    "lhc_steady_amplitude",
    "gw_tidal_scale",
    "preset",
    "evaluate_preset",
    "PRESET_NAMES",
    "GRAVITATIONAL_CONSTANT",
    "DM_DENSITY_DEFAULT",
    "LHC_BEAM_POWER",
]


@dataclass(frozen=True)
class OscillatorSpec:
    mass: float
    omega_m: float
    damping_ratio: float

    def __post_init__(self):
        if self.mass <= 0:
            raise ConfigError("mass must be > 0", key="mass")
        if self.omega_m <= 0:
            raise ConfigError("omega_m must be > 0", key="omega_m")
        if self.damping_ratio <= 0:
            raise ConfigError(
                "damping_ratio must be > 0 for steady-state amplitudes",
                key="damping_ratio",
            )

    @property
    def zero_point_scale(self) -> float:
        """x_zpf = sqrt(hbar / (2 m W))."""
        return math.sqrt(hbar / (2.0 * self.mass * self.omega_m))


@dataclass(frozen=True)
class DmModel:
    coupling: float
    mass_chi: float
    density: float = DM_DENSITY_DEFAULT
    velocity: float = DM_VELOCITY_DEFAULT

    def __post_init__(self):
        if self.density <= 0:
            raise ConfigError("density must be > 0", key="density")
        if self.mass_chi <= 0:
            raise ConfigError("mass_chi must be > 0", key="mass_chi")
        if self.velocity <= 0:
            raise ConfigError("velocity must be > 0", key="velocity")


@dataclass(frozen=True)
class SteadyAmplitude:
    """Resonant steady state: displacement in meters and Q = X / x_zpf."""

    q_amp: float
    displacement: float


@dataclass(frozen=True)
class DmSteadyState(SteadyAmplitude):
    omega_chi: float
    lambda_chi: float
    t_coherence: float
    theta_per_coupling: float


def dm_steady_amplitude(model: DmModel, osc: OscillatorSpec) -> DmSteadyState:
    """Steady amplitude of a resonantly driven sensor in a dark-matter wind.

    The drive strength is theta_chi = coupling * density (treated as a
    force amplitude in newtons); theta_per_coupling = Q / theta_chi is
    the chain-rule factor between the chain's amplitude parameter and
    theta_chi.  Field frequency, de Broglie wavelength, and coherence
    time of the wave-like candidate ride along.
    """
    theta_chi = model.coupling * model.density
    per_force = 1.0 / (2.0 * osc.mass * osc.omega_m**2 * osc.damping_ratio)
    displacement = theta_chi * per_force
    x_zpf = osc.zero_point_scale
    omega_chi = model.mass_chi * SPEED_OF_LIGHT**2 / hbar
    return DmSteadyState(
        q_amp=displacement / x_zpf,
        displacement=displacement,
        omega_chi=omega_chi,
        lambda_chi=2.0 * math.pi * hbar / (model.mass_chi * model.velocity),
        t_coherence=2.0 * math.pi * 1e7 / omega_chi,
        theta_per_coupling=per_force / x_zpf,
    )


def lhc_acceleration(power: float, distance: float) -> float:
    """Gravitational acceleration scale 4 G P / (c^2 d) of a relativistic beam."""
    if distance <= 0:
        raise ConfigError("distance must be > 0", key="distance")
    return 4.0 * GRAVITATIONAL_CONSTANT * power / (SPEED_OF_LIGHT**2 * distance)


def lhc_steady_amplitude(a0: float, osc: OscillatorSpec) -> SteadyAmplitude:
    """Steady amplitude under a resonantly modulated acceleration a0."""
    displacement = a0 / (2.0 * osc.omega_m**2 * osc.damping_ratio)
    return SteadyAmplitude(
        q_amp=displacement / osc.zero_point_scale, displacement=displacement
    )


def gw_tidal_scale(omega_gw: float, strain: float) -> float:
    """Tidal acceleration-gradient scale w^2 h / 2 of a continuous wave.

    A proportionality only; the geometric prefactor linking it to the
    force on a specific resonator is not modeled, so use this to compare
    sensitivities, never for absolute SNRs.
    """
    if strain < 0:
        raise ConfigError("strain must be >= 0", key="strain")
    return 0.5 * omega_gw**2 * strain


_PRESETS = {
    "dm": {
        "scenario": "dm",
        "density": DM_DENSITY_DEFAULT,
        "velocity": DM_VELOCITY_DEFAULT,
        "mass_chi": 1e-37,
        "coupling": 1.0,
        "oscillator": {"mass": 1e-6, "omega_m": 2.0 * math.pi * 1e3,
                       "damping_ratio": 1e-6},
    },
    "gw": {
        "scenario": "gw",
        "strain": 1e-22,
        "omega_gw": 2.0 * math.pi * 1e3,
        "oscillator": {"mass": 1e-6, "omega_m": 2.0 * math.pi * 1e3,
                       "damping_ratio": 1e-6},
    },
    "lhc": {
        "scenario": "lhc",
        "power": LHC_BEAM_POWER,
        "distance": 1.0,
        "oscillator": {"mass": 1e-6, "omega_m": 2.0 * math.pi * 1e3,
                       "damping_ratio": 1e-6},
        "metadata": {
            "full_beam_rate_hz": 31.2e6,
            "single_bunch_rate_hz": 11e3,
        },
    },
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def preset(name: str, overrides: dict | None = None) -> dict:
    """Named scenario defaults (dm, gw, lhc); every constant overridable."""
    if name not in _PRESETS:
        raise ConfigError(f"unknown preset {name!r}", key="preset")
    out = {k: (dict(v) if isinstance(v, dict) else v) for k, v in _PRESETS[name].items()}
    for key, value in (overrides or {}).items():
        if key == "oscillator" and isinstance(value, dict):
            out["oscillator"].update(value)
        else:
            out[key] = value
    return out


def evaluate_preset(name: str, overrides: dict | None = None) -> dict:
    """Run the scenario formulas on a preset; returns plain JSON-ready values."""
    cfg = preset(name, overrides)
    osc = OscillatorSpec(**cfg["oscillator"])
    if cfg["scenario"] == "dm":
        model = DmModel(
            coupling=cfg["coupling"],
            mass_chi=cfg["mass_chi"],
            density=cfg["density"],
            velocity=cfg["velocity"],
        )
        state = dm_steady_amplitude(model, osc)
        return {
            "scenario": "dm",
            "q_amp": state.q_amp,
            "displacement_m": state.displacement,
            "omega_chi": state.omega_chi,
            "lambda_chi_m": state.lambda_chi,
            "t_coherence_s": state.t_coherence,
            "theta_per_coupling": state.theta_per_coupling,
        }
    if cfg["scenario"] == "gw":
        return {
            "scenario": "gw",
            "tidal_scale": gw_tidal_scale(cfg["omega_gw"], cfg["strain"]),
            "strain": cfg["strain"],
            "omega_gw": cfg["omega_gw"],
        }
    a0 = lhc_acceleration(cfg["power"], cfg["distance"])
    state = lhc_steady_amplitude(a0, osc)
    return {
        "scenario": "lhc",
        "a0_m_s2": a0,
        "q_amp": state.q_amp,
        "displacement_m": state.displacement,
        "metadata": cfg.get("metadata", {}),
    }
