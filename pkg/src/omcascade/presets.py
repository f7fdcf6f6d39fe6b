"""Named chain configurations used by the validation suite and the CLI.

The deep_* presets sit at least a factor of 100 beyond their regime
thresholds (0.1 and 10 in diagnose_regime), so every closed form should
track the time-domain oracle tightly there.  strong_constant probes the
frozen-displacement solution at g Q / kappa = 0.3, where first-order
treatments fail but the constant-displacement form stays exact; its
companion grid refines kappa dt to 0.02 because the default 0.05 leaves
trapezoid error above the 1e-4 agreement target.  thermal_checkpoint is
the single-cavity benchmark used by the thermal sensitivity pipeline.
"""

from __future__ import annotations

import math

from .chain import (
    CavityParams,
    ChainConfig,
    ConfigError,
    ConstantSignal,
    ContinuousHarmonic,
    HarmonicBurst,
)
from .fields import PulseParams, TimeGrid

__all__ = [
    "deep_stroboscopic",
    "strong_constant",
    "strong_constant_grid",
    "deep_cw_finite",
    "deep_cw_continuous",
    "thermal_checkpoint",
    "chain_preset",
    "comparison_grid",
    "CHAIN_PRESET_NAMES",
]


def deep_stroboscopic(n_cavities: int = 2, eta: float = 1.0):
    """Slow tone, fast cavity: Omega tau = 1e-3, kappa tau = 1000, eps = 1e-3."""
    cav = CavityParams(kappa=1000.0, delta=0.0, g=1.0)
    sig = ContinuousHarmonic(amplitude=1.0, omega_m=1e-3, phase=0.0)
    cfg = ChainConfig(
        cavities=(cav,) * n_cavities, signals=(sig,) * n_cavities, eta=eta
    )
    return cfg, PulseParams(beta_bar=1.0, tau=1.0)


def strong_constant():
    """Single cavity, frozen displacement, g Q / kappa = 0.3."""
    cav = CavityParams(kappa=40.0, delta=0.0, g=12.0)
    cfg = ChainConfig(cavities=(cav,), signals=(ConstantSignal(q0=1.0),))
    return cfg, PulseParams(beta_bar=1.0, tau=1.0)


def strong_constant_grid() -> TimeGrid:
    """kappa dt = 0.02 grid for the 1e-4 oracle comparison."""
    dt = 0.02 / 40.0
    n = 32768
    return TimeGrid(t_start=-(n // 2) * dt, dt=dt, n_points=n)


def deep_cw_finite(n_cavities: int = 2, eta: float = 1.0):
    """Fast burst inside a long pulse: bandwidth*tau = 1000, kappa tau = 1.2e4."""
    cav = CavityParams(kappa=12000.0, delta=0.0, g=12.0)
    sig = HarmonicBurst(
        amplitude=1.0, omega_m=3000.0, envelope_width=1e-3, phase=0.0
    )
    cfg = ChainConfig(
        cavities=(cav,) * n_cavities, signals=(sig,) * n_cavities, eta=eta
    )
    return cfg, PulseParams(beta_bar=1.0, tau=1.0)


def deep_cw_continuous(n_cavities: int = 2, eta: float = 1.0):
    """Persistent tone under a long pulse: Omega tau = 1000, kappa tau = 1.2e4."""
    cav = CavityParams(kappa=12000.0, delta=0.0, g=12.0)
    sig = ContinuousHarmonic(amplitude=1.0, omega_m=1000.0, phase=0.0)
    cfg = ChainConfig(
        cavities=(cav,) * n_cavities, signals=(sig,) * n_cavities, eta=eta
    )
    return cfg, PulseParams(beta_bar=1.0, tau=1.0)


def thermal_checkpoint():
    """Single-cavity benchmark: kappa/2pi = 1e6, Omega/2pi = 1e3, Delta = Omega,
    g/2pi = 1, 100 input photons, unit mechanical amplitude."""
    omega_m = 2.0 * math.pi * 1e3
    cav = CavityParams(kappa=2.0 * math.pi * 1e6, delta=omega_m, g=2.0 * math.pi)
    sig = ContinuousHarmonic(amplitude=1.0, omega_m=omega_m, phase=0.0)
    cfg = ChainConfig(cavities=(cav,), signals=(sig,))
    tau = 1e-5
    beta_bar = math.sqrt(100.0 / (math.sqrt(math.pi) * tau))
    return cfg, PulseParams(beta_bar=beta_bar, tau=tau)


_BUILDERS = {
    "deep-stroboscopic": deep_stroboscopic,
    "strong-constant": strong_constant,
    "deep-cw-finite": deep_cw_finite,
    "deep-cw-continuous": deep_cw_continuous,
    "thermal-checkpoint": thermal_checkpoint,
}

CHAIN_PRESET_NAMES = tuple(sorted(_BUILDERS))


def chain_preset(name: str):
    """(ChainConfig, PulseParams) for a named preset."""
    if name not in _BUILDERS:
        raise ConfigError(f"unknown chain preset {name!r}", key="preset")
    return _BUILDERS[name]()


def comparison_grid(name: str):
    """Designated oracle grid for a preset, or None for the default sizing."""
    if name == "strong-constant":
        return strong_constant_grid()
    if name not in _BUILDERS:
        raise ConfigError(f"unknown chain preset {name!r}", key="preset")
    return None
