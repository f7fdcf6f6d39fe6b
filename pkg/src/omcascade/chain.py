"""Cavity chain description: cavities, mechanical signals, regime checks.

Each cavity n has linewidth kappa_n, detuning Delta_n (both rad/s) and
optomechanical coupling g_n, collected in Gamma_n = kappa_n/2 + i Delta_n.
Its linear response multiplies the field by the unimodular factor

    e^{i phi_n(w)} = -(Gamma_n - i w)^* / (Gamma_n - i w) ,
    phi_n(w) = pi + 2 arctan( 2 (w - Delta_n) / kappa_n ) ,

with the useful identity 1 - cos phi_n(w) = 2 / (1 + 4 (w-Delta_n)^2/kappa_n^2).

The mechanical displacement Q_n(t) (zero-point units) rides on each cavity;
in the chain frame cavity n sees the signal delayed by (n-1) T, so its
spectrum picks up e^{-i Omega (n-1) T}.  All signal amplitudes scale
linearly with one global parameter via their theta_scale factors.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from .fields import (
    FreqGrid,
    SampledField,
    TimeGrid,
    conjugate_time_grid,
    forward_transform,
)

__all__ = [
    "ConfigError",
    "SignalRangeWarning",
    "CavityParams",
    "MechanicalSignal",
    "ConstantSignal",
    "HarmonicBurst",
    "ContinuousHarmonic",
    "SampledSignal",
    "ChainConfig",
    "RegimeDiagnostics",
    "response_phase",
    "response_factor",
    "mech_time_profile",
    "mech_spectrum",
    "spectral_lines",
    "halfline_inverse_fourier",
    "diagnose_regime",
    "scaled_signals",
    "synchronized_delay",
    "load_config",
    "config_from_dict",
    "config_to_dict",
]

REGIME_STROBOSCOPIC = "stroboscopic"
REGIME_CW_FINITE = "cw-finite"
REGIME_CW_CONTINUOUS = "cw-continuous"
REGIME_NUMERIC_ONLY = "numeric-only"


class ConfigError(ValueError):
    """Invalid chain/pulse configuration (bad value or unknown key)."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class SignalRangeWarning(UserWarning):
    """A sampled signal was evaluated outside its tabulated range."""


@dataclass(frozen=True)
class CavityParams:
    kappa: float
    delta: float = 0.0
    g: float = 0.0

    def __post_init__(self):
        if self.kappa <= 0.0:
            raise ConfigError(f"kappa must be positive, got {self.kappa}", key="kappa")

    @property
    def gamma(self) -> complex:
        return 0.5 * self.kappa + 1j * self.delta

    @property
    def epsilon(self) -> float:
        """Weak-coupling expansion parameter g/kappa."""
        return self.g / self.kappa


def response_phase(c: CavityParams, omega) -> np.ndarray:
    """phi(w) = pi + 2 arctan(2 (w - delta) / kappa), in (0, 2 pi)."""
    return np.pi + 2.0 * np.arctan(2.0 * (np.asarray(omega, float) - c.delta) / c.kappa)


def response_factor(c: CavityParams, omega) -> np.ndarray:
    """e^{i phi(w)} as the exact complex ratio -(Gamma - iw)^*/(Gamma - iw)."""
    d = c.gamma - 1j * np.asarray(omega, float)
    return -np.conj(d) / d


# ---------------------------------------------------------------------------
# mechanical signals


@dataclass(frozen=True)
class MechanicalSignal:
    """Base type; theta_scale multiplies the unit-amplitude profile."""

    theta_scale: float = 1.0

    variant = "abstract"

    def shape(self, t) -> np.ndarray:
        raise NotImplementedError

    def shape_at_zero(self) -> float:
        return float(np.asarray(self.shape(0.0)))

    def center_frequency(self) -> float:
        """Representative carrier Omega of the signal (0 for constants)."""
        raise NotImplementedError

    def bandwidth(self) -> float:
        """Spectral width DeltaOmega (0 for infinitely long signals)."""
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantSignal(MechanicalSignal):
    q0: float = 1.0

    variant = "constant"

    def shape(self, t):
        return self.q0 * np.ones_like(np.asarray(t, dtype=float))

    def center_frequency(self):
        return 0.0

    def bandwidth(self):
        return 0.0


@dataclass(frozen=True)
class HarmonicBurst(MechanicalSignal):
    """Gaussian-windowed tone A e^{-t^2/2w^2} cos(omega_m t + phase)."""

    amplitude: float = 1.0
    omega_m: float = 1.0
    envelope_width: float = 1.0
    phase: float = 0.0

    variant = "harmonic_burst"

    def __post_init__(self):
        if self.envelope_width <= 0.0:
            raise ConfigError("envelope_width must be positive", key="envelope_width")
        if self.amplitude < 0.0:
            raise ConfigError("amplitude must be non-negative", key="amplitude")
        if self.omega_m <= 0.0:
            raise ConfigError("omega_m must be positive", key="omega_m")

    def shape(self, t):
        t = np.asarray(t, dtype=float)
        env = np.exp(-(t**2) / (2.0 * self.envelope_width**2))
        return self.amplitude * env * np.cos(self.omega_m * t + self.phase)

    def center_frequency(self):
        return abs(self.omega_m)

    def bandwidth(self):
        return 1.0 / self.envelope_width


@dataclass(frozen=True)
class ContinuousHarmonic(MechanicalSignal):
    """Everlasting tone A cos(omega_m t + phase); zero bandwidth."""

    amplitude: float = 1.0
    omega_m: float = 1.0
    phase: float = 0.0

    variant = "continuous_harmonic"

    def __post_init__(self):
        if self.amplitude < 0.0:
            raise ConfigError("amplitude must be non-negative", key="amplitude")
        if self.omega_m <= 0.0:
            raise ConfigError("omega_m must be positive", key="omega_m")

    def shape(self, t):
        t = np.asarray(t, dtype=float)
        return self.amplitude * np.cos(self.omega_m * t + self.phase)

    def center_frequency(self):
        return abs(self.omega_m)

    def bandwidth(self):
        return 0.0


@dataclass(frozen=True)
class SampledSignal(MechanicalSignal):
    """Tabulated real displacement; linear interpolation, zero outside."""

    grid: TimeGrid = field(default=None)  # type: ignore[assignment]
    samples: np.ndarray = field(default=None)  # type: ignore[assignment]

    variant = "sampled"

    def __post_init__(self):
        if self.grid is None or self.samples is None:
            raise ConfigError("sampled signal needs a grid and samples")
        v = np.array(self.samples, dtype=float)
        if v.ndim != 1 or v.size != self.grid.n_points:
            raise ConfigError("samples length does not match the grid")
        v.flags.writeable = False
        object.__setattr__(self, "samples", v)

    def shape(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.grid.t_start) or np.any(t > self.grid.t_end):
            warnings.warn(
                "sampled signal evaluated outside its tabulated range; using 0",
                SignalRangeWarning,
                stacklevel=2,
            )
        return np.interp(t, self.grid.times(), self.samples, left=0.0, right=0.0)

    def _spectrum_moments(self):
        f = forward_transform(SampledField(self.grid, self.samples.astype(complex)))
        w = f.grid.omegas()
        pos = w > 0.0
        power = np.abs(f.values[pos]) ** 2
        total = float(np.sum(power))
        if total == 0.0:
            return 0.0, 0.0
        m1 = float(np.sum(w[pos] * power) / total)
        m2 = float(np.sum((w[pos] - m1) ** 2 * power) / total)
        return m1, math.sqrt(max(m2, 0.0))

    def center_frequency(self):
        return self._spectrum_moments()[0]

    def bandwidth(self):
        return self._spectrum_moments()[1]


def mech_time_profile(s: MechanicalSignal, t) -> np.ndarray:
    """Q(t) = theta_scale * shape(t)."""
    return s.theta_scale * s.shape(t)


def spectral_lines(s: MechanicalSignal, cavity_index: int = 1, delay_T: float = 0.0):
    """Exact line decomposition Q~(W) = sqrt(2 pi) sum_l w_l delta(W - W_l).

    Returns [(W_l, w_l), ...] for line spectra (constant / continuous
    harmonic), None for broadband variants.  The cavity delay phase
    e^{-i W (n-1) T} is folded into the weights.
    """
    th = s.theta_scale
    d = (cavity_index - 1) * delay_T
    if isinstance(s, ConstantSignal):
        return [(0.0, th * s.q0 + 0.0j)]
    if isinstance(s, ContinuousHarmonic):
        half = 0.5 * th * s.amplitude
        wp = half * np.exp(-1j * s.phase) * np.exp(-1j * s.omega_m * d)
        wm = half * np.exp(1j * s.phase) * np.exp(1j * s.omega_m * d)
        return [(s.omega_m, complex(wp)), (-s.omega_m, complex(wm))]
    return None


def mech_spectrum(
    s: MechanicalSignal,
    grid: FreqGrid,
    cavity_index: int = 1,
    delay_T: float = 0.0,
) -> SampledField:
    """Q~_n(W) on the grid, including the delay phase e^{-i W (n-1) T}.

    Line spectra (constant, continuous harmonic) are represented as
    delta spikes of height weight/d_omega at the nearest grid bins; the
    closed-form solvers bypass this representation and use
    spectral_lines directly.
    """
    omega = grid.omegas()
    lines = spectral_lines(s, cavity_index, delay_T)
    if lines is not None:
        vals = np.zeros(grid.n_points, dtype=complex)
        root = math.sqrt(2.0 * math.pi)
        for w_l, weight in lines:
            idx = int(round((w_l - grid.omega_start) / grid.d_omega))
            if idx < 0 or idx >= grid.n_points:
                raise ConfigError(
                    f"spectral line at {w_l:.6g} rad/s falls outside the grid"
                )
            # delay phase evaluated at the snapped bin frequency so the
            # delay invariant holds bin by bin
            vals[idx] += weight * root / grid.d_omega
        return SampledField(grid, vals)
    if isinstance(s, HarmonicBurst):
        th, w = s.theta_scale, s.envelope_width
        half = 0.5 * th * s.amplitude * w
        plus = np.exp(-0.5 * w**2 * (omega - s.omega_m) ** 2)
        minus = np.exp(-0.5 * w**2 * (omega + s.omega_m) ** 2)
        vals = half * (np.exp(-1j * s.phase) * plus + np.exp(1j * s.phase) * minus)
    elif isinstance(s, SampledSignal):
        tg = conjugate_time_grid(grid)
        prof = mech_time_profile(s, tg.times())
        vals = forward_transform(SampledField(tg, prof.astype(complex))).values.copy()
    else:
        raise ConfigError(f"unsupported signal variant {type(s).__name__}")
    vals = vals * np.exp(-1j * omega * (cavity_index - 1) * delay_T)
    return SampledField(grid, vals)


def halfline_inverse_fourier(
    s: MechanicalSignal, cavity_index: int = 1, delay_T: float = 0.0
) -> complex:
    """Positive-frequency weight (1/sqrt(2 pi)) int_0^inf dW Q~_n(W).

    For a continuous harmonic of amplitude A and phase p this is
    (theta A / 2) e^{-i p} e^{-i omega_m (n-1) T}.  Spectral mass sitting
    exactly at W = 0 counts with weight 1/2 (Heaviside(0) = 1/2).
    """
    d = (cavity_index - 1) * delay_T
    lines = spectral_lines(s, cavity_index, delay_T)
    if lines is not None:
        total = 0.0 + 0.0j
        for w_l, weight in lines:
            if w_l > 0.0:
                total += weight
            elif w_l == 0.0:
                total += 0.5 * weight
        return complex(total)
    if isinstance(s, HarmonicBurst):
        return _halfline_numeric_gaussian(s, d)
    if isinstance(s, SampledSignal):
        f = forward_transform(
            SampledField(s.grid, mech_time_profile(s, s.grid.times()).astype(complex))
        )
        w = f.grid.omegas()
        vals = f.values * np.exp(-1j * w * d)
        mask = w > 0.0
        out = trapezoid(vals[mask], w[mask]) / math.sqrt(2.0 * math.pi)
        zero = w == 0.0
        if np.any(zero):
            out += 0.5 * vals[zero][0] * f.grid.d_omega / math.sqrt(2.0 * math.pi)
        return complex(out)
    raise ConfigError(f"unsupported signal variant {type(s).__name__}")


def _halfline_numeric_gaussian(s: HarmonicBurst, d: float) -> complex:
    """Trapezoid over the two Gaussian lobes of a burst spectrum."""
    th, w = s.theta_scale, s.envelope_width
    half = 0.5 * th * s.amplitude * w
    reach = 12.0 / w
    # resolve both the spectral lobe (width 1/w) and the delay oscillation
    step = 0.01 / w
    if d != 0.0:
        step = min(step, 0.1 / abs(d))
    total = 0.0 + 0.0j
    for sign, ph in ((+1.0, -s.phase), (-1.0, +s.phase)):
        center = sign * s.omega_m
        lo, hi = max(0.0, center - reach), center + reach
        if hi <= 0.0:
            continue
        n = min(int(math.ceil((hi - lo) / step)) + 1, 2_000_000)
        omega = np.linspace(lo, hi, max(n, 2001))
        vals = half * np.exp(1j * ph) * np.exp(-0.5 * w**2 * (omega - center) ** 2)
        vals = vals * np.exp(-1j * omega * d)
        total += trapezoid(vals, omega) / math.sqrt(2.0 * math.pi)
    return complex(total)


# ---------------------------------------------------------------------------
# chain configuration


@dataclass(frozen=True)
class ChainConfig:
    cavities: tuple
    signals: tuple
    delay_T: float = 0.0
    eta: float = 1.0
    omega_L: float = 0.0

    def __post_init__(self):
        cav = tuple(self.cavities)
        sig = tuple(self.signals)
        object.__setattr__(self, "cavities", cav)
        object.__setattr__(self, "signals", sig)
        if len(cav) < 1:
            raise ConfigError("need at least one cavity", key="cavities")
        if len(sig) != len(cav):
            raise ConfigError(
                f"got {len(sig)} signals for {len(cav)} cavities", key="signals"
            )
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigError(f"eta must lie in [0, 1], got {self.eta}", key="eta")
        if self.delay_T < 0.0:
            raise ConfigError("delay_T must be non-negative", key="delay_T")

    @property
    def n_cavities(self) -> int:
        return len(self.cavities)


def scaled_signals(cfg: ChainConfig, scale: float) -> ChainConfig:
    """Copy of cfg with every signal's theta_scale multiplied by scale."""
    import dataclasses

    sigs = tuple(
        dataclasses.replace(s, theta_scale=s.theta_scale * scale) for s in cfg.signals
    )
    return ChainConfig(cfg.cavities, sigs, cfg.delay_T, cfg.eta, cfg.omega_L)


def synchronized_delay(omega_m: float, n_periods: int = 1) -> float:
    """Link delay T = n_periods * 2 pi / omega_m.

    With T an integer number of mechanical periods every cavity sees the
    harmonic signal at the same phase, so sidebands add coherently.
    """
    if omega_m <= 0.0:
        raise ConfigError("omega_m must be positive", key="omega_m")
    if n_periods < 0:
        raise ConfigError("n_periods must be non-negative")
    return 2.0 * math.pi * n_periods / omega_m


# ---------------------------------------------------------------------------
# regime diagnostics


@dataclass(frozen=True)
class RegimeDiagnostics:
    """Per-cavity validity ratios and the recommended solution regime."""

    omega_tau: tuple
    kappa_tau: tuple
    delta_omega_tau: tuple
    omega_over_kappa: tuple
    epsilon: tuple
    recommendation: str

    def as_dict(self) -> dict:
        return {
            "omega_tau": list(self.omega_tau),
            "kappa_tau": list(self.kappa_tau),
            "delta_omega_tau": list(self.delta_omega_tau),
            "omega_over_kappa": list(self.omega_over_kappa),
            "epsilon": list(self.epsilon),
            "recommendation": self.recommendation,
        }


def diagnose_regime(cfg: ChainConfig, tau: float) -> RegimeDiagnostics:
    """Classify which closed-form regime (if any) fits cfg at pulse width tau.

    Thresholds: stroboscopic needs max(Omega tau) < 0.1 and
    min(kappa tau) > 10; CW finite-signal needs min(DeltaOmega tau) > 10;
    CW continuous needs min(Omega tau) > 10 and max(DeltaOmega tau) < 0.1.
    Anything else falls back to the numeric recursion.
    """
    if tau <= 0.0:
        raise ConfigError("tau must be positive", key="tau")
    omegas = [s.center_frequency() for s in cfg.signals]
    widths = [s.bandwidth() for s in cfg.signals]
    o_tau = tuple(o * tau for o in omegas)
    k_tau = tuple(c.kappa * tau for c in cfg.cavities)
    d_tau = tuple(w * tau for w in widths)
    o_over_k = tuple(o / c.kappa for o, c in zip(omegas, cfg.cavities))
    eps = tuple(c.epsilon for c in cfg.cavities)
    if max(o_tau) < 0.1 and min(k_tau) > 10.0:
        rec = REGIME_STROBOSCOPIC
    elif min(d_tau) > 10.0:
        rec = REGIME_CW_FINITE
    elif min(o_tau) > 10.0 and max(d_tau) < 0.1:
        rec = REGIME_CW_CONTINUOUS
    else:
        rec = REGIME_NUMERIC_ONLY
    return RegimeDiagnostics(o_tau, k_tau, d_tau, o_over_k, eps, rec)


# ---------------------------------------------------------------------------
# config files


_CAVITY_KEYS = {"kappa", "delta", "g"}
_SIGNAL_KEYS = {
    "constant": {"variant", "q0", "theta_scale"},
    "harmonic_burst": {
        "variant",
        "amplitude",
        "omega_m",
        "envelope_width",
        "phase",
        "theta_scale",
    },
    "continuous_harmonic": {"variant", "amplitude", "omega_m", "phase", "theta_scale"},
    "sampled": {"variant", "t_start", "dt", "values", "theta_scale"},
}
_TOP_KEYS = {"cavities", "signals", "delay_T", "eta", "omega_L", "pulse"}
_PULSE_KEYS = {"beta_bar", "tau"}


def _reject_unknown(given: dict, allowed: set, where: str) -> None:
    for key in given:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {where}", key=key)


def _signal_from_dict(d: dict, index: int) -> MechanicalSignal:
    if not isinstance(d, dict):
        raise ConfigError(f"signals[{index}] must be a mapping", key="signals")
    variant = d.get("variant")
    if variant not in _SIGNAL_KEYS:
        raise ConfigError(
            f"signals[{index}] has unknown variant {variant!r}", key="variant"
        )
    _reject_unknown(d, _SIGNAL_KEYS[variant], f"signals[{index}]")
    th = float(d.get("theta_scale", 1.0))
    if variant == "constant":
        return ConstantSignal(theta_scale=th, q0=float(d.get("q0", 1.0)))
    try:
        if variant == "harmonic_burst":
            return HarmonicBurst(
                theta_scale=th,
                amplitude=float(d.get("amplitude", 1.0)),
                omega_m=float(d["omega_m"]),
                envelope_width=float(d["envelope_width"]),
                phase=float(d.get("phase", 0.0)),
            )
        if variant == "continuous_harmonic":
            return ContinuousHarmonic(
                theta_scale=th,
                amplitude=float(d.get("amplitude", 1.0)),
                omega_m=float(d["omega_m"]),
                phase=float(d.get("phase", 0.0)),
            )
    except KeyError as exc:
        raise ConfigError(
            f"signals[{index}] is missing {exc.args[0]!r}", key=str(exc.args[0])
        ) from None
    grid = TimeGrid(float(d["t_start"]), float(d["dt"]), len(d["values"]))
    return SampledSignal(theta_scale=th, grid=grid, samples=np.asarray(d["values"], float))


def config_from_dict(tree: dict):
    """Build (ChainConfig, PulseParams) from a key-value tree.

    Unknown keys anywhere in the tree raise ConfigError naming the key.
    """
    from .fields import PulseParams

    if not isinstance(tree, dict):
        raise ConfigError("config root must be a mapping")
    _reject_unknown(tree, _TOP_KEYS, "config root")
    for required in ("cavities", "signals", "pulse"):
        if required not in tree:
            raise ConfigError(f"missing required section {required!r}", key=required)
    cavities = []
    for i, c in enumerate(tree["cavities"]):
        if not isinstance(c, dict):
            raise ConfigError(f"cavities[{i}] must be a mapping", key="cavities")
        _reject_unknown(c, _CAVITY_KEYS, f"cavities[{i}]")
        try:
            kappa = float(c["kappa"])
        except KeyError:
            raise ConfigError(f"cavities[{i}] is missing 'kappa'", key="kappa") from None
        cavities.append(
            CavityParams(kappa=kappa, delta=float(c.get("delta", 0.0)), g=float(c.get("g", 0.0)))
        )
    signals = [_signal_from_dict(s, i) for i, s in enumerate(tree["signals"])]
    pulse_tree = tree["pulse"]
    _reject_unknown(pulse_tree, _PULSE_KEYS, "pulse")
    try:
        pulse = PulseParams(beta_bar=float(pulse_tree["beta_bar"]), tau=float(pulse_tree["tau"]))
    except KeyError as exc:
        raise ConfigError(f"pulse is missing {exc.args[0]!r}", key=str(exc.args[0])) from None
    cfg = ChainConfig(
        cavities=tuple(cavities),
        signals=tuple(signals),
        delay_T=float(tree.get("delay_T", 0.0)),
        eta=float(tree.get("eta", 1.0)),
        omega_L=float(tree.get("omega_L", 0.0)),
    )
    return cfg, pulse


def load_config(path):
    """Read a JSON or YAML config file; returns (ChainConfig, PulseParams)."""
    text = open(path).read()
    name = str(path)
    if name.endswith((".yaml", ".yml")):
        import yaml

        tree = yaml.safe_load(text)
    else:
        try:
            tree = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"could not parse {name}: {exc}") from None
    return config_from_dict(tree)


def config_to_dict(cfg: ChainConfig, pulse) -> dict:
    """Fully-resolved tree (defaults materialised); inverse of config_from_dict."""
    sigs = []
    for s in cfg.signals:
        if isinstance(s, ConstantSignal):
            sigs.append({"variant": "constant", "q0": s.q0, "theta_scale": s.theta_scale})
        elif isinstance(s, HarmonicBurst):
            sigs.append(
                {
                    "variant": "harmonic_burst",
                    "amplitude": s.amplitude,
                    "omega_m": s.omega_m,
                    "envelope_width": s.envelope_width,
                    "phase": s.phase,
                    "theta_scale": s.theta_scale,
                }
            )
        elif isinstance(s, ContinuousHarmonic):
            sigs.append(
                {
                    "variant": "continuous_harmonic",
                    "amplitude": s.amplitude,
                    "omega_m": s.omega_m,
                    "phase": s.phase,
                    "theta_scale": s.theta_scale,
                }
            )
        elif isinstance(s, SampledSignal):
            sigs.append(
                {
                    "variant": "sampled",
                    "t_start": s.grid.t_start,
                    "dt": s.grid.dt,
                    "values": [float(v) for v in s.samples],
                    "theta_scale": s.theta_scale,
                }
            )
        else:
            raise ConfigError(f"unsupported signal variant {type(s).__name__}")
    return {
        "cavities": [
            {"kappa": c.kappa, "delta": c.delta, "g": c.g} for c in cfg.cavities
        ],
        "signals": sigs,
        "delay_T": cfg.delay_T,
        "eta": cfg.eta,
        "omega_L": cfg.omega_L,
        "pulse": {"beta_bar": pulse.beta_bar, "tau": pulse.tau},
    }
