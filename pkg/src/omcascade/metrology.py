"""Sensitivity bounds for the cascaded readout.

The estimated quantity is a global scale multiplying every signal's
theta_scale, with true value 1, so derivatives are taken with respect to
that multiplier and SNR bounds read snr = theta * sqrt(n_shots * qfi)
with theta = 1 in these units.  The quantum Fisher information of the
displaced output field is

    H_d = 4 eta^{N-1} int domega |d beta~_N(omega)|^2

(identity covariance; only the mean carries the signal).  Closed-form
regime bounds, the equal-cavity scaling sqrt(N) eta^{(N-1)/2}, the
optimal cascade length, and thermal corrections to the single-cavity
sensitivity live here as plain functions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import hbar, k as k_B
from scipy.integrate import trapezoid

from .chain import (
    ChainConfig,
    ConfigError,
    REGIME_CW_CONTINUOUS,
    REGIME_CW_FINITE,
    REGIME_STROBOSCOPIC,
    diagnose_regime,
    halfline_inverse_fourier,
    mech_spectrum,
    mech_time_profile,
    response_phase,
    scaled_signals,
)
from .fields import (
    PulseParams,
    SampledField,
    conjugate_freq_grid,
    default_time_grid,
    forward_transform,
    photon_number,
)
from .solver import (
    METHOD_CW_CONTINUOUS,
    METHOD_CW_FINITE,
    METHOD_DIRECT,
    METHOD_FIRST_ORDER,
    METHOD_STROB_STRONG,
    METHOD_STROB_WEAK,
    NumericsError,
    SolverOptions,
    method_for_regime,
    solve,
    solve_direct,
)

__all__ = [
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
]


@dataclass(frozen=True)
class MetrologyReport:
    qfi: float
    snr_bound: float
    regime: str
    n_shots: int = 1
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.qfi < 0:
            raise ConfigError("qfi must be nonnegative")
        if self.n_shots < 1:
            raise ConfigError("n_shots must be a positive count", key="n_shots")

    @classmethod
    def from_qfi(cls, qfi, regime, n_shots=1, theta=1.0, notes=None):
        snr = theta * math.sqrt(n_shots * qfi)
        return cls(qfi=float(qfi), snr_bound=snr, regime=regime,
                   n_shots=n_shots, notes=dict(notes or {}))

    def to_json_obj(self) -> dict:
        return {
            "qfi": self.qfi,
            "snr_bound": self.snr_bound,
            "regime": self.regime,
            "n_shots": self.n_shots,
            "notes": self.notes,
        }


def thermal_occupation(omega_m: float, temperature: float) -> float:
    """Bose occupation 1/(e^{hbar W / k_B T} - 1); zero at T = 0."""
    if temperature < 0:
        raise ConfigError("temperature must be >= 0", key="temperature")
    if omega_m <= 0:
        raise ConfigError("omega_m must be > 0", key="omega_m")
    if temperature == 0.0:
        return 0.0
    return 1.0 / math.expm1(hbar * omega_m / (k_B * temperature))


@dataclass(frozen=True)
class ThermalParams:
    temperature: float
    omega_m: float
    q_amp: float

    def __post_init__(self):
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0", key="temperature")
        if self.omega_m <= 0:
            raise ConfigError("omega_m must be > 0", key="omega_m")
        if self.q_amp == 0:
            raise ConfigError("q_amp must be nonzero", key="q_amp")

    @property
    def n_bar(self) -> float:
        return thermal_occupation(self.omega_m, self.temperature)


# ---------------------------------------------------------------------------
# QFI of the displaced output


def qfi_from_derivative(dbeta: SampledField, eta: float, n_cavities: int) -> float:
    """4 eta^{N-1} times the trapezoid integral of |d beta~|^2."""
    if dbeta.domain != "freq":
        raise ConfigError("derivative field must live on a frequency grid")
    integrand = np.abs(dbeta.values) ** 2
    return 4.0 * eta ** (n_cavities - 1) * float(
        trapezoid(integrand, dx=dbeta.grid.d_omega)
    )


def _phase_slope_weak(cfg, omega):
    """d/dlambda of the weak stroboscopic exponent: sum_j 2 eps_j Q_j(0)(1-cos phi_j)."""
    total = np.zeros_like(omega)
    for j, (cav, sig) in enumerate(zip(cfg.cavities, cfg.signals), start=1):
        q0 = float(mech_time_profile(sig, np.array((j - 1) * cfg.delay_T)))
        one_minus_cos = 2.0 / (1.0 + 4.0 * (omega - cav.delta) ** 2 / cav.kappa**2)
        total = total + 2.0 * cav.epsilon * q0 * one_minus_cos
    return total


def _phase_slope_strong(cfg, omega):
    """d chi_k/dlambda summed over k: g_k Q_k(0) kappa_k / |Gamma_k - i(w + g Q)|^2."""
    total = np.zeros_like(omega)
    for j, (cav, sig) in enumerate(zip(cfg.cavities, cfg.signals), start=1):
        q0 = float(mech_time_profile(sig, np.array((j - 1) * cfg.delay_T)))
        d = cav.gamma - 1j * (omega + cav.g * q0)
        total = total + cav.g * q0 * cav.kappa / np.abs(d) ** 2
    return total


def derivative_of_output(
    cfg: ChainConfig,
    pulse: PulseParams,
    method: str = "auto",
    grid=None,
    opts: SolverOptions | None = None,
):
    """d beta~_N / d lambda at lambda = 1 (chain frame, frequency domain).

    lambda is a global multiplier on every signal's theta_scale.  The
    frequency-space solvers are differentiated analytically; the direct
    solver uses a central difference with step 1e-4 / max(g/kappa).
    """
    if method == "auto":
        method = method_for_regime(diagnose_regime(cfg, pulse.tau).recommendation)

    if method == METHOD_DIRECT:
        eps_max = max(c.epsilon for c in cfg.cavities)
        if eps_max == 0.0:
            raise NumericsError(
                "cannot pick a finite-difference step with all g = 0"
            )
        h = 1e-4 / eps_max
        if grid is None:
            grid = default_time_grid(pulse, [c.kappa for c in cfg.cavities])
        plus = solve_direct(scaled_signals(cfg, 1.0 + h), pulse, grid, opts)
        minus = solve_direct(scaled_signals(cfg, 1.0 - h), pulse, grid, opts)
        sp = forward_transform(plus.per_cavity_fields[-1])
        sm = forward_transform(minus.per_cavity_fields[-1])
        return SampledField(sp.grid, (sp.values - sm.values) / (2.0 * h))

    if method in (METHOD_STROB_WEAK, METHOD_STROB_STRONG):
        sol = solve(cfg, pulse, method, grid)
        last = sol.per_cavity_fields[-1]
        omega = last.grid.omegas()
        slope = (
            _phase_slope_weak(cfg, omega)
            if method == METHOD_STROB_WEAK
            else _phase_slope_strong(cfg, omega)
        )
        return SampledField(last.grid, 1j * slope * last.values)

    if method in (METHOD_FIRST_ORDER, METHOD_CW_FINITE, METHOD_CW_CONTINUOUS):
        # these solutions are affine in lambda, so the secant is exact
        at_one = solve(cfg, pulse, method, grid)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            at_zero = solve(scaled_signals(cfg, 0.0), pulse, method, grid)
        f1 = at_one.per_cavity_fields[-1]
        f0 = at_zero.per_cavity_fields[-1]
        return SampledField(f1.grid, f1.values - f0.values)

    raise ConfigError(f"unknown method {method!r}", key="method")


# ---------------------------------------------------------------------------
# regime SNR bounds


def _cw_coefficients(cfg):
    out = []
    for cav in cfg.cavities:
        phi0 = float(response_phase(cav, 0.0))
        out.append(cav.g * cav.kappa / cav.gamma**2 * np.exp(-1j * phi0))
    return out


def _specialized_snr(cfg, pulse, regime, grid):
    n = cfg.n_cavities
    pref = cfg.eta ** ((n - 1) / 2.0)
    n_in = photon_number(pulse)
    if regime == REGIME_STROBOSCOPIC:
        acc = 0.0 + 0.0j
        for j, (cav, sig) in enumerate(zip(cfg.cavities, cfg.signals), start=1):
            q0 = float(mech_time_profile(sig, np.array((j - 1) * cfg.delay_T)))
            one_minus_cos = 2.0 / (1.0 + 4.0 * cav.delta**2 / cav.kappa**2)
            acc += cav.epsilon * q0 * one_minus_cos
        return 4.0 * pref * math.sqrt(n_in) * abs(acc)
    if regime == REGIME_CW_FINITE:
        fgrid = conjugate_freq_grid(
            default_time_grid(pulse, [c.kappa for c in cfg.cavities])
        ) if grid is None else grid
        total = np.zeros(fgrid.n_points, dtype=complex)
        for k, (coef, sig) in enumerate(zip(_cw_coefficients(cfg), cfg.signals), 1):
            total += coef * mech_spectrum(sig, fgrid, k, cfg.delay_T).values
        integral = float(trapezoid(np.abs(total) ** 2, dx=fgrid.d_omega))
        return 2.0 * pref * math.sqrt(n_in) * math.sqrt(
            integral / (pulse.tau * math.sqrt(math.pi))
        )
    if regime == REGIME_CW_CONTINUOUS:
        plus = 0.0 + 0.0j
        for k, (coef, sig) in enumerate(zip(_cw_coefficients(cfg), cfg.signals), 1):
            plus += coef * halfline_inverse_fourier(sig, k, cfg.delay_T)
        # conjugating every F_+ term conjugates the whole sum up to the
        # (generally complex) coefficients, so keep both combinations
        minus = sum(
            c * np.conj(halfline_inverse_fourier(s, k, cfg.delay_T))
            for k, (c, s) in enumerate(zip(_cw_coefficients(cfg), cfg.signals), 1)
        )
        return 2.0 * pref * math.sqrt(n_in) * math.sqrt(abs(plus) ** 2 + abs(minus) ** 2)
    raise ConfigError(f"no closed-form bound for regime {regime!r}", key="regime")


_REGIME_ALIASES = {
    REGIME_STROBOSCOPIC: REGIME_STROBOSCOPIC,
    METHOD_STROB_WEAK: REGIME_STROBOSCOPIC,
    METHOD_STROB_STRONG: REGIME_STROBOSCOPIC,
    REGIME_CW_FINITE: REGIME_CW_FINITE,
    REGIME_CW_CONTINUOUS: REGIME_CW_CONTINUOUS,
}

_REGIME_METHOD = {
    REGIME_STROBOSCOPIC: METHOD_STROB_WEAK,
    REGIME_CW_FINITE: METHOD_CW_FINITE,
    REGIME_CW_CONTINUOUS: METHOD_CW_CONTINUOUS,
}


def snr_bound(
    cfg: ChainConfig,
    pulse: PulseParams,
    regime: str,
    n_shots: int = 1,
    grid=None,
) -> MetrologyReport:
    """Closed-form SNR bound for the regime, cross-checked against the QFI.

    snr_bound carries the specialized expression (times sqrt(n_shots));
    the general quadrature form theta sqrt(n_shots qfi) and the relative
    difference between the two are reported in notes.
    """
    if regime not in _REGIME_ALIASES:
        raise ConfigError(f"unknown regime {regime!r}", key="regime")
    regime = _REGIME_ALIASES[regime]
    special = _specialized_snr(cfg, pulse, regime, grid)
    dbeta = derivative_of_output(cfg, pulse, _REGIME_METHOD[regime], grid)
    qfi = qfi_from_derivative(dbeta, cfg.eta, cfg.n_cavities)
    general = math.sqrt(n_shots * qfi)
    snr = special * math.sqrt(n_shots)
    rel = abs(snr - general) / general if general > 0 else abs(snr - general)
    return MetrologyReport(
        qfi=qfi,
        snr_bound=snr,
        regime=regime,
        n_shots=n_shots,
        notes={"snr_general": general, "rel_difference": rel, "theta": 1.0},
    )


def sideband_shape_norm(shape: SampledField, tau: float) -> float:
    """M_sb = (int dw |S~(w)|^2)^{1/2} / sqrt(tau sqrt(pi)) for a shared shape."""
    if shape.domain != "freq":
        raise ConfigError("sideband shape must live on a frequency grid")
    integral = float(trapezoid(np.abs(shape.values) ** 2, dx=shape.grid.d_omega))
    return math.sqrt(integral / (tau * math.sqrt(math.pi)))


# ---------------------------------------------------------------------------
# equal-cavity scaling


def equal_cavity_ratio(n: int, eta: float) -> float:
    """Coherent over incoherent SNR for N equal sensors: sqrt(N) eta^{(N-1)/2}."""
    if n < 1:
        raise ConfigError("n must be >= 1", key="n")
    if not 0.0 <= eta <= 1.0:
        raise ConfigError("eta must lie in [0, 1]", key="eta")
    return math.sqrt(n) * eta ** ((n - 1) / 2.0)


def optimal_n(eta: float) -> tuple:
    """Brute-force argmax of equal_cavity_ratio over N; ties go to smaller N."""
    if not 0.0 <= eta <= 1.0:
        raise ConfigError("eta must lie in [0, 1]", key="eta")
    if eta == 1.0:
        raise ConfigError(
            "ratio sqrt(N) grows without bound at eta = 1", key="eta"
        )
    if eta == 0.0:
        return 1, 1.0
    n_hi = math.ceil(4.0 / -math.log(eta)) + 10
    ratios = [equal_cavity_ratio(n, eta) for n in range(1, n_hi + 1)]
    best = max(ratios)
    # exact ties (eta = N/(N+1)) must resolve to the smaller N despite
    # floating-point noise in the two evaluations
    for n, r in enumerate(ratios, start=1):
        if r >= best * (1.0 - 1e-12):
            return n, r
    raise AssertionError("unreachable")


def optimal_n_report(eta: float) -> dict:
    """optimal_n plus the two closed-form candidates and the eta->1 estimates."""
    n_opt, ratio = optimal_n(eta)
    x = -1.0 / math.log(eta)
    candidates = sorted({max(1, math.floor(x)), max(1, math.ceil(x))})
    report = {
        "eta": eta,
        "n_opt": n_opt,
        "ratio_max": ratio,
        "candidates": candidates,
        "candidates_contain_optimum": n_opt in candidates,
        "integer_part_estimate": int(eta / (1.0 - eta)),
        "ratio_estimate": 1.0 / math.sqrt(math.e * (1.0 - eta)),
    }
    if not report["candidates_contain_optimum"]:
        report["note"] = "brute-force optimum outside the closed-form candidate pair"
    return report


# ---------------------------------------------------------------------------
# single-cavity benchmark and thermal limits


def qfi_free(g: float, kappa: float, delta: float, q_amp: float, n_in: float) -> float:
    """H_0 = 64 g^2 kappa^2 Q^2 N_in / (kappa^2 + 4 delta^2)^2."""
    if kappa <= 0:
        raise ConfigError("kappa must be > 0", key="kappa")
    return 64.0 * g**2 * kappa**2 * q_amp**2 * n_in / (kappa**2 + 4.0 * delta**2) ** 2


def thermal_correction(h0: float, thermal: ThermalParams) -> tuple:
    """Leading thermal correction to H_0 and its relative size.

    delta_H = -(2 n_bar + 1) H_0^2 / (2 Q^2), always <= 0; the second
    return value is |delta_H / H_0| = (2 n_bar + 1) H_0 / (2 Q^2).
    """
    if h0 < 0:
        raise ConfigError("h0 must be >= 0", key="h0")
    weight = (2.0 * thermal.n_bar + 1.0) / (2.0 * thermal.q_amp**2)
    return -weight * h0**2, weight * h0


def total_thermal_correction(h0_per_cavity, thermal_per_cavity) -> float:
    """Sum of per-cavity corrections; a modeling choice, not an identity."""
    h0s = list(h0_per_cavity)
    ths = list(thermal_per_cavity)
    if len(h0s) != len(ths):
        raise ConfigError("need one ThermalParams per cavity")
    return sum(thermal_correction(h, t)[0] for h, t in zip(h0s, ths))


def t_max(h0: float, omega_m: float, q_amp: float) -> float:
    """Largest temperature with negligible thermal correction: Q^2 hbar W / (k_B H_0)."""
    if h0 < 0:
        raise ConfigError("h0 must be >= 0", key="h0")
    if omega_m <= 0:
        raise ConfigError("omega_m must be > 0", key="omega_m")
    if h0 == 0.0:
        return math.inf
    return q_amp**2 * hbar * omega_m / (k_B * h0)
