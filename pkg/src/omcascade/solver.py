"""Cascade solvers: exact time-domain recursion and closed-form regimes.

The chain-frame output of cavity n obeys the recursion

    beta_n(t) = beta_{n-1}(t)
                - kappa_n int_0^inf dt' e^{-G_n(t) t'} beta_{n-1}(t - t') ,

with G_n(t) = Gamma_n - i g_n Q_n(t) evaluated at the outer time t and
Q_n(t) the mechanical displacement seen by cavity n (the lab profile
advanced by (n-1) T).  solve_direct evaluates this sum literally
(trapezoid memory quadrature, kernel truncated at memory_cutoff/kappa_n)
and serves as the oracle for every closed form:

  * solve_first_order      generic first order in epsilon_n = g_n/kappa_n
  * solve_stroboscopic_weak    slow signal, first order, pure phase
  * solve_stroboscopic_strong  slow signal, any g, pure phase
  * solve_cw_finite        fast finite-duration signal, resolved sidebands
  * solve_cw_continuous    quasi-continuous tone, two sidebands per cavity

All closed forms work on the frequency grid conjugate to the time grid,
so direct solutions compare after a forward transform.  Lab-frame output
(attenuation eta^{N-1}, delay (N-1)T, phase e^{i(N-1) omega_L T}) is
attached by apply_output_bookkeeping.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .chain import (
    ChainConfig,
    ConfigError,
    REGIME_CW_CONTINUOUS,
    REGIME_CW_FINITE,
    REGIME_NUMERIC_ONLY,
    REGIME_STROBOSCOPIC,
    diagnose_regime,
    mech_spectrum,
    mech_time_profile,
    response_factor,
    response_phase,
    spectral_lines,
    halfline_inverse_fourier,
)
from .fields import (
    FreqGrid,
    PulseParams,
    SampledField,
    TimeGrid,
    conjugate_freq_grid,
    default_time_grid,
    forward_transform,
    gaussian_pulse,
    gaussian_spectrum,
)

__all__ = [
    "NumericsError",
    "ResolutionError",
    "RegimeWarning",
    "ConvergenceWarning",
    "SolverOptions",
    "CascadeSolution",
    "solve_direct",
    "solve_first_order",
    "solve_stroboscopic_weak",
    "solve_stroboscopic_strong",
    "solve_cw_finite",
    "solve_cw_continuous",
    "solve",
    "apply_output_bookkeeping",
    "method_for_regime",
    "rel_l2_diff",
    "solution_to_json_obj",
    "export_power_csv",
]

METHOD_DIRECT = "direct"
METHOD_FIRST_ORDER = "first-order"
METHOD_STROB_WEAK = "strob-weak"
METHOD_STROB_STRONG = "strob-strong"
METHOD_CW_FINITE = "cw-finite"
METHOD_CW_CONTINUOUS = "cw-continuous"

ALL_METHODS = (
    METHOD_DIRECT,
    METHOD_FIRST_ORDER,
    METHOD_STROB_WEAK,
    METHOD_STROB_STRONG,
    METHOD_CW_FINITE,
    METHOD_CW_CONTINUOUS,
)


class NumericsError(RuntimeError):
    """A solver could not produce a trustworthy result."""


class ResolutionError(NumericsError):
    """Grid too coarse for the requested cavities (dt * kappa > 0.05)."""


class RegimeWarning(UserWarning):
    """A closed-form solver was used outside its validity window."""


class ConvergenceWarning(UserWarning):
    """Self-convergence check failed at the requested tolerance."""


@dataclass(frozen=True)
class SolverOptions:
    memory_cutoff: float = 40.0
    quadrature: str = "trapezoid"
    rel_tolerance: float = 1e-6
    check_convergence: bool = False

    def __post_init__(self):
        if self.memory_cutoff < 10.0:
            raise ConfigError("memory_cutoff must be >= 10", key="memory_cutoff")
        if self.quadrature != "trapezoid":
            raise ConfigError(
                f"unsupported quadrature {self.quadrature!r}", key="quadrature"
            )


@dataclass(frozen=True)
class CascadeSolution:
    """Chain-frame fields beta_n plus the bookkept lab-frame output."""

    method: str
    config: ChainConfig
    pulse: PulseParams
    input_field: SampledField
    per_cavity_fields: tuple
    final_output_amplitude: SampledField

    def __post_init__(self):
        object.__setattr__(self, "per_cavity_fields", tuple(self.per_cavity_fields))
        if len(self.per_cavity_fields) != self.config.n_cavities:
            raise ConfigError("need one per-cavity field per cavity")


def method_for_regime(recommendation: str) -> str:
    return {
        REGIME_STROBOSCOPIC: METHOD_STROB_WEAK,
        REGIME_CW_FINITE: METHOD_CW_FINITE,
        REGIME_CW_CONTINUOUS: METHOD_CW_CONTINUOUS,
        REGIME_NUMERIC_ONLY: METHOD_DIRECT,
    }[recommendation]


def _bookkeep(field: SampledField, cfg: ChainConfig) -> SampledField:
    n = cfg.n_cavities
    shift = (n - 1) * cfg.delay_T
    factor = cfg.eta ** (n - 1) * np.exp(1j * (n - 1) * cfg.omega_L * cfg.delay_T)
    if field.domain == "time":
        grid = TimeGrid(field.grid.t_start + shift, field.grid.dt, field.grid.n_points)
        return SampledField(grid, factor * field.values)
    omega = field.grid.omegas()
    return SampledField(field.grid, factor * np.exp(1j * omega * shift) * field.values)


def apply_output_bookkeeping(sol: CascadeSolution, cfg: ChainConfig) -> SampledField:
    """Lab-frame mean output: eta^{N-1} beta_N(t-(N-1)T) e^{i(N-1) omega_L T}."""
    return _bookkeep(sol.per_cavity_fields[-1], cfg)


def rel_l2_diff(a: SampledField, b: SampledField) -> float:
    """|| a - b ||_2 / || b ||_2 over the shared grid."""
    if a.grid != b.grid:
        raise ConfigError("fields live on different grids")
    num = float(np.linalg.norm(a.values - b.values))
    den = float(np.linalg.norm(b.values))
    if den == 0.0:
        return num
    return num / den


def _warn_if_regime_mismatch(cfg, pulse, expected, method):
    rec = diagnose_regime(cfg, pulse.tau).recommendation
    if rec != expected:
        warnings.warn(
            f"{method} used outside its validity window (diagnostics recommend "
            f"{rec}); result may be inaccurate",
            RegimeWarning,
            stacklevel=3,
        )


def _chain_frame_signal(sig, n, delay_T, t):
    """Q_n at chain-frame times t, i.e. the lab profile advanced by (n-1)T."""
    return mech_time_profile(sig, np.asarray(t, float) + (n - 1) * delay_T)


def _resolve_time_grid(cfg, pulse, grid):
    if grid is None:
        return default_time_grid(pulse, [c.kappa for c in cfg.cavities])
    if isinstance(grid, FreqGrid):
        raise ConfigError("solve_direct needs a TimeGrid")
    return grid


def _resolve_freq_grid(cfg, pulse, grid):
    if grid is None:
        return conjugate_freq_grid(default_time_grid(pulse, [c.kappa for c in cfg.cavities]))
    if isinstance(grid, TimeGrid):
        return conjugate_freq_grid(grid)
    return grid


# ---------------------------------------------------------------------------
# direct (oracle) solver


def _causal_fft_conv(values: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """(kernel * values)[i] = sum_j kernel[j] values[i-j], zero-padded past."""
    n = values.size
    lfft = scipy.fft.next_fast_len(n + kernel.size - 1)
    out = scipy.fft.ifft(scipy.fft.fft(values, lfft) * scipy.fft.fft(kernel, lfft))
    return out[:n]


def _taylor_terms(x_max: float, tol: float = 1e-13) -> int:
    """Smallest m with x^(m+1)/(m+1)! < tol (remainder of e^{ix})."""
    term, m = 1.0, 0
    while True:
        m += 1
        term *= x_max / m
        if term < tol and m >= 3:
            return m
        if m > 80:  # caller switches to the dense path instead
            return m


def _memory_sum_taylor(values, a, base, tprime, m_max):
    """sum_j base_j e^{i a_i t'_j} values[i-j] via a Taylor split.

    e^{i a t'} = sum_m (i a)^m t'^m / m! turns the i-dependent kernel into
    m_max+1 plain convolutions; numerically identical to the dense sum
    once the remainder bound drops below 1e-13.
    """
    n = values.size
    lfft = scipy.fft.next_fast_len(n + base.size - 1)
    bhat = scipy.fft.fft(values, lfft)
    acc = np.zeros(n, dtype=complex)
    coef = np.ones(n, dtype=complex)
    ia = 1j * a
    for m in range(m_max + 1):
        conv = scipy.fft.ifft(bhat * scipy.fft.fft(base * tprime**m, lfft))[:n]
        acc += coef * conv
        coef = coef * ia / (m + 1)
    return acc


def _memory_sum_dense(values, a, base, tprime):
    """Literal chunked evaluation of the trapezoid memory sum."""
    n = values.size
    m = tprime.size - 1
    padded = np.concatenate([np.zeros(m, dtype=complex), values])
    windows = np.lib.stride_tricks.sliding_window_view(padded, m + 1)
    out = np.empty(n, dtype=complex)
    chunk = max(1, 4_000_000 // (m + 1))
    for s in range(0, n, chunk):
        e = min(s + chunk, n)
        kernels = np.exp(np.multiply.outer(1j * a[s:e], tprime)) * base
        out[s:e] = np.einsum("rj,rj->r", kernels[:, ::-1], windows[s:e])
    return out


def _cavity_step(values, q_vals, cav, dt, opts):
    n_mem = max(int(round(opts.memory_cutoff / (cav.kappa * dt))), 2)
    tprime = dt * np.arange(n_mem + 1)
    wts = np.full(n_mem + 1, dt)
    wts[0] = wts[-1] = 0.5 * dt
    base = cav.kappa * wts * np.exp(-cav.gamma * tprime)
    a = cav.g * np.asarray(q_vals, dtype=float)
    if np.all(a == a[0]):
        kernel = base * np.exp(1j * a[0] * tprime)
        return values - _causal_fft_conv(values, kernel)
    x_max = float(np.max(np.abs(a))) * float(tprime[-1])
    # beyond x ~ 8 the alternating Taylor series loses ~e^x of precision
    if x_max <= 8.0:
        return values - _memory_sum_taylor(values, a, base, tprime, _taylor_terms(x_max))
    return values - _memory_sum_dense(values, a, base, tprime)


def _direct_fields(cfg, pulse, grid, opts):
    beta = gaussian_pulse(pulse, grid)
    t = grid.times()
    values = beta.values
    out = []
    for n, (cav, sig) in enumerate(zip(cfg.cavities, cfg.signals), start=1):
        q_vals = _chain_frame_signal(sig, n, cfg.delay_T, t)
        values = _cavity_step(values, q_vals, cav, grid.dt, opts)
        out.append(values)
    return beta, out


def solve_direct(
    cfg: ChainConfig,
    pulse: PulseParams,
    grid: TimeGrid | None = None,
    opts: SolverOptions | None = None,
) -> CascadeSolution:
    """Time-domain recursion; exact at any coupling (the package oracle)."""
    opts = opts or SolverOptions()
    grid = _resolve_time_grid(cfg, pulse, grid)
    worst = max(c.kappa for c in cfg.cavities) * grid.dt
    if worst > 0.05 * (1.0 + 1e-12):
        raise ResolutionError(
            f"dt*kappa = {worst:.3g} exceeds 0.05; refine the time grid"
        )
    beta, raw = _direct_fields(cfg, pulse, grid, opts)
    if opts.check_convergence:
        fine_grid = TimeGrid(grid.t_start, grid.dt / 2.0, 2 * grid.n_points - 1)
        _, fine = _direct_fields(cfg, pulse, fine_grid, opts)
        coarse, shared = raw[-1], fine[-1][::2]
        denom = float(np.linalg.norm(shared))
        drift = float(np.linalg.norm(coarse - shared)) / denom if denom else 0.0
        if drift > opts.rel_tolerance:
            warnings.warn(
                f"halving dt changes the output L2 norm by {drift:.3g} "
                f"(> rel_tolerance {opts.rel_tolerance:.3g})",
                ConvergenceWarning,
                stacklevel=2,
            )
    fields = tuple(SampledField(grid, v) for v in raw)
    sol = CascadeSolution(METHOD_DIRECT, cfg, pulse, beta, fields, _bookkeep(fields[-1], cfg))
    return sol


# ---------------------------------------------------------------------------
# first order in epsilon


def _w_factor(cav, omega):
    """[1 - e^{i phi(w)}]^2 = kappa^2 / (Gamma - i w)^2 (exact rational form)."""
    d = cav.gamma - 1j * np.asarray(omega, float)
    return (cav.kappa / d) ** 2


def _phase_before(cfg, omega, k):
    """sum_{l < k} phi_l evaluated at arbitrary frequencies omega."""
    total = np.zeros_like(np.asarray(omega, float))
    for cav in cfg.cavities[: k - 1]:
        total = total + response_phase(cav, omega)
    return total


def _l_operator(cfg, pulse, k, fgrid, omega):
    """L_k applied to e^{i sum_{l<k} phi_l} beta~ on the grid."""
    cav = cfg.cavities[k - 1]
    sig = cfg.signals[k - 1]
    lines = spectral_lines(sig, k, cfg.delay_T)
    if lines is not None:
        out = np.zeros(fgrid.n_points, dtype=complex)
        for w_l, weight in lines:
            shifted = omega - w_l
            u = np.exp(1j * _phase_before(cfg, shifted, k)) * gaussian_spectrum(pulse, shifted)
            out += weight * _w_factor(cav, shifted) * u
        return out
    u = np.exp(1j * _phase_before(cfg, omega, k)) * gaussian_spectrum(pulse, omega)
    wu = _w_factor(cav, omega) * u
    qt = mech_spectrum(sig, fgrid, k, cfg.delay_T).values
    mag = np.abs(qt)
    if mag.max() == 0.0:
        return np.zeros(fgrid.n_points, dtype=complex)
    keep = np.nonzero(mag > mag.max() * 1e-13)[0]
    a, b = int(keep.min()), int(keep.max()) + 1
    if b - a <= 4096:
        conv = np.convolve(wu, qt[a:b])
    else:
        lfft = scipy.fft.next_fast_len(fgrid.n_points + (b - a) - 1)
        conv = scipy.fft.ifft(
            scipy.fft.fft(wu, lfft) * scipy.fft.fft(qt[a:b], lfft)
        )
    izero = fgrid.index_of_zero()
    idx = np.arange(fgrid.n_points) + izero - a
    return conv[idx] * fgrid.d_omega / math.sqrt(2.0 * math.pi)


def solve_first_order(
    cfg: ChainConfig, pulse: PulseParams, grid=None
) -> CascadeSolution:
    """Generic first-order-in-epsilon frequency-space solution."""
    fgrid = _resolve_freq_grid(cfg, pulse, grid)
    omega = fgrid.omegas()
    eps = [c.epsilon for c in cfg.cavities]
    if max(abs(e) for e in eps) > 0.1:
        warnings.warn(
            "first-order solution requested with g/kappa > 0.1",
            RegimeWarning,
            stacklevel=2,
        )
    beta_in = gaussian_spectrum(pulse, omega)
    input_field = SampledField(fgrid, beta_in.astype(complex))
    cum_phase = np.zeros_like(omega)
    sideband = np.zeros(fgrid.n_points, dtype=complex)
    fields = []
    for n, cav in enumerate(cfg.cavities, start=1):
        phase_n = response_phase(cav, omega)
        sideband = sideband * np.exp(1j * phase_n) + eps[n - 1] * _l_operator(
            cfg, pulse, n, fgrid, omega
        )
        cum_phase = cum_phase + phase_n
        fields.append(
            SampledField(fgrid, np.exp(1j * cum_phase) * beta_in - 1j * sideband)
        )
    return CascadeSolution(
        METHOD_FIRST_ORDER, cfg, pulse, input_field, tuple(fields),
        _bookkeep(fields[-1], cfg),
    )


# ---------------------------------------------------------------------------
# closed-form regimes


def _closed_form_common(cfg, pulse, grid):
    fgrid = _resolve_freq_grid(cfg, pulse, grid)
    omega = fgrid.omegas()
    beta_in = gaussian_spectrum(pulse, omega).astype(complex)
    return fgrid, omega, beta_in, SampledField(fgrid, beta_in)


def solve_stroboscopic_weak(cfg, pulse, grid=None) -> CascadeSolution:
    """Slow-signal pure-phase solution, first order in g/kappa."""
    _warn_if_regime_mismatch(cfg, pulse, REGIME_STROBOSCOPIC, METHOD_STROB_WEAK)
    fgrid, omega, beta_in, input_field = _closed_form_common(cfg, pulse, grid)
    total = np.zeros_like(omega)
    fields = []
    for n, (cav, sig) in enumerate(zip(cfg.cavities, cfg.signals), start=1):
        q0 = float(_chain_frame_signal(sig, n, cfg.delay_T, 0.0))
        one_minus_cos = 2.0 / (1.0 + 4.0 * (omega - cav.delta) ** 2 / cav.kappa**2)
        total = total + response_phase(cav, omega) + 2.0 * cav.epsilon * q0 * one_minus_cos
        fields.append(SampledField(fgrid, np.exp(1j * total) * beta_in))
    return CascadeSolution(
        METHOD_STROB_WEAK, cfg, pulse, input_field, tuple(fields),
        _bookkeep(fields[-1], cfg),
    )


def solve_stroboscopic_strong(cfg, pulse, grid=None) -> CascadeSolution:
    """Slow-signal pure-phase solution, exact in g (frozen displacement)."""
    _warn_if_regime_mismatch(cfg, pulse, REGIME_STROBOSCOPIC, METHOD_STROB_STRONG)
    fgrid, omega, beta_in, input_field = _closed_form_common(cfg, pulse, grid)
    prod = np.ones(fgrid.n_points, dtype=complex)
    fields = []
    for n, (cav, sig) in enumerate(zip(cfg.cavities, cfg.signals), start=1):
        q0 = float(_chain_frame_signal(sig, n, cfg.delay_T, 0.0))
        # e^{i chi(w)} = e^{i phi(w + g Q(0))}: frozen displacement shifts
        # the cavity resonance seen by the light
        prod = prod * response_factor(cav, omega + cav.g * q0)
        fields.append(SampledField(fgrid, prod * beta_in))
    return CascadeSolution(
        METHOD_STROB_STRONG, cfg, pulse, input_field, tuple(fields),
        _bookkeep(fields[-1], cfg),
    )


def _cw_coefficient(cav):
    """(g kappa / Gamma^2) e^{-i phi(0)}; algebraically -g kappa/|Gamma|^2."""
    phi0 = float(response_phase(cav, 0.0))
    return cav.g * cav.kappa / cav.gamma**2 * np.exp(-1j * phi0)


def solve_cw_finite(cfg, pulse, grid=None) -> CascadeSolution:
    """Fast finite-duration signal: carrier plus resolved sideband spectra."""
    _warn_if_regime_mismatch(cfg, pulse, REGIME_CW_FINITE, METHOD_CW_FINITE)
    fgrid, omega, beta_in, input_field = _closed_form_common(cfg, pulse, grid)
    phase0 = 0.0
    sideband = np.zeros(fgrid.n_points, dtype=complex)
    fields = []
    for n, (cav, sig) in enumerate(zip(cfg.cavities, cfg.signals), start=1):
        sideband = sideband + _cw_coefficient(cav) * mech_spectrum(
            sig, fgrid, n, cfg.delay_T
        ).values
        phase0 += float(response_phase(cav, 0.0))
        fields.append(
            SampledField(
                fgrid,
                np.exp(1j * phase0) * (beta_in - 1j * pulse.beta_bar * sideband),
            )
        )
    return CascadeSolution(
        METHOD_CW_FINITE, cfg, pulse, input_field, tuple(fields),
        _bookkeep(fields[-1], cfg),
    )


def solve_cw_continuous(cfg, pulse, grid=None) -> CascadeSolution:
    """Quasi-continuous tone: two pulse-shaped sidebands per cavity."""
    _warn_if_regime_mismatch(cfg, pulse, REGIME_CW_CONTINUOUS, METHOD_CW_CONTINUOUS)
    fgrid, omega, beta_in, input_field = _closed_form_common(cfg, pulse, grid)
    phase0 = 0.0
    sideband = np.zeros(fgrid.n_points, dtype=complex)
    fields = []
    for n, (cav, sig) in enumerate(zip(cfg.cavities, cfg.signals), start=1):
        omega_k = sig.center_frequency()
        fplus = halfline_inverse_fourier(sig, n, cfg.delay_T)
        sideband = sideband + _cw_coefficient(cav) * (
            gaussian_spectrum(pulse, omega + omega_k) * np.conj(fplus)
            + gaussian_spectrum(pulse, omega - omega_k) * fplus
        )
        phase0 += float(response_phase(cav, 0.0))
        fields.append(
            SampledField(fgrid, np.exp(1j * phase0) * (beta_in - 1j * sideband))
        )
    return CascadeSolution(
        METHOD_CW_CONTINUOUS, cfg, pulse, input_field, tuple(fields),
        _bookkeep(fields[-1], cfg),
    )


_SOLVERS = {
    METHOD_FIRST_ORDER: solve_first_order,
    METHOD_STROB_WEAK: solve_stroboscopic_weak,
    METHOD_STROB_STRONG: solve_stroboscopic_strong,
    METHOD_CW_FINITE: solve_cw_finite,
    METHOD_CW_CONTINUOUS: solve_cw_continuous,
}


def solve(
    cfg: ChainConfig,
    pulse: PulseParams,
    method: str = "auto",
    grid=None,
    opts: SolverOptions | None = None,
) -> CascadeSolution:
    """Dispatch by method name; 'auto' follows diagnose_regime."""
    if method == "auto":
        method = method_for_regime(diagnose_regime(cfg, pulse.tau).recommendation)
    if method == METHOD_DIRECT:
        tgrid = grid
        if isinstance(grid, FreqGrid):
            raise ConfigError("direct solver needs a time grid")
        return solve_direct(cfg, pulse, tgrid, opts)
    if method not in _SOLVERS:
        raise ConfigError(f"unknown method {method!r}", key="method")
    return _SOLVERS[method](cfg, pulse, grid)


# ---------------------------------------------------------------------------
# serialization helpers


def solution_spectrum(sol: CascadeSolution) -> SampledField:
    """Chain-frame beta~_N; transforms time-domain solutions on demand."""
    last = sol.per_cavity_fields[-1]
    return forward_transform(last) if last.domain == "time" else last


def solution_to_json_obj(sol: CascadeSolution, include_per_cavity: bool = False) -> dict:
    from .fields import field_to_json_obj

    obj = {
        "method": sol.method,
        "n_cavities": sol.config.n_cavities,
        "final_output_amplitude": field_to_json_obj(sol.final_output_amplitude),
    }
    if include_per_cavity:
        obj["per_cavity_fields"] = [field_to_json_obj(f) for f in sol.per_cavity_fields]
    return obj


def export_power_csv(field: SampledField, path) -> None:
    """|field|^2 against the grid coordinate, 12 significant digits."""
    import csv

    coord = "t" if field.domain == "time" else "omega"
    xs = field.grid.times() if field.domain == "time" else field.grid.omegas()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([coord, "power"])
        for x, v in zip(xs, np.abs(field.values) ** 2):
            writer.writerow([f"{x:.12g}", f"{v:.12g}"])
