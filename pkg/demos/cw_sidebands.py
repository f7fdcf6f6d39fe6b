"""Fast mechanics: the tone scatters the carrier into resolved sidebands.

With Omega tau = 1000 the pulse spectrum (width 1/tau) and the two
scattered copies at +-Omega no longer overlap.  The closed-form
sideband solution writes the output as carrier + shifted pulse copies
weighted by g kappa / Gamma^2; this script checks it against the
time-domain solver and plots the three-line spectrum.  A second panel
does the same for a finite burst, whose sidebands are lobes with the
burst's own width instead of sharp lines.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from omcascade import rel_l2_diff, solution_spectrum, solve, solve_direct
from omcascade.presets import chain_preset

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

fig, axes = plt.subplots(1, 2, figsize=(11, 4))

for ax, name, method in [
    (axes[0], "deep-cw-continuous", "cw-continuous"),
    (axes[1], "deep-cw-finite", "cw-finite"),
]:
    cfg, pulse = chain_preset(name)
    sig = cfg.signals[0]
    omega_m = sig.omega_m
    print(f"{name}: Omega tau = {omega_m * pulse.tau:.0f}, "
          f"kappa tau = {cfg.cavities[0].kappa * pulse.tau:.0f}")

    reference = solution_spectrum(solve_direct(cfg, pulse))
    closed = solve(cfg, pulse, method, reference.grid)
    err = rel_l2_diff(closed.per_cavity_fields[-1], reference)
    print(f"  {method} vs direct: rel L2 difference {err:.3e}")

    omega = reference.grid.omegas()
    keep = np.abs(omega) < 1.6 * omega_m
    power = np.abs(reference.values) ** 2
    floor = power.max() * 1e-14
    ax.semilogy(omega[keep], np.maximum(power[keep], floor), label="direct")
    ax.semilogy(
        omega[keep],
        np.maximum(np.abs(closed.per_cavity_fields[-1].values[keep]) ** 2, floor),
        "--",
        label=method,
    )
    for s in (-omega_m, omega_m):
        ax.axvline(s, color="gray", lw=0.6, ls=":")
    ax.set_ylim(floor, power.max() * 5)
    ax.set_xlabel("omega")
    ax.set_ylabel("|beta~(omega)|^2")
    ax.set_title(name)
    ax.legend()

    # sideband weight relative to the carrier
    i_carrier = reference.grid.index_of_zero()
    i_up = int(np.argmin(np.abs(omega - omega_m)))
    print(f"  carrier power {power[i_carrier]:.3e}, "
          f"upper sideband power {power[i_up]:.3e} "
          f"(ratio {power[i_up] / power[i_carrier]:.3e})")

fig.tight_layout()
fig.savefig(OUT / "cw_sidebands.png", dpi=150)
print(f"wrote {OUT / 'cw_sidebands.png'}")
