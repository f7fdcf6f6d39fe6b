"""How hot the mechanics may run before thermal noise eats the signal.

The single-cavity benchmark (kappa/2pi = 1 MHz, Omega/2pi = 1 kHz,
g/2pi = 1 Hz, 100 photons) has a lossless sensitivity H0; thermal
occupation of the oscillator subtracts (2 n_bar + 1) H0^2 / (2 Q^2).
The correction stays negligible below T_max = Q^2 hbar Omega / (k_B H0),
about 7.5 K here, which is why a dilution refrigerator is optional for
this parameter set.  The script sweeps temperature and saves the curve.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from omcascade import (
    ThermalParams,
    photon_number,
    qfi_free,
    t_max,
    thermal_correction,
    thermal_occupation,
)
from omcascade.presets import chain_preset

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

cfg, pulse = chain_preset("thermal-checkpoint")
cav = cfg.cavities[0]
omega_m = cfg.signals[0].omega_m
q_amp = cfg.signals[0].amplitude
n_in = photon_number(pulse)

h0 = qfi_free(cav.g, cav.kappa, cav.delta, q_amp, n_in)
tm = t_max(h0, omega_m, q_amp)
print(f"N_in = {n_in:.1f}, H0 = {h0:.6e}")
print(f"T_max = {tm:.4f} K  (validity boundary used by the pipeline: T_max/10)")

temperatures = np.logspace(-3, 2, 200)
rel_corr = []
for temp in temperatures:
    _, rel = thermal_correction(h0, ThermalParams(float(temp), omega_m, q_amp))
    rel_corr.append(rel)

rows = [
    {"temperature_K": float(t), "n_bar": thermal_occupation(omega_m, float(t)),
     "relative_correction": float(r)}
    for t, r in zip(temperatures[::40], rel_corr[::40])
]
(OUT / "thermal_limit.json").write_text(json.dumps(
    {"h0": h0, "t_max_kelvin": tm, "samples": rows}, indent=2) + "\n")

fig, ax = plt.subplots(figsize=(6, 4))
ax.loglog(temperatures, rel_corr)
ax.axvline(tm, color="gray", ls="--", label=f"T_max = {tm:.2f} K")
ax.axvline(tm / 10.0, color="gray", ls=":", label="T_max / 10")
ax.axhline(1.0, color="red", lw=0.8)
ax.set_xlabel("temperature (K)")
ax.set_ylabel("|delta H| / H0")
ax.set_title("thermal correction to the sensitivity")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "thermal_limit.png", dpi=150)
print(f"wrote {OUT / 'thermal_limit.json'} and {OUT / 'thermal_limit.png'}")

# spot checks along the curve
for temp in (0.1, 1.0, float(math.floor(tm))):
    n_bar = thermal_occupation(omega_m, temp)
    _, rel = thermal_correction(h0, ThermalParams(temp, omega_m, q_amp))
    print(f"T = {temp:5.1f} K: n_bar = {n_bar:.3e}, |delta H|/H0 = {rel:.3e}")
