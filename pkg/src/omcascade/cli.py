"""Batch front-end: config in, JSON/CSV artifacts out.

Verbs:
  simulate   solve one config with a chosen method, write solution + spectrum
  sweep      grid over (eta, N, g, kappa, delta, tau), write a CSV table
  compare    relative L2 error of every closed form against the oracle
  thermal    single-cavity thermal sensitivity pipeline (H0, n_bar, T_max)
  nopt       loss-optimal cascade length for a list of eta values
  app        evaluate a physical scenario preset (dm, gw, lhc)

Every run writes a manifest.json recording the command, a sha256 hash of
the fully resolved configuration, the package version, and the list of
output files.  Floats in CSV files are fixed at 12 significant digits so
identical configs produce byte-identical tables.  Exit codes: 0 success,
2 configuration error, 3 numerical failure; errors are reported as a
JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .chain import (
    ConfigError,
    REGIME_NUMERIC_ONLY,
    REGIME_STROBOSCOPIC,
    config_to_dict,
    diagnose_regime,
    load_config,
    mech_time_profile,
)
from .fields import GridError, photon_number
from .metrology import (
    NumericsError,
    equal_cavity_ratio,
    optimal_n_report,
    qfi_free,
    snr_bound,
    t_max,
    thermal_correction,
    thermal_occupation,
    ThermalParams,
)
from .presets import CHAIN_PRESET_NAMES, chain_preset, comparison_grid
from .solver import (
    ALL_METHODS,
    METHOD_DIRECT,
    export_power_csv,
    method_for_regime,
    rel_l2_diff,
    solution_spectrum,
    solution_to_json_obj,
    solve,
    solve_direct,
)
from .applications import PRESET_NAMES, evaluate_preset


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _canonical_hash(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _write_manifest(out_dir: Path, command: str, resolved, outputs) -> dict:
    manifest = {
        "command": command,
        "config_hash": _canonical_hash(resolved),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "software_version": __version__,
        "outputs": sorted(str(p.name) for p in outputs),
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _resolve_chain(args):
    if getattr(args, "preset", None):
        cfg, pulse = chain_preset(args.preset)
        return cfg, pulse, comparison_grid(args.preset)
    if args.config is None:
        raise ConfigError("either --config or --preset is required", key="config")
    cfg, pulse = load_config(args.config)
    return cfg, pulse, None


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


# ---------------------------------------------------------------------------
# verbs


def cmd_simulate(args) -> int:
    cfg, pulse, grid = _resolve_chain(args)
    out = _out_dir(args)
    sol = solve(cfg, pulse, method=args.method, grid=grid)
    spectrum = solution_spectrum(sol)
    sol_path = out / "solution.json"
    sol_obj = solution_to_json_obj(sol, include_per_cavity=args.per_cavity)
    sol_obj["pulse"] = {"beta_bar": pulse.beta_bar, "tau": pulse.tau}
    sol_path.write_text(json.dumps(sol_obj) + "\n")
    csv_path = out / "spectrum.csv"
    export_power_csv(spectrum, csv_path)
    _write_manifest(
        out, "simulate", config_to_dict(cfg, pulse), [sol_path, csv_path]
    )
    return 0


_SWEEP_PARAMS = ("eta", "N", "g", "kappa", "delta", "tau")


def _parse_sweep_param(text: str):
    if "=" not in text:
        raise ConfigError(f"sweep parameter {text!r} must look like name=v1,v2",
                          key="param")
    name, _, body = text.partition("=")
    name = name.strip()
    if name not in _SWEEP_PARAMS:
        raise ConfigError(f"unknown sweep parameter {name!r}", key=name)
    body = body.strip()
    if name == "N":
        if ":" in body:
            lo, _, hi = body.partition(":")
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(v) for v in body.split(",") if v]
    else:
        values = [float(v) for v in body.split(",") if v]
    if not values:
        raise ConfigError(f"sweep parameter {name!r} has no values", key=name)
    return name, values


def _apply_overrides(cfg, pulse, point: dict):
    if "N" in point:
        n = point["N"]
        if n < 1:
            raise ConfigError("N must be >= 1", key="N")
        cfg = dataclasses.replace(
            cfg, cavities=(cfg.cavities[0],) * n, signals=(cfg.signals[0],) * n
        )
    cav_over = {k: point[k] for k in ("g", "kappa", "delta") if k in point}
    if cav_over:
        cfg = dataclasses.replace(
            cfg,
            cavities=tuple(dataclasses.replace(c, **cav_over) for c in cfg.cavities),
        )
    if "eta" in point:
        cfg = dataclasses.replace(cfg, eta=point["eta"])
    if "tau" in point:
        pulse = dataclasses.replace(pulse, tau=point["tau"])
    return cfg, pulse


def _sweep_row(base_cfg, base_pulse, names, values, with_snr):
    point = dict(zip(names, values))
    cfg, pulse = _apply_overrides(base_cfg, base_pulse, point)
    ratio = equal_cavity_ratio(cfg.n_cavities, cfg.eta)
    snr = qfi = math.nan
    if with_snr:
        regime = diagnose_regime(cfg, pulse.tau).recommendation
        if regime != REGIME_NUMERIC_ONLY:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                report = snr_bound(cfg, pulse, regime)
            snr, qfi = report.snr_bound, report.qfi
    return list(values) + [ratio, snr, qfi]


def cmd_sweep(args) -> int:
    cfg, pulse, _ = _resolve_chain(args)
    if not args.param:
        raise ConfigError("sweep needs at least one --param", key="param")
    parsed = [_parse_sweep_param(p) for p in args.param]
    names = [name for name, _ in parsed]
    if len(set(names)) != len(names):
        raise ConfigError("duplicate sweep parameter", key="param")
    grids = [vals for _, vals in parsed]
    points = [[]]
    for vals in grids:
        points = [p + [v] for p in points for v in vals]
    work = lambda vals: _sweep_row(cfg, pulse, names, vals, args.snr)
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(work, points))
    else:
        rows = [work(vals) for vals in points]
    out = _out_dir(args)
    csv_path = out / "sweep.csv"
    _write_csv(csv_path, names + ["equal_cavity_ratio", "snr_bound", "qfi"], rows)
    resolved = {
        "config": config_to_dict(cfg, pulse),
        "sweep": {name: vals for name, vals in parsed},
        "with_snr": bool(args.snr),
    }
    _write_manifest(out, "sweep", resolved, [csv_path])
    return 0


def cmd_compare(args) -> int:
    cfg, pulse, grid = _resolve_chain(args)
    out = _out_dir(args)
    diag = diagnose_regime(cfg, pulse.tau)
    reference = solve_direct(cfg, pulse, grid)
    ref_spectrum = solution_spectrum(reference)
    rows = []
    for method in ALL_METHODS:
        if method == METHOD_DIRECT:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            candidate = solve(cfg, pulse, method, ref_spectrum.grid)
        err = rel_l2_diff(candidate.per_cavity_fields[-1], ref_spectrum)
        rows.append([method, err])
    csv_path = out / "compare.csv"
    _write_csv(csv_path, ["method", "rel_l2_vs_direct"], rows)
    diag_path = out / "diagnostics.json"
    diag_path.write_text(json.dumps(diag.as_dict(), indent=2) + "\n")
    _write_manifest(out, "compare", config_to_dict(cfg, pulse), [csv_path, diag_path])
    return 0


def cmd_thermal(args) -> int:
    cfg, pulse, _ = _resolve_chain(args)
    if cfg.n_cavities != 1:
        raise ConfigError(
            "thermal pipeline expects a single-cavity config", key="cavities"
        )
    diag = diagnose_regime(cfg, pulse.tau)
    if diag.recommendation != REGIME_STROBOSCOPIC:
        raise ConfigError(
            f"thermal pipeline expects a stroboscopic config, diagnostics "
            f"recommend {diag.recommendation}",
            key="signals",
        )
    cav = cfg.cavities[0]
    sig = cfg.signals[0]
    q_amp = float(mech_time_profile(sig, np.array(0.0)))
    omega_m = sig.center_frequency()
    if omega_m <= 0:
        raise ConfigError(
            "thermal pipeline needs a signal with positive center frequency",
            key="omega_m",
        )
    n_in = photon_number(pulse)
    h0 = qfi_free(cav.g, cav.kappa, cav.delta, q_amp, n_in)
    temperature = args.temperature
    thermal = ThermalParams(temperature=temperature, omega_m=omega_m, q_amp=q_amp)
    delta_h, rel = thermal_correction(h0, thermal)
    tm = t_max(h0, omega_m, q_amp)
    report = {
        "h0": h0,
        "n_in": n_in,
        "q_amp": q_amp,
        "omega_m": omega_m,
        "temperature": temperature,
        "n_bar": thermal_occupation(omega_m, temperature),
        "delta_h": delta_h,
        "relative_correction": rel,
        "t_max_kelvin": tm,
        "valid": temperature <= tm / 10.0,
    }
    out = _out_dir(args)
    path = out / "thermal.json"
    path.write_text(json.dumps(report, indent=2) + "\n")
    _write_manifest(out, "thermal", config_to_dict(cfg, pulse), [path])
    return 0


def cmd_nopt(args) -> int:
    etas = [float(v) for v in args.eta.split(",") if v]
    if not etas:
        raise ConfigError("nopt needs at least one eta", key="eta")
    rows = []
    for eta in etas:
        rep = optimal_n_report(eta)
        rows.append([
            eta,
            rep["n_opt"],
            rep["ratio_max"],
            rep["candidates"][0],
            rep["candidates"][-1],
            int(rep["candidates_contain_optimum"]),
            rep["integer_part_estimate"],
            rep["ratio_estimate"],
        ])
    out = _out_dir(args)
    csv_path = out / "nopt.csv"
    _write_csv(
        csv_path,
        ["eta", "n_opt", "ratio_max", "candidate_lo", "candidate_hi",
         "candidates_contain_optimum", "integer_part_estimate", "ratio_estimate"],
        rows,
    )
    _write_manifest(out, "nopt", {"eta": etas}, [csv_path])
    return 0


def _parse_set(text: str):
    if "=" not in text:
        raise ConfigError(f"override {text!r} must look like key=value", key="set")
    key, _, value = text.partition("=")
    try:
        parsed = float(value)
    except ValueError:
        parsed = value
    return key.strip(), parsed


def cmd_app(args) -> int:
    overrides = {}
    for item in args.set or []:
        key, value = _parse_set(item)
        if "." in key:
            outer, inner = key.split(".", 1)
            overrides.setdefault(outer, {})[inner] = value
        else:
            overrides[key] = value
    result = evaluate_preset(args.name, overrides)
    out = _out_dir(args)
    path = out / "app.json"
    path.write_text(json.dumps(result, indent=2) + "\n")
    _write_manifest(out, "app", {"name": args.name, "overrides": overrides}, [path])
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="config file (JSON or YAML)")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=None,
                        help="reserved for future stochastic extensions")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for sweeps")

    parser = argparse.ArgumentParser(
        prog="omcascade",
        description="cascaded optomechanical sensing: solvers and bounds",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("simulate", parents=[common],
                       help="solve one configuration")
    p.add_argument("--method", default="auto", choices=("auto",) + ALL_METHODS)
    p.add_argument("--preset", default=None, choices=CHAIN_PRESET_NAMES)
    p.add_argument("--per-cavity", action="store_true",
                   help="include every intermediate field in solution.json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", parents=[common],
                       help="tabulate ratio/snr/qfi over a parameter grid")
    p.add_argument("--param", action="append", default=[],
                   metavar="NAME=V1,V2|N=LO:HI",
                   help="sweep axis; repeatable; N accepts LO:HI ranges")
    p.add_argument("--preset", default=None, choices=CHAIN_PRESET_NAMES)
    p.add_argument("--snr", action=argparse.BooleanOptionalAction, default=True,
                   help="evaluate closed-form snr/qfi per grid point")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", parents=[common],
                       help="closed forms against the time-domain oracle")
    p.add_argument("--preset", default=None, choices=CHAIN_PRESET_NAMES)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("thermal", parents=[common],
                       help="thermal sensitivity limits of a single cavity")
    p.add_argument("--preset", default=None, choices=CHAIN_PRESET_NAMES)
    p.add_argument("--temperature", type=float, default=0.0, help="kelvin")
    p.set_defaults(func=cmd_thermal)

    p = sub.add_parser("nopt", parents=[common],
                       help="loss-optimal cascade length")
    p.add_argument("--eta", required=True, help="comma-separated eta values")
    p.set_defaults(func=cmd_nopt)

    p = sub.add_parser("app", parents=[common],
                       help="physical scenario presets")
    p.add_argument("--name", required=True, choices=PRESET_NAMES)
    p.add_argument("--set", action="append", default=[],
                   metavar="KEY=VALUE", help="override a preset constant")
    p.set_defaults(func=cmd_app)
    return parser


def _error_json(exc: Exception) -> str:
    payload = {
        "error": {
            "type": type(exc).__name__,
            "message": str(exc),
            "key": getattr(exc, "key", None),
        }
    }
    return json.dumps(payload)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GridError, FileNotFoundError, KeyError, ValueError) as exc:
        print(_error_json(exc), file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(_error_json(exc), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
