from __future__ import annotations

import csv
import json
import math

import pytest

import omcascade
from omcascade.chain import (
    CavityParams,
    ChainConfig,
    ConstantSignal,
    config_to_dict,
)
from omcascade.cli import main
from omcascade.fields import PulseParams


def run_ok(argv):
    assert main(argv) == 0


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def read_json(path):
    return json.loads(path.read_text())


# ---------------------------------------------------------------------------
# simulate


def test_simulate_preset_writes_artifacts(tmp_path):
    run_ok(["simulate", "--preset", "deep-stroboscopic", "--out", str(tmp_path)])
    sol = read_json(tmp_path / "solution.json")
    assert sol["method"] == "strob-weak"
    assert sol["n_cavities"] == 2
    assert sol["pulse"] == {"beta_bar": 1.0, "tau": 1.0}
    assert sol["final_output_amplitude"]["grid"]["kind"] == "freq"
    assert "per_cavity_fields" not in sol

    rows = read_csv(tmp_path / "spectrum.csv")
    assert rows[0] == ["omega", "power"]
    assert len(rows) > 1000
    assert all(float(p) >= 0.0 for _, p in rows[1:])

    manifest = read_json(tmp_path / "manifest.json")
    assert manifest["command"] == "simulate"
    assert manifest["software_version"] == omcascade.__version__
    assert manifest["outputs"] == ["solution.json", "spectrum.csv"]
    assert len(manifest["config_hash"]) == 64


def test_simulate_config_hash_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_ok(["simulate", "--preset", "deep-stroboscopic", "--out", str(a)])
    run_ok(["simulate", "--preset", "deep-stroboscopic", "--out", str(b)])
    assert read_json(a / "manifest.json")["config_hash"] == read_json(b / "manifest.json")["config_hash"]


def test_simulate_per_cavity_flag(tmp_path):
    run_ok([
        "simulate", "--preset", "deep-stroboscopic", "--per-cavity",
        "--out", str(tmp_path),
    ])
    sol = read_json(tmp_path / "solution.json")
    assert len(sol["per_cavity_fields"]) == 2


def test_simulate_from_config_file(tmp_path):
    cfg = ChainConfig(
        cavities=(CavityParams(kappa=40.0, g=0.5),),
        signals=(ConstantSignal(q0=1.0),),
    )
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(config_to_dict(cfg, PulseParams(beta_bar=1.0, tau=1.0))))
    run_ok(["simulate", "--config", str(path), "--out", str(tmp_path)])
    sol = read_json(tmp_path / "solution.json")
    assert sol["n_cavities"] == 1


def test_simulate_requires_config_or_preset(tmp_path, capsys):
    assert main(["simulate", "--out", str(tmp_path)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["type"] == "ConfigError"
    assert err["error"]["key"] == "config"


def test_simulate_missing_config_file(tmp_path, capsys):
    assert main(["simulate", "--config", str(tmp_path / "nope.json")]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["type"] == "FileNotFoundError"


# ---------------------------------------------------------------------------
# sweep


EXPECTED_SQRT_N_TABLE = """\
N,equal_cavity_ratio,snr_bound,qfi
1,1,nan,nan
2,1.41421356237,nan,nan
3,1.73205080757,nan,nan
4,2,nan,nan
5,2.2360679775,nan,nan
6,2.44948974278,nan,nan
"""


def test_sweep_over_n_without_snr(tmp_path):
    run_ok([
        "sweep", "--preset", "deep-stroboscopic", "--param", "N=1:6",
        "--no-snr", "--out", str(tmp_path),
    ])
    assert (tmp_path / "sweep.csv").read_text() == EXPECTED_SQRT_N_TABLE


def test_sweep_threads_do_not_change_the_table(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    common = ["sweep", "--preset", "deep-stroboscopic", "--param", "N=1:6",
              "--param", "eta=1.0,0.9", "--no-snr"]
    run_ok(common + ["--out", str(a)])
    run_ok(common + ["--out", str(b), "--threads", "2"])
    assert (a / "sweep.csv").read_bytes() == (b / "sweep.csv").read_bytes()


def test_sweep_cartesian_order_and_loss_column(tmp_path):
    run_ok([
        "sweep", "--preset", "deep-stroboscopic", "--param", "eta=1.0,0.9",
        "--param", "N=1:3", "--no-snr", "--out", str(tmp_path),
    ])
    rows = read_csv(tmp_path / "sweep.csv")
    assert rows[0] == ["eta", "N", "equal_cavity_ratio", "snr_bound", "qfi"]
    assert [r[:2] for r in rows[1:]] == [
        ["1", "1"], ["1", "2"], ["1", "3"],
        ["0.9", "1"], ["0.9", "2"], ["0.9", "3"],
    ]
    # eta = 0.9, N = 3 carries the sqrt(3) * 0.9 ratio
    assert float(rows[6][2]) == pytest.approx(math.sqrt(3.0) * 0.9, rel=1e-11)


def test_sweep_snr_column_in_closed_form_regime(tmp_path):
    run_ok([
        "sweep", "--preset", "deep-stroboscopic", "--param", "eta=1.0",
        "--out", str(tmp_path),
    ])
    row = read_csv(tmp_path / "sweep.csv")[1]
    snr, qfi = float(row[2]), float(row[3])
    assert snr == pytest.approx(2.130137e-2, rel=1e-5)
    assert math.sqrt(qfi) == pytest.approx(snr, rel=1e-4)
    manifest = read_json(tmp_path / "manifest.json")
    assert manifest["command"] == "sweep"


def test_sweep_rejects_unknown_parameter(tmp_path, capsys):
    assert main([
        "sweep", "--preset", "deep-stroboscopic", "--param", "bogus=1",
        "--out", str(tmp_path),
    ]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["key"] == "bogus"


def test_sweep_requires_a_parameter(tmp_path, capsys):
    assert main(["sweep", "--preset", "deep-stroboscopic", "--out", str(tmp_path)]) == 2
    assert json.loads(capsys.readouterr().err)["error"]["key"] == "param"


# ---------------------------------------------------------------------------
# compare


def test_compare_on_deep_stroboscopic(tmp_path):
    run_ok(["compare", "--preset", "deep-stroboscopic", "--out", str(tmp_path)])
    rows = read_csv(tmp_path / "compare.csv")
    assert rows[0] == ["method", "rel_l2_vs_direct"]
    table = {name: float(err) for name, err in rows[1:]}
    assert set(table) == {
        "first-order", "strob-weak", "strob-strong", "cw-finite", "cw-continuous"
    }
    # in-regime closed forms track the oracle; the cw forms are off-regime here
    assert table["strob-weak"] < 1e-2
    assert table["strob-strong"] < 1e-2
    assert table["first-order"] < 1e-2
    assert table["cw-finite"] > table["strob-weak"]

    diag = read_json(tmp_path / "diagnostics.json")
    assert diag["recommendation"] == "stroboscopic"
    assert diag["kappa_tau"] == [1000.0, 1000.0]


# ---------------------------------------------------------------------------
# thermal


def test_thermal_checkpoint_at_one_kelvin(tmp_path):
    run_ok([
        "thermal", "--preset", "thermal-checkpoint", "--temperature", "1.0",
        "--out", str(tmp_path),
    ])
    rep = read_json(tmp_path / "thermal.json")
    assert rep["h0"] == pytest.approx(6.399949e-9, rel=1e-6)
    assert rep["n_in"] == pytest.approx(100.0, rel=1e-12)
    assert rep["n_bar"] == pytest.approx(20836618.6, rel=1e-6)
    assert rep["delta_h"] == pytest.approx(-8.534542639413e-10, rel=1e-9)
    assert rep["relative_correction"] == pytest.approx(0.13335329556, rel=1e-9)
    assert rep["t_max_kelvin"] == pytest.approx(7.498877292793, rel=1e-9)
    assert rep["valid"] is False


def test_thermal_defaults_to_zero_temperature(tmp_path):
    run_ok(["thermal", "--preset", "thermal-checkpoint", "--out", str(tmp_path)])
    rep = read_json(tmp_path / "thermal.json")
    assert rep["n_bar"] == 0.0
    assert rep["delta_h"] == pytest.approx(-2.047967e-17, rel=1e-6)
    assert rep["valid"] is True


def test_thermal_rejects_multi_cavity_configs(tmp_path, capsys):
    assert main([
        "thermal", "--preset", "deep-stroboscopic", "--out", str(tmp_path)
    ]) == 2
    assert json.loads(capsys.readouterr().err)["error"]["key"] == "cavities"


# ---------------------------------------------------------------------------
# nopt


EXPECTED_NOPT_TABLE = """\
eta,n_opt,ratio_max,candidate_lo,candidate_hi,candidates_contain_optimum,integer_part_estimate,ratio_estimate
0.5,1,1,1,2,1,1,0.857763884961
0.8,4,1.4310835056,4,5,1,4,1.35624378556
0.9,9,1.9683,9,10,1,9,1.91801835542
0.99,99,6.08053975934,99,100,1,98,6.06530659713
"""


def test_nopt_table_is_reproducible(tmp_path):
    run_ok(["nopt", "--eta", "0.5,0.8,0.9,0.99", "--out", str(tmp_path)])
    assert (tmp_path / "nopt.csv").read_text() == EXPECTED_NOPT_TABLE


# ---------------------------------------------------------------------------
# app


def test_app_lhc_overrides(tmp_path):
    base_dir, far_dir = tmp_path / "base", tmp_path / "far"
    run_ok(["app", "--name", "lhc", "--out", str(base_dir)])
    base = read_json(base_dir / "app.json")
    assert base["a0_m_s2"] == pytest.approx(1.128725624063e-14, rel=1e-12)
    assert base["metadata"]["full_beam_rate_hz"] == 31.2e6

    run_ok([
        "app", "--name", "lhc", "--set", "distance=2.0",
        "--set", "oscillator.mass=2e-6", "--out", str(far_dir),
    ])
    far = read_json(far_dir / "app.json")
    assert far["a0_m_s2"] == pytest.approx(base["a0_m_s2"] / 2.0, rel=1e-12)
    # halving the drive and doubling the mass leaves q_amp / sqrt(2) lower
    assert far["q_amp"] == pytest.approx(base["q_amp"] / math.sqrt(2.0), rel=1e-12)


def test_app_rejects_unknown_preset(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc_info:
        main(["app", "--name", "axion", "--out", str(tmp_path)])
    assert exc_info.value.code == 2
    assert "invalid choice" in capsys.readouterr().err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc_info:
        main(["--version"])
    assert exc_info.value.code == 0
    assert capsys.readouterr().out.strip() == omcascade.__version__
