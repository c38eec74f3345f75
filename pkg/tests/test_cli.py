import csv
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from atomchip.cli import main


def run(*args):
    return main([str(a) for a in args])


def test_report_writes_three_formats(tmp_path, capsys):
    assert run("report", "--out", tmp_path) == 0
    for fmt in ("txt", "json", "csv"):
        assert (tmp_path / f"report.{fmt}").stat().st_size > 0
    rows = list(csv.DictReader((tmp_path / "report.csv").open()))
    assert len(rows) >= 15
    json.loads((tmp_path / "report.json").read_text())


def test_report_single_format_to_stdout(capsys):
    assert run("report", "--format", "json") == 0
    assert json.loads(capsys.readouterr().out)["summary"]["fail"] == 0


def test_missing_config_exit_2(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    assert run("report", "--config", missing) == 2
    assert str(missing) in capsys.readouterr().err


def test_invalid_config_exit_2(tmp_path, default_config, capsys):
    data = default_config.to_dict()
    data["chip"]["trench_width"] = 16
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    assert run("validate-config", "--config", path) == 2
    assert "chip.trench_width" in capsys.readouterr().err


def test_validate_default(capsys):
    assert run("validate-config") == 0
    assert capsys.readouterr().out.startswith("ok")


def test_failing_claim_exit_1(tmp_path, default_config, capsys):
    cfg = default_config.with_value("cloud.temperature", 20)
    path = tmp_path / "hot.json"
    path.write_text(cfg.to_json())
    assert run("report", "--config", path, "--out", tmp_path / "out") == 1
    assert "cloud.length_1e2" in capsys.readouterr().err


def test_blue_trap_exit_1(tmp_path, default_config, capsys):
    path = tmp_path / "blue.json"
    path.write_text(default_config.with_value("dipole_trap.wavelength", 760).to_json())
    assert run("report", "--config", path) == 1
    assert "not a trap" in capsys.readouterr().err


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as info:
        run("report", "--format", "pdf")
    assert info.value.code == 2


def read_sweep(path):
    rows = list(csv.reader(path.open()))
    return rows[0], np.array([[float(x) for x in r] for r in rows[1:]])


def test_sweep_two_points(tmp_path):
    assert run("sweep", "--param", "cloud.temperature", "--min", 1, "--max", 4, "--points", 2,
               "--objective", "cloud.sigma_radial", "--out", tmp_path) == 0
    header, data = read_sweep(tmp_path / "sweep.csv")
    assert header == ["cloud.temperature", "cloud.sigma_radial"]
    assert data.shape == (2, 2)
    assert data[1, 1] / data[0, 1] == pytest.approx(2.0, rel=1e-8)
    assert "plot 'sweep.csv'" in (tmp_path / "sweep.gp").read_text()


def test_sweep_power_gives_sqrt_law(tmp_path):
    assert run("sweep", "--param", "dipole_trap.beam_power_each", "--min", 20, "--max", 320,
               "--points", 4, "--objective", "trap.radial_freq_contrast0", "--out", tmp_path) == 0
    _, data = read_sweep(tmp_path / "sweep.csv")
    assert np.polyfit(np.log(data[:, 0]), np.log(data[:, 1]), 1)[0] == pytest.approx(0.5, abs=1e-6)


def test_sweep_blockade_error_law_parallel(tmp_path, level100):
    out1, out4 = tmp_path / "serial", tmp_path / "parallel"
    args = ("sweep", "--param", "cz.blockade", "--min", 5, "--max", 500, "--points", 4,
            "--objective", "cz.error_optimized")
    assert run(*args, "--out", out1) == 0
    assert run(*args, "--out", out4, "--jobs", 4) == 0
    assert (out1 / "sweep.csv").read_bytes() == (out4 / "sweep.csv").read_bytes()
    _, data = read_sweep(out1 / "sweep.csv")
    b_tau = 2 * math.pi * data[:, 0] * 1e6 * level100.lifetime
    slope = np.polyfit(np.log(b_tau), np.log(data[:, 1]), 1)[0]
    assert slope == pytest.approx(-2 / 3, abs=0.1)


def test_sweep_bad_path_exit_2(capsys):
    assert run("sweep", "--param", "cz.nowhere", "--min", 1, "--max", 2) == 2
    assert "cz.nowhere" in capsys.readouterr().err


def test_sweep_bad_range_exit_2():
    assert run("sweep", "--param", "cz.blockade", "--min", 5, "--max", 1) == 2


def test_simulate_gate_json(capsys):
    assert run("simulate-gate") == 0
    doc = json.loads(capsys.readouterr().out)
    assert 1e-4 <= doc["gate_error"] <= 1e-2
    assert len(doc["pulse_sequence"]) == 3


def test_optimize_pulse_prints_formula_and_simulation(capsys):
    assert run("optimize-pulse", "--format", "json") == 0
    doc = json.loads(capsys.readouterr().out)
    assert 1e-4 <= doc["simulated_error"] <= 1e-2
    assert doc["formula_error"] == pytest.approx(4.82e-4, rel=1e-2)
    assert doc["method"] == "golden"


def test_module_entry_point_deterministic(tmp_path):
    outs = []
    start = time.perf_counter()
    for k in range(2):
        d = tmp_path / str(k)
        res = subprocess.run([sys.executable, "-m", "atomchip", "report", "--out", str(d)],
                             capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
        outs.append({f: (d / f"report.{f}").read_bytes() for f in ("txt", "json", "csv")})
    assert time.perf_counter() - start < 120
    assert outs[0] == outs[1]
