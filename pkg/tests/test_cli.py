import json
import subprocess
import sys

import pytest

from hermitian_ep import output
from hermitian_ep.cli import RunManifest, main, parse_omega_grid
from hermitian_ep.model import ConfigError

SMALL = (
    "system:\n"
    "  coupling: 0.001\n"
    "  reservoir1: {n_modes: 4, freq_step: 0.05, coupling: 0.025}\n"
    "  reservoir2: {n_modes: 4, freq_step: 0.05, coupling: 0.015}\n"
    "  t_max: 200\n"
    "  dt_sample: 2\n"
    "ensemble: {n_states: 30, seed: 11}\n"
    "sweep: {T: 200, start: 0.2, stop: 2.0, steps: 6, dt: 1.0}\n"
)


@pytest.fixture()
def small(tmp_path):
    path = tmp_path / "small.yaml"
    path.write_text(SMALL)
    return path


def test_simulate(small, tmp_path):
    out = tmp_path / "sim"
    assert main(["simulate", "--config", str(small), "--out", str(out), "--svg"]) == 0
    meta, header, rows = output.read_csv(out / "trajectory.csv")
    assert header == output.TRAJECTORY_HEADER
    assert len(rows) == 101
    assert meta["system"]["coupling"] == 0.001 and meta["command"] == "simulate"
    _, rheader, rrows = output.read_csv(out / "reduced.csv")
    assert rheader[-1] == "model" and rrows[0][-1] == "reduced"
    assert (out / "trajectory.svg").read_text().startswith("<?xml")


def test_simulate_full(small, tmp_path):
    out = tmp_path / "full"
    assert main(["simulate", "--config", str(small), "--out", str(out), "--full"]) == 0
    _, header, rows = output.read_csv(out / "trajectory.csv")
    assert header[-2:] == ["re_c4", "im_c4"] and "re_b1" in header
    assert len(rows[0]) == len(header)


def test_sweep_and_determinism(small, tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["sweep", "--config", str(small), "--out", str(a), "--svg"]) == 0
    assert main(["sweep", "--config", str(small), "--out", str(b), "--svg"]) == 0
    assert (a / "sweep.csv").read_bytes() == (b / "sweep.csv").read_bytes()
    assert (a / "sweep.svg").read_bytes() == (b / "sweep.svg").read_bytes()
    _, header, rows = output.read_csv(a / "sweep.csv")
    assert header == output.SWEEP_HEADER and len(rows) == 6
    assert "transition" in capsys.readouterr().out


def test_sweep_overrides(small, tmp_path):
    out = tmp_path / "ov"
    args = ["sweep", "--config", str(small), "--out", str(out), "--seed", "5", "--n-states", "12",
            "--T", "100", "--omega-grid", "0.5:1.5:3", "--model", "reduced"]
    assert main(args) == 0
    meta, _, rows = output.read_csv(out / "sweep.csv")
    assert len(rows) == 3
    assert meta["ensemble"] == {"n_states": 12, "seed": 5, "distribution": "unit_sphere"}
    assert meta["sweep"]["model"] == "reduced" and meta["sweep"]["T"] == 100.0
    assert rows[0][-1] == "5"


def test_sweep_failed_points_exit_nonzero(small, tmp_path, capsys):
    text = SMALL.replace("dt: 1.0}", "dt: 1.0, pole_eps: 2.0}")
    path = tmp_path / "bad.yaml"
    path.write_text(text)
    assert main(["sweep", "--config", str(path), "--out", str(tmp_path / "x")]) == 1
    assert "sweep points failed" in capsys.readouterr().err
    assert (tmp_path / "x" / "sweep.csv").exists()


def test_portrait(tmp_path):
    out = tmp_path / "p"
    assert main(["portrait", "--preset", "fig3a", "--out", str(out), "--svg"]) == 0
    _, header, rows = output.read_csv(out / "portrait.csv")
    assert header == output.PORTRAIT_HEADER and len(rows) == 625
    assert (out / "portrait_traj_5.csv").exists()
    assert (out / "portrait.svg").exists()


def test_reduce(tmp_path, capsys):
    out = tmp_path / "r"
    assert main(["reduce", "--preset", "fig3b", "--out", str(out)]) == 0
    report = json.loads((out / "reduce.json").read_text())
    assert report["ep_coupling"] == pytest.approx(0.01)
    assert report["coalesced"] is True
    assert report["regime"] == "exceptional"
    assert json.loads(capsys.readouterr().out) == report


def test_diagnose(tmp_path, capsys):
    out = tmp_path / "d"
    assert main(["diagnose", "--preset", "fig6b", "--out", str(out)]) == 0
    _, header, rows = output.read_csv(out / "diagnostics.csv")
    assert header == output.DIAGNOSTICS_HEADER
    assert {r[1] for r in rows} == {"1", "2"}
    assert "sync_score:" in (out / "diagnostics.csv").read_text()
    assert "sync score" in capsys.readouterr().out


def test_config_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("system: {coupling: 0.1, oops: 1}\n")
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "system.oops" in capsys.readouterr().err
    assert main(["simulate", "--config", str(tmp_path / "missing.yaml")]) == 2
    assert main(["sweep", "--preset", "fig2", "--out", str(tmp_path)]) == 2
    assert main(["sweep", "--preset", "fig7", "--omega-grid", "1:2"]) == 2


def test_parser_requires_one_source():
    with pytest.raises(SystemExit):
        main(["simulate"])
    with pytest.raises(SystemExit):
        main(["simulate", "--preset", "fig2", "--config", "x.yaml"])
    with pytest.raises(ConfigError):
        RunManifest("simulate")


def test_parse_omega_grid():
    assert parse_omega_grid("0.1:3:30") == {"start": 0.1, "stop": 3.0, "steps": 30, "log": False}
    assert parse_omega_grid("1e-3:1:10:log")["log"] is True
    for bad in ("1:2", "a:b:c", "1:2:3:lin"):
        with pytest.raises(ConfigError):
            parse_omega_grid(bad)


def test_console_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "hermitian_ep.cli", "reduce", "--preset", "fig7", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert res.returncode == 0, res.stderr
    assert "ep_coupling" in res.stdout
