import json
import subprocess
import sys

import pytest

from vaguelab.cli import ConfigError, main, resolve_config, thread_count


def run_cli(args):
    return main(list(args))


def test_resolve_config_defaults():
    cfg = resolve_config({})
    assert cfg["wavelet"] == {"kind": "meyer"}
    assert cfg["build"]["J"] == 3
    assert cfg["counterexample"]["gamma"] == 1.0


def test_resolve_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        resolve_config({"wavlet": {"kind": "meyer"}})
    with pytest.raises(ConfigError):
        resolve_config({"build": {"J": 3, "bogus": 1}})


def test_thread_count_env(monkeypatch):
    monkeypatch.delenv("VAGUELET_LAB_THREADS", raising=False)
    assert thread_count() == 1
    monkeypatch.setenv("VAGUELET_LAB_THREADS", "4")
    assert thread_count() == 4
    monkeypatch.setenv("VAGUELET_LAB_THREADS", "zero")
    with pytest.raises(ConfigError):
        thread_count()
    monkeypatch.setenv("VAGUELET_LAB_THREADS", "0")
    with pytest.raises(ConfigError):
        thread_count()


def test_invalid_thread_env_exits_2(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("VAGUELET_LAB_THREADS", "-3")
    code = run_cli(["counterexample", "--out", str(tmp_path)])
    assert code == 2
    assert "config error" in capsys.readouterr().err


def test_counterexample_flags(tmp_path, capsys):
    code = run_cli(["counterexample", "--out", str(tmp_path),
                    "--gamma", "1.0", "--jmin", "6", "--jmax", "12",
                    "--alpha1", "0.5"])
    assert code == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    report = json.loads((tmp_path / "counterexample_report.json").read_text())
    assert report["verdict"]["violation"] is True
    assert abs(report["verdict"]["slope"] + 0.5) < 0.05
    csv_lines = (tmp_path / "counterexample.csv").read_text().splitlines()
    assert csv_lines[0] == "j,scaled_norm,scaled_peak,ratio"
    assert len(csv_lines) == 1 + 7  # header + levels 6..12


def test_malformed_json_exits_2_no_outputs(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text("{ not json")
    out_dir = tmp_path / "out"
    out_dir.mkdir()
    code = run_cli(["counterexample", "--config", str(cfg_path),
                    "--out", str(out_dir)])
    assert code == 2
    assert "config error" in capsys.readouterr().err
    assert list(out_dir.iterdir()) == []


def test_unknown_key_exits_2_no_outputs(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"counterexample": {"gama": 1.0}}))
    out_dir = tmp_path / "out"
    out_dir.mkdir()
    code = run_cli(["counterexample", "--config", str(cfg_path),
                    "--out", str(out_dir)])
    assert code == 2
    assert list(out_dir.iterdir()) == []


def test_bad_config_value_exits_2(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"counterexample": {"gamma": -1.0}}))
    code = run_cli(["counterexample", "--config", str(cfg_path),
                    "--out", str(tmp_path / "out")])
    assert code == 2


def test_build_outputs(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"build": {"J": 1, "K": 2}}))
    code = run_cli(["build", "--config", str(cfg_path),
                    "--out", str(tmp_path / "out")])
    assert code == 0
    out = tmp_path / "out"
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["wavelet"] == {"kind": "meyer"}
    assert manifest["grid"]["n"] == 2**16
    # approx level 0 + wavelet levels 0..1, shifts -2..2, two sides
    assert len(manifest["indices"]) == 2 * 3 * 5
    assert all({"j", "k", "side", "role", "norm", "log_norm"} == set(r)
               for r in manifest["indices"])
    assert (out / "member_primal_wavelet_j0.csv").exists()
    assert (out / "member_dual_approximation_j0.json").exists()
    report = json.loads((out / "build_report.json").read_text())
    assert report["pass"] is True
    assert report["schema"] == "1"


def test_simulate_paths_csv(tmp_path):
    code = run_cli(["simulate", "--out", str(tmp_path), "--paths", "2",
                    "--levels", "2", "--shifts", "4", "--seed", "7"])
    assert code == 0
    lines = (tmp_path / "paths.csv").read_text().splitlines()
    assert lines[0].startswith("t=")
    assert len(lines) == 3  # header + 2 paths
    manifest = json.loads((tmp_path / "paths_manifest.json").read_text())
    assert manifest["n_paths"] == 2
    assert manifest["seed"] == 7


def test_simulate_inline_filter_spec(tmp_path):
    code = run_cli(["simulate", "--out", str(tmp_path), "--paths", "1",
                    "--levels", "1", "--shifts", "2",
                    "--filter", '{"kind": "fractional", "d": 0.7}'])
    assert code == 0
    manifest = json.loads((tmp_path / "paths_manifest.json").read_text())
    assert manifest["filters"]["h2"]["kind"] == "fractional"


def test_simulate_bad_inline_spec_exits_2(tmp_path, capsys):
    code = run_cli(["simulate", "--out", str(tmp_path),
                    "--filter", '{"kind": '])
    assert code == 2
    code = run_cli(["simulate", "--out", str(tmp_path),
                    "--filter", "nosuchfilter"])
    assert code == 2


def test_reports_byte_reproducible(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert run_cli(["counterexample", "--out", str(out)]) == 0
    rep1 = json.loads((out1 / "counterexample_report.json").read_text())
    rep2 = json.loads((out2 / "counterexample_report.json").read_text())
    # identical checks and hash modulo the differing output path
    for rep, out in ((rep1, out1), (rep2, out2)):
        assert rep["config"]["output_dir"] == str(out)
        rep["config"]["output_dir"] = "X"
        rep.pop("config_hash")
    assert rep1 == rep2
    # same destination twice: byte-identical file
    assert run_cli(["counterexample", "--out", str(out1)]) == 0
    text1 = (out1 / "counterexample_report.json").read_bytes()
    assert run_cli(["counterexample", "--out", str(out1)]) == 0
    assert (out1 / "counterexample_report.json").read_bytes() == text1


def test_failing_check_exits_1(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "filters": {"h1": {"kind": "exp_gamma", "gamma": 1.0},
                    "h2": {"kind": "exp_gamma", "gamma": 1.0}},
        "vaguelet": {"j_min": 0, "j_max": 5, "sides": ["primal"],
                     "synthesis_J": 2, "synthesis_K": 4},
    }))
    code = run_cli(["verify-vaguelet", "--config", str(cfg_path),
                    "--out", str(tmp_path / "out")])
    assert code == 1
    assert "FAIL" in capsys.readouterr().out
    report = json.loads(
        (tmp_path / "out" / "vaguelet_report.json").read_text())
    assert report["pass"] is False


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "vaguelab.cli", "counterexample",
         "--out", str(tmp_path), "--gamma", "2.0"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
