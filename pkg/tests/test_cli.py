import json
import subprocess
import sys

import pytest

from nlo_quanta import cli


def run_cli(args, **kwargs):
    return subprocess.run([sys.executable, "-m", "nlo_quanta.cli", *args],
                          capture_output=True, text=True, timeout=300, **kwargs)


class TestArgHandling:
    def test_no_command_is_usage_error(self):
        assert run_cli([]).returncode == cli.EXIT_USAGE

    def test_unknown_command_is_usage_error(self):
        proc = run_cli(["frobnicate"])
        assert proc.returncode == cli.EXIT_USAGE
        assert "unknown command" in proc.stderr

    def test_empty_config_is_usage_error(self, tmp_path):
        cfg = tmp_path / "empty.ini"
        cfg.write_text("")
        proc = run_cli(["--config", str(cfg)])
        assert proc.returncode == cli.EXIT_USAGE

    def test_missing_config_is_usage_error(self, tmp_path):
        proc = run_cli(["--config", str(tmp_path / "nope.ini")])
        assert proc.returncode == cli.EXIT_USAGE


class TestConfigValidation:
    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[squeeze]\nn_pump = 100\nbogus_knob = 3\n")
        proc = run_cli(["squeeze", "--config", str(cfg), "--out", str(tmp_path / "o")])
        assert proc.returncode == cli.EXIT_CONFIG
        assert "bogus_knob" in proc.stderr

    def test_unknown_section_rejected(self, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[squeeze]\nn_pump = 100\n[typo_section]\nx = 1\n")
        proc = run_cli(["squeeze", "--config", str(cfg), "--out", str(tmp_path / "o")])
        assert proc.returncode == cli.EXIT_CONFIG

    def test_command_mismatch_rejected(self, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[run]\ncommand = kerr\n")
        proc = run_cli(["squeeze", "--config", str(cfg), "--out", str(tmp_path / "o")])
        assert proc.returncode == cli.EXIT_CONFIG

    def test_bad_parameter_value_rejected(self, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[squeeze]\nn_pump = -5\n")
        proc = run_cli(["squeeze", "--config", str(cfg), "--out", str(tmp_path / "o")])
        assert proc.returncode == cli.EXIT_CONFIG

    def test_command_from_config_run_section(self, tmp_path):
        cfg = tmp_path / "ok.ini"
        cfg.write_text("[run]\ncommand = entangle\n[entangle]\npoints = 33\n")
        proc = run_cli(["--config", str(cfg), "--out", str(tmp_path / "o")])
        assert proc.returncode == cli.EXIT_OK


class TestOutputs:
    def test_squeeze_outputs(self, tmp_path):
        out = tmp_path / "out"
        proc = run_cli(["squeeze", "--out", str(out)])
        assert proc.returncode == cli.EXIT_OK
        csv_text = (out / "squeeze.csv").read_text()
        assert csv_text.startswith("# nlo-quanta")
        assert "# config_hash:" in csv_text
        header = csv_text.splitlines()[2]
        assert "u [dimensionless]" in header
        meta = json.loads((out / "squeeze_meta.json").read_text())
        assert meta["command"] == "squeeze"
        assert abs(meta["summary"]["var_min"] - 1.25e-3) < 1e-12
        assert "wall_time_s" in meta

    def test_deterministic_csv(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert run_cli(["downconv", "--out", str(out1)]).returncode == 0
        assert run_cli(["downconv", "--out", str(out2)]).returncode == 0
        assert (out1 / "downconv.csv").read_bytes() == (out2 / "downconv.csv").read_bytes()

    def test_oscillator_squeezing_endpoint(self, tmp_path):
        out = tmp_path / "osc"
        cfg = tmp_path / "osc.ini"
        cfg.write_text("[oscillator]\nratio_max = 0.999\npoints = 20\n")
        proc = run_cli(["oscillator", "--config", str(cfg), "--out", str(out)])
        assert proc.returncode == cli.EXIT_OK
        rows = [line for line in (out / "oscillator.csv").read_text().splitlines()
                if line and not line.startswith("#")][1:]
        last = rows[-1].split(",")
        assert abs(float(last[4]) - 0.125) < 1e-3  # squeezing column -> 1/8

    def test_entangle_minimum_summary(self, tmp_path):
        out = tmp_path / "ent"
        proc = run_cli(["entangle", "--out", str(out)])
        assert proc.returncode == cli.EXIT_OK
        meta = json.loads((out / "entangle_meta.json").read_text())
        assert abs(meta["summary"]["min_duan_sum"] - meta["summary"]["analytic_min"]) < 1e-3

    def test_downconv_exponent_summary(self, tmp_path):
        out = tmp_path / "dc"
        proc = run_cli(["downconv", "--out", str(out)])
        assert proc.returncode == cli.EXIT_OK
        meta = json.loads((out / "downconv_meta.json").read_text())
        assert abs(meta["summary"]["fitted_decay_exponent"] - 2.0) < 0.1

    def test_soliton_outputs(self, tmp_path):
        out = tmp_path / "sol"
        cfg = tmp_path / "sol.ini"
        cfg.write_text("[soliton]\ngrid_points = 512\nperiods = 0.25\nsnapshots = 3\n")
        proc = run_cli(["soliton", "--config", str(cfg), "--out", str(out)])
        assert proc.returncode == cli.EXIT_OK
        for name in ("soliton_profile.csv", "soliton_peak.csv",
                     "soliton_mean_field_peak.csv", "soliton_meta.json"):
            assert (out / name).exists()


class TestValidateCommand:
    def test_fast_tier(self, tmp_path):
        out = tmp_path / "val"
        proc = run_cli(["validate", "--fast", "--out", str(out)])
        assert proc.returncode == cli.EXIT_OK
        matrix = json.loads((out / "validate_matrix.json").read_text())
        assert matrix["all_passed"] is True
        assert sorted(int(k) for k in matrix["criteria"]) == sorted(cli.validation.FAST_CRITERIA)
        assert "PASS" in proc.stdout

    def test_refuses_mismatched_replay(self, tmp_path):
        out = tmp_path / "val"
        out.mkdir()
        (out / "validate_matrix.json").write_text(json.dumps({"config_hash": "deadbeef"}))
        proc = run_cli(["validate", "--fast", "--out", str(out)])
        assert proc.returncode == cli.EXIT_CONFIG
        assert "refusing" in proc.stderr

    def test_threads_env_fallback(self, tmp_path):
        out = tmp_path / "val"
        import os

        env = dict(os.environ, NLO_QUANTA_THREADS="2")
        proc = subprocess.run(
            [sys.executable, "-m", "nlo_quanta.cli", "validate", "--fast",
             "--out", str(out)],
            capture_output=True, text=True, timeout=300, env=env)
        assert proc.returncode == cli.EXIT_OK
