import json
import math
import subprocess
import sys

import pytest

from descriptorsim.cli import (
    ConfigError,
    RunConfig,
    execute_and_report,
    main,
    parse_config,
)


def run_main(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParseConfig:
    def test_defaults(self):
        cfg = parse_config(["run", "bell"])
        assert cfg == RunConfig(experiment="bell")
        assert cfg.theta == 0.0
        assert cfg.phi == pytest.approx(math.pi / 4)
        assert cfg.format == "table"

    def test_explicit_angles(self):
        cfg = parse_config(["run", "bell", "--theta", "0", "--phi", "0.7853981634"])
        assert cfg.phi == pytest.approx(math.pi / 4, abs=1e-9)

    def test_presets_map_to_strategy_angles(self):
        cfg = parse_config(["run", "bell", "--preset", "chsh-11"])
        assert cfg.theta == pytest.approx(math.pi / 2)
        assert cfg.phi == pytest.approx(-math.pi / 4)

    def test_preset_conflicts_with_angles(self):
        with pytest.raises(ConfigError):
            parse_config(["run", "bell", "--preset", "chsh-00", "--theta", "1"])

    def test_config_file_key_value(self, tmp_path):
        path = tmp_path / "cfg.txt"
        path.write_text("theta=0.5\nphi=0.25\nformat=csv\n# comment\n")
        cfg = parse_config(["run", "bell", "--config", str(path)])
        assert (cfg.theta, cfg.phi, cfg.format) == (0.5, 0.25, "csv")

    def test_config_file_json(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"seed": 9, "tolerance": 1e-7}))
        cfg = parse_config(["run", "decoherence", "--config", str(path)])
        assert cfg.seed == 9 and cfg.tolerance == 1e-7

    def test_cli_overrides_config_file(self, tmp_path):
        path = tmp_path / "cfg.txt"
        path.write_text("theta=0.5\n")
        cfg = parse_config(["run", "bell", "--theta", "0.9", "--config", str(path)])
        assert cfg.theta == 0.9

    def test_unknown_config_key_rejected(self, tmp_path):
        path = tmp_path / "cfg.txt"
        path.write_text("volume=11\n")
        with pytest.raises(ConfigError):
            parse_config(["run", "bell", "--config", str(path)])

    def test_env_var_tolerance_fallback(self, monkeypatch):
        monkeypatch.setenv("DESCRIPTOR_SIM_TOLERANCE", "1e-5")
        assert parse_config(["run", "bell"]).tolerance == 1e-5
        assert (
            parse_config(["run", "bell", "--tolerance", "1e-7"]).tolerance == 1e-7
        )

    def test_bad_env_var_rejected(self, monkeypatch):
        monkeypatch.setenv("DESCRIPTOR_SIM_TOLERANCE", "soft")
        with pytest.raises(ConfigError):
            parse_config(["run", "bell"])

    def test_experiment_conflict_with_config_file(self, tmp_path):
        path = tmp_path / "cfg.txt"
        path.write_text("experiment=chsh\n")
        with pytest.raises(ConfigError):
            parse_config(["run", "bell", "--config", str(path)])


class TestExitCodes:
    def test_unknown_experiment_exits_two(self, capsys):
        code, _, _ = run_main(capsys, "run", "bogus")
        assert code == 2

    def test_malformed_number_exits_two(self, capsys):
        code, _, _ = run_main(capsys, "run", "bell", "--theta", "abc")
        assert code == 2

    def test_conflicting_flags_exit_two(self, capsys):
        code, _, err = run_main(capsys, "run", "bell", "--preset", "chsh-00", "--phi", "1")
        assert code == 2
        assert "conflict" in err

    def test_pass_exits_zero(self, capsys):
        code, out, _ = run_main(capsys, "run", "bell", "--format", "csv")
        assert code == 0

    def test_residual_violation_exits_one(self, capsys):
        code, out, _ = run_main(capsys, "run", "bell", "--tolerance", "1e-20")
        assert code == 1
        assert "FAIL" in out


class TestReports:
    def test_bell_csv_has_four_rows(self, capsys):
        code, out, _ = run_main(
            capsys, "run", "bell", "--theta", "0", "--phi", "0.7853981634",
            "--format", "csv",
        )
        lines = out.strip().splitlines()
        assert lines[0] == "branch,measure,expected,residual"
        assert len(lines) == 5
        branches = [line.split(",")[0] for line in lines[1:]]
        assert branches == ["00", "01", "10", "11"]
        measure = float(lines[1].split(",")[1])
        assert measure == pytest.approx(math.cos(math.pi / 8) ** 2 / 2, abs=1e-9)

    def test_chsh_json_contains_rates(self, capsys):
        code, out, _ = run_main(capsys, "run", "chsh", "--format", "json")
        assert code == 0
        assert '"win_rate": 0.8535533906' in out
        assert '"classical_bound": 0.75' in out
        doc = json.loads(out)
        assert doc["pass"] is True

    def test_json_report_is_deterministic(self, capsys):
        args = ("run", "decoherence", "--seed", "5", "--format", "json")
        _, first, _ = run_main(capsys, *args)
        _, second, _ = run_main(capsys, *args)
        assert first == second

    def test_csv_report_is_deterministic(self, capsys):
        args = ("run", "bell", "--theta", "0.31", "--phi", "-0.7", "--format", "csv")
        _, first, _ = run_main(capsys, *args)
        _, second, _ = run_main(capsys, *args)
        assert first == second

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "report.csv"
        code, out, _ = run_main(
            capsys, "run", "bell", "--format", "csv", "--output", str(target)
        )
        assert code == 0
        assert out == ""
        assert target.read_text().startswith("branch,measure,expected,residual")

    def test_wigner_table(self, capsys):
        code, out, _ = run_main(capsys, "run", "wigner", "--theta", "0")
        assert code == 0
        assert "p_bob1_given_alice0 = 1" in out
        assert "PASS" in out

    def test_nonisomorphism_passes(self, capsys):
        code, out, _ = run_main(capsys, "run", "nonisomorphism", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        section = doc["experiments"][0]
        assert section["checks"]["descriptors_differ"] is True

    def test_run_all_aggregates(self, capsys):
        code, out, _ = run_main(
            capsys, "run", "all", "--seed", "7",
            "--chain-alice", "0", "--chain-bob", "0", "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        names = [s["experiment"] for s in doc["experiments"]]
        assert names == ["bell", "chsh", "decoherence", "chain", "wigner", "nonisomorphism"]
        assert doc["pass"] is True

    def test_all_csv_gains_experiment_column(self, capsys):
        code, out, _ = run_main(
            capsys, "run", "all", "--chain-alice", "0", "--chain-bob", "0",
            "--format", "csv",
        )
        lines = out.strip().splitlines()
        assert lines[0] == "experiment,branch,measure,expected,residual"
        assert lines[1].startswith("bell,")


class TestShellLevel:
    @pytest.mark.parametrize(
        "args,expected",
        [
            (["run", "nonisomorphism", "--format", "csv"], 0),
            (["run", "bell", "--tolerance", "1e-20"], 1),
            (["run", "bell", "--theta", "abc"], 2),
        ],
    )
    def test_exit_codes_from_a_real_process(self, args, expected):
        proc = subprocess.run(
            [sys.executable, "-m", "descriptorsim.cli"] + args,
            capture_output=True,
        )
        assert proc.returncode == expected


class TestExecuteAndReport:
    def test_returns_code_and_text(self):
        code, text = execute_and_report(RunConfig(experiment="bell", format="csv"))
        assert code == 0
        assert text.startswith("branch,measure,expected,residual")

    def test_bad_runconfig_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig(experiment="bell", format="yaml")
        with pytest.raises(ConfigError):
            RunConfig(experiment="nope")
        with pytest.raises(ConfigError):
            RunConfig(experiment="bell", tolerance=-1)
