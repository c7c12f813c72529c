"""Command-line interface: subcommands, formats, exit codes, determinism."""

import csv
import io
import json

import pytest

from rmsphase import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


LIVE = [1, 2, 5, 6, 8, 9, 10, 13, 14, 16]
FAST = ("--nodes", "32")


class TestTable:
    def test_csv_rows_and_header(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--format", "csv", *FAST)
        assert code == cli.EXIT_OK
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == list(cli.CSV_COLUMNS)
        assert [int(r[0]) for r in rows[1:]] == LIVE
        assert all(r[4] == "true" for r in rows[1:])

    def test_reference_frequencies(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--format", "csv", *FAST)
        rows = {int(r[0]): r for r in list(csv.reader(io.StringIO(out)))[1:]}
        assert float(rows[1][1]) == pytest.approx(240.4e6)
        assert float(rows[2][1]) == pytest.approx(89.6e6)
        assert float(rows[8][1]) == pytest.approx(334.02e6)

    def test_byte_identical_reruns(self, capsys):
        _, out1, _ = run_cli(capsys, "table", "--format", "csv", *FAST)
        _, out2, _ = run_cli(capsys, "table", "--format", "csv", *FAST)
        assert out1 == out2

    def test_json_schema(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--format", "json", *FAST)
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        assert len(payload["rows"]) == 10
        row = payload["rows"][0]
        assert set(row) == {"j", "omega_hz", "gamma_over_r2", "method",
                            "converged", "dimensionless_value", "si_prefactor"}
        assert payload["config"]["nodes"] == 32

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "table.csv"
        code, out, _ = run_cli(capsys, "table", "--format", "csv",
                               "--out", str(target), *FAST)
        assert code == cli.EXIT_OK
        assert out == ""
        assert target.read_text().startswith("j,omega_hz")

    def test_dimensionless_mode(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--format", "json",
                               "--dimensionless", *FAST)
        payload = json.loads(out)
        assert all(r["si_prefactor"] == 1.0 for r in payload["rows"])


class TestPhase:
    def test_live_state(self, capsys):
        code, out, _ = run_cli(capsys, "phase", "--state", "1", *FAST)
        assert code == cli.EXIT_OK
        assert "gamma/r^2" in out

    def test_null_state_reports_zero(self, capsys):
        code, out, _ = run_cli(capsys, "phase", "--state", "3", *FAST)
        assert code == cli.EXIT_OK
        assert "vanishes identically" in out
        assert "l < n" in out

    def test_rapidity_null_state(self, capsys):
        code, out, _ = run_cli(capsys, "phase", "--state", "7", *FAST)
        assert code == cli.EXIT_OK
        assert "m < n" in out

    def test_dimensionless_output(self, capsys):
        code, out, _ = run_cli(capsys, "phase", "--state", "1",
                               "--dimensionless", *FAST)
        assert code == cli.EXIT_OK
        assert "dimensionless" in out
        assert "prefactor" in out

    def test_loop_method(self, capsys):
        code, out, _ = run_cli(capsys, "phase", "--state", "1", "--method",
                               "loop-connection", "--steps", "360", *FAST)
        assert code == cli.EXIT_OK
        assert "loop-connection" in out

    def test_bad_state_is_config_error(self, capsys):
        code, _, err = run_cli(capsys, "phase", "--state", "17", *FAST)
        assert code == cli.EXIT_CONFIG
        assert "configuration error" in err


class TestOracle:
    def test_comparison_report(self, capsys):
        code, out, _ = run_cli(capsys, "oracle", "--state", "1",
                               "--steps", "360", *FAST)
        assert code == cli.EXIT_OK
        assert "closed" in out and "loop-connection" in out and "loop-overlap" in out
        assert "gap" in out

    def test_null_state_rejected(self, capsys):
        code, _, err = run_cli(capsys, "oracle", "--state", "3", *FAST)
        assert code == cli.EXIT_CONFIG

    def test_coarse_steps_still_finite(self, capsys):
        code, out, _ = run_cli(capsys, "oracle", "--state", "1",
                               "--steps", "8", *FAST)
        assert code == cli.EXIT_OK
        assert "nan" not in out and "inf" not in out


class TestValidate:
    def test_full_suite_passes(self, capsys):
        code, out, _ = run_cli(capsys, "validate", "--nodes", "48")
        assert code == cli.EXIT_OK
        assert "[PASS] orthonormality" in out
        assert "[FAIL]" not in out

    def test_low_resolution_warns_with_exit_3(self, capsys):
        code, out, _ = run_cli(capsys, "validate", "--nodes", "16")
        assert code == cli.EXIT_NONCONVERGENCE
        assert "[WARN]" in out


class TestConfig:
    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# defaults\nnodes = 32\nformat = csv\n")
        code, out, _ = run_cli(capsys, "table", "--config", str(cfg))
        assert code == cli.EXIT_OK
        assert out.startswith("j,omega_hz")

    def test_env_var_config(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "env.cfg"
        cfg.write_text("nodes = 32\nformat = json\n")
        monkeypatch.setenv(cli.CONFIG_ENV_VAR, str(cfg))
        code, out, _ = run_cli(capsys, "table")
        assert code == cli.EXIT_OK
        assert json.loads(out)["config"]["nodes"] == 32

    def test_flags_override_file(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("nodes = 32\nformat = json\n")
        code, out, _ = run_cli(capsys, "table", "--config", str(cfg),
                               "--format", "csv")
        assert code == cli.EXIT_OK
        assert out.startswith("j,omega_hz")

    def test_unknown_key_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("wavelength = 7\n")
        code, _, err = run_cli(capsys, "table", "--config", str(cfg))
        assert code == cli.EXIT_CONFIG

    def test_low_node_count_rejected(self, capsys):
        code, _, err = run_cli(capsys, "table", "--nodes", "8")
        assert code == cli.EXIT_CONFIG

    def test_missing_config_file(self, capsys):
        code, _, err = run_cli(capsys, "table", "--config", "/nonexistent.cfg")
        assert code == cli.EXIT_CONFIG

    def test_argparse_errors_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["phase"])          # --state is required
        assert exc.value.code == 2


class TestMutationHook:
    def test_sign_flip_detected_by_validate(self, monkeypatch, capsys):
        from rmsphase import berry
        monkeypatch.setattr(berry, "_PHASE_ORIENTATION", +1.0)
        code, out, _ = run_cli(capsys, "validate", "--nodes", "48")
        assert code == cli.EXIT_VALIDATION
        assert "[FAIL] sign-mutation-detector" in out
