"""
Unit tests for the hsmetric CLI (Click version).
These tests use click.testing.CliRunner.
"""

import json
from pathlib import Path
from unittest import mock

import click
import pytest
from click.testing import CliRunner

from hsmetric import __version__
from hsmetric.cli import cli as hsmetric_cli
from hsmetric.cli import parse_times
from hsmetric.components.config_loader import ENV_KEYS
from hsmetric.components.metric import LipschitzSweep, MetricComponents, MetricReport
from hsmetric.components.verification import PropertyResult


@pytest.fixture(name="runner")
def cli_runner(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> CliRunner:
    """A CliRunner working in an empty directory with a clean environment."""
    for key in ENV_KEYS:
        monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)
    return CliRunner()


class TestBasicFunctionality:
    """Tests for basic CLI functionality like version and help."""

    @pytest.mark.parametrize("flag", ["-v", "--version"])
    def test_version(self, runner: CliRunner, flag: str):
        result = runner.invoke(hsmetric_cli, [flag])
        assert result.exit_code == 0
        assert f"hsmetric {__version__}" in result.output

    @pytest.mark.parametrize("flag", ["-h", "--help"])
    def test_help(self, runner: CliRunner, flag: str):
        result = runner.invoke(hsmetric_cli, [flag], prog_name="hsmetric")
        assert result.exit_code == 0
        assert "Usage: hsmetric [OPTIONS] COMMAND [ARGS]..." in result.output
        for command in ("solve", "metric", "verify"):
            assert command in result.output

    def test_solve_help(self, runner: CliRunner):
        result = runner.invoke(hsmetric_cli, ["solve", "--help"], prog_name="hsmetric")
        assert result.exit_code == 0
        assert "Usage: hsmetric solve [OPTIONS] SCENARIO" in result.output
        assert "--eta-samples" in result.output


class TestParseTimes:
    def test_list(self):
        assert parse_times(mock.Mock(), mock.Mock(), "0, 0.5,2") == [0.0, 0.5, 2.0]

    @pytest.mark.parametrize("value", ["abc", "1,,2", "-1", "nan", "inf"])
    def test_rejects(self, value: str):
        with pytest.raises(click.BadParameter):
            parse_times(mock.Mock(), mock.Mock(), value)


class TestSolve:
    """`hsmetric solve`."""

    def test_csv(self, runner: CliRunner):
        result = runner.invoke(
            hsmetric_cli, ["solve", "wavebreak", "--times", "0,1", "--eta-samples", "4"]
        )
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == "t,eta,chi,U"
        assert "t,record,a,b,value,slope" in lines
        assert any(line.startswith("1,density,-0.125,0.125,") for line in lines)

    def test_json_to_file(self, runner: CliRunner, tmp_path: Path):
        out = tmp_path / "delta.json"
        result = runner.invoke(
            hsmetric_cli,
            ["solve", "delta:alpha=2", "--times", "2", "--format", "json", "-o", str(out)],
        )
        assert result.exit_code == 0, result.output
        document = json.loads(out.read_text(encoding="utf-8"))
        assert document["scenario"] == "delta:alpha=2.0"
        assert document["eulerian"][0]["energy"] == pytest.approx(2.0)

    @pytest.mark.parametrize("times", ["1,abc", "-1"])
    def test_bad_times(self, runner: CliRunner, times: str):
        result = runner.invoke(hsmetric_cli, ["solve", "wavebreak", f"--times={times}"])
        assert result.exit_code == 2

    def test_atom_on_sampled_base(self, runner: CliRunner):
        result = runner.invoke(
            hsmetric_cli,
            [
                "solve",
                "custom:x0=0,m0=1,base=erf",
                "--times=0",
                "--eta-samples=4",
                "--resolution=64",
            ],
        )
        assert result.exit_code == 0, result.output
        atoms = [line.split(",") for line in result.stdout.splitlines() if ",atom," in line]
        assert len(atoms) == 1
        assert float(atoms[0][2]) == pytest.approx(0.0, abs=1e-12)
        assert float(atoms[0][4]) == pytest.approx(1.0)

    @pytest.mark.parametrize("scenario", ["delta:alpha=-1", "burgers", "custom:x0=1"])
    def test_domain_errors(self, runner: CliRunner, scenario: str):
        result = runner.invoke(hsmetric_cli, ["solve", scenario])
        assert result.exit_code == 3
        assert "Error:" in result.stderr

    def test_invalid_environment_value_warns(
        self, runner: CliRunner, monkeypatch: pytest.MonkeyPatch
    ):
        monkeypatch.setenv("HSMETRIC_ETA_SAMPLES", "lots")
        result = runner.invoke(hsmetric_cli, ["solve", "zero", "--eta-samples", "2"])
        assert result.exit_code == 0
        assert "Warning: Invalid value for HSMETRIC_ETA_SAMPLES" in result.stderr

    def test_env_file_sets_defaults(self, runner: CliRunner):
        Path(".env").write_text("HSMETRIC_ETA_SAMPLES=3\n", encoding="utf-8")
        result = runner.invoke(hsmetric_cli, ["solve", "wavebreak"])
        assert result.exit_code == 0
        surface = result.stdout.split("\n\n")[0].splitlines()
        # 3 interior samples plus the knot η = 1; χ(0) = −∞ is dropped
        assert len(surface) == 1 + 4


class TestMetric:
    """`hsmetric metric`."""

    def test_delta_pair_csv(self, runner: CliRunner):
        result = runner.invoke(
            hsmetric_cli, ["metric", "delta:alpha=1", "delta:alpha=2", "--times", "0,2"]
        )
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == "t,d,bound_factor,d0,satisfied,uinf,chi_l1,mass"
        assert lines[1] == "0,1,1,1,true,0,0,1"
        assert lines[2].startswith("2,1.75,3.5,1,true,")

    def test_json(self, runner: CliRunner):
        result = runner.invoke(
            hsmetric_cli, ["metric", "wavebreak", "two_delta", "--times", "1", "--format", "json"]
        )
        assert result.exit_code == 0, result.output
        document = json.loads(result.stdout)
        assert document["a"] == "wavebreak"
        assert document["reports"][0]["satisfied"] is True

    def test_integrability_gate(self, runner: CliRunner):
        result = runner.invoke(
            hsmetric_cli, ["metric", "erf", "arcsinh", "--resolution", "64", "--times", "1"]
        )
        assert result.exit_code == 3
        assert "arcsinh" in result.stderr
        assert "integrability" in result.stderr

    @mock.patch("hsmetric.cli.verify_lipschitz")
    def test_violation_exit_code(self, mock_verify: mock.MagicMock, runner: CliRunner):
        report = MetricReport(1.0, 5.0, 2.125, 1.0, False, MetricComponents(1.0, 1.0, 3.0))
        mock_verify.return_value = LipschitzSweep((report,))
        result = runner.invoke(hsmetric_cli, ["metric", "zero", "delta", "--times", "1"])
        assert result.exit_code == 1
        assert "false" in result.stdout
        assert "Lipschitz bound is violated" in result.stderr


class TestVerify:
    """`hsmetric verify`."""

    def test_lipschitz(self, runner: CliRunner):
        result = runner.invoke(hsmetric_cli, ["verify", "lipschitz", "--pairs", "2", "--seed", "3"])
        assert result.exit_code == 0, result.output
        assert result.stdout.splitlines()[0] == "property | status | max error | detail"
        assert "3 properties passed" in result.stdout

    @mock.patch("hsmetric.cli.run_suite")
    def test_failure(self, mock_run: mock.MagicMock, runner: CliRunner):
        mock_run.return_value = [
            PropertyResult("ok", True, 0.0, "fine"),
            PropertyResult("broken", False, 0.5, "too far"),
        ]
        result = runner.invoke(hsmetric_cli, ["verify", "ode"])
        assert result.exit_code == 1
        assert "broken | FAIL | 5.000e-01 | too far" in result.stdout
        assert "1 of 2 properties failed" in result.stdout
        mock_run.assert_called_once_with("ode", 42, 100, 4096)

    def test_unknown_suite(self, runner: CliRunner):
        result = runner.invoke(hsmetric_cli, ["verify", "bogus"])
        assert result.exit_code == 2
