"""
End-to-end tests for the hsmetric CLI.
These tests invoke the CLI as a subprocess.
"""

import json
from pathlib import Path

from hsmetric import __version__
from tests.helpers import csv_blocks, run_hsmetric_command


class TestCliEndToEnd:
    """End-to-end tests for CLI functionality."""

    def test_version_short_flag(self, tmp_path: Path):
        """Test `hsmetric -v` displays the correct version."""
        result = run_hsmetric_command(["-v"], cwd=tmp_path)
        assert result.returncode == 0
        assert f"hsmetric {__version__}" in result.stdout
        assert result.stderr == ""

    def test_help_long_flag(self, tmp_path: Path):
        """Test `hsmetric --help` displays help."""
        result = run_hsmetric_command(["--help"], cwd=tmp_path)
        assert result.returncode == 0
        assert "Usage: python -m hsmetric [OPTIONS] COMMAND [ARGS]..." in result.stdout
        assert "Commands:" in result.stdout
        assert result.stderr == ""

    def test_solve_missing_scenario(self, tmp_path: Path):
        """Test `hsmetric solve` without a scenario fails with a usage error."""
        result = run_hsmetric_command(["solve"], cwd=tmp_path)
        assert result.returncode == 2
        assert "Error: Missing argument 'SCENARIO'." in result.stderr
        assert result.stdout == ""

    def test_solve_two_delta(self, tmp_path: Path):
        """The persistent gap between the atoms shows up as a flat u piece."""
        result = run_hsmetric_command(
            ["solve", "two_delta", "--times", "2", "--eta-samples", "5"], cwd=tmp_path
        )
        assert result.returncode == 0, f"stdout: {result.stdout}\nstderr: {result.stderr}"
        surface, eulerian = csv_blocks(result.stdout)
        assert surface[0] == "t,eta,chi,U"
        assert eulerian[0] == "t,record,a,b,value,slope"
        # u = −t/4 between the spreading atoms: on (−1/2, 1/2) at t = 2
        assert "2,u,-0.5,0.5,-0.5,0" in eulerian
        assert not any(",atom," in line for line in eulerian)

    def test_solve_json_file(self, tmp_path: Path):
        out = tmp_path / "wavebreak.json"
        result = run_hsmetric_command(
            ["solve", "wavebreak", "--times", "0,2", "--format", "json", "--out", str(out)],
            cwd=tmp_path,
        )
        assert result.returncode == 0, result.stderr
        assert result.stdout == ""
        document = json.loads(out.read_text(encoding="utf-8"))
        at_breaking = document["eulerian"][1]
        assert at_breaking["t"] == 2.0
        assert len(at_breaking["mu"]["atoms"]) == 1

    def test_metric_on_erf_succeeds(self, tmp_path: Path):
        result = run_hsmetric_command(
            ["metric", "erf", "wavebreak", "--resolution", "256", "--times", "0,1,4"],
            cwd=tmp_path,
        )
        assert result.returncode == 0, result.stderr
        lines = result.stdout.splitlines()
        assert len(lines) == 4
        assert all(line.split(",")[4] == "true" for line in lines[1:])

    def test_metric_integrability_gate(self, tmp_path: Path):
        result = run_hsmetric_command(
            ["metric", "arcsinh", "wavebreak", "--resolution", "64"], cwd=tmp_path
        )
        assert result.returncode == 3
        assert "Error: arcsinh: integrability condition fails" in result.stderr
        assert result.stdout == ""

    def test_negative_time(self, tmp_path: Path):
        result = run_hsmetric_command(["solve", "delta", "--times=0,-1"], cwd=tmp_path)
        assert result.returncode == 2
        assert "time must be non-negative" in result.stderr

    def test_verify_conservation(self, tmp_path: Path):
        result = run_hsmetric_command(
            ["verify", "conservation", "--resolution", "128"], cwd=tmp_path
        )
        assert result.returncode == 0, result.stdout
        assert "6 properties passed" in result.stdout

    def test_debug_logging(self, tmp_path: Path):
        result = run_hsmetric_command(
            ["--debug", "solve", "zero", "--eta-samples", "2"], cwd=tmp_path
        )
        assert result.returncode == 0
        assert "DEBUG hsmetric.components.scenarios: built scenario zero" in result.stderr

    def test_invalid_env_var_warns(self, tmp_path: Path):
        result = run_hsmetric_command(
            ["solve", "zero"], cwd=tmp_path, env={"HSMETRIC_DEBUG": "sometimes"}
        )
        assert result.returncode == 0
        assert "Warning: Invalid value for HSMETRIC_DEBUG environment variable" in result.stderr
