"""
Common testing utilities for hsmetric tests.

This module contains shared helper functions and constants used across test files
to reduce code duplication and make tests more maintainable.
"""

import os
import subprocess
import sys
from pathlib import Path

from hsmetric.components.config_loader import ENV_KEYS

# Helper to get the hsmetric executable
# This is used in end-to-end tests to run the CLI as a subprocess
HSMETRIC_CMD = [sys.executable, "-m", "hsmetric"]


def run_hsmetric_command(
    args: list[str], cwd: Path | None = None, env: dict[str, str] | None = None
) -> subprocess.CompletedProcess[str]:
    """
    Helper function to run hsmetric CLI commands as a subprocess.

    Args:
        args: List of command-line arguments to pass to hsmetric
        cwd: Working directory to run the command in, or None to use current directory
        env: Extra environment variables; HSMETRIC_* variables of the calling
            process are removed first

    Returns:
        CompletedProcess instance with stdout, stderr, and returncode
    """
    command = HSMETRIC_CMD + args
    clean = {k: v for k, v in os.environ.items() if k not in ENV_KEYS}
    clean.update(env or {})
    return subprocess.run(
        command, capture_output=True, text=True, check=False, cwd=cwd, env=clean
    )


def csv_blocks(output: str) -> list[list[str]]:
    """Split CSV output into blocks of lines separated by a blank line."""
    return [block.splitlines() for block in output.strip("\n").split("\n\n")]
