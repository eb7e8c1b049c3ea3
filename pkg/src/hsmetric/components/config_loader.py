"""
Component responsible for loading configuration from various sources.
"""

import os
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path

from dotenv import dotenv_values

from ..utils.config import str_to_bool, str_to_positive_int

ENV_KEYS = [
    "HSMETRIC_DEBUG",
    "HSMETRIC_ETA_SAMPLES",
    "HSMETRIC_RESOLUTION",
    "HSMETRIC_SEED",
    "HSMETRIC_PAIRS",
]

DEFAULT_ETA_SAMPLES = 4096
DEFAULT_RESOLUTION = 4096
DEFAULT_SEED = 42
DEFAULT_PAIRS = 100


@dataclass
class Settings:
    """Defaults for the command-line options, after .env and environment."""

    eta_samples: int = DEFAULT_ETA_SAMPLES
    resolution: int = DEFAULT_RESOLUTION
    seed: int = DEFAULT_SEED
    pairs: int = DEFAULT_PAIRS
    debug: bool = False


def load_from_env(env_file_path: str = ".env") -> dict[str, str]:
    """
    Loads variables from a .env file and system environment variables into a dictionary.

    Args:
        env_file_path: The path to the .env file. Defaults to ".env" in the CWD.

    Returns:
        A dictionary of environment variables loaded from the file and system.
        Process variables win over the file. Returns an empty dictionary if no
        variables are found.
    """
    result: dict[str, str] = {}

    env_path = Path(env_file_path)
    if env_path.is_file():
        loaded_vars = dotenv_values(dotenv_path=env_path)
        result.update({k: v for k, v in loaded_vars.items() if v is not None})

    for key in ENV_KEYS:
        if key in os.environ and os.environ[key]:
            result[key] = os.environ[key]

    return result


def _seed(value: str) -> int:
    parsed = int(value.strip())
    if parsed < 0:
        raise ValueError(f"Expected a non-negative integer, got {parsed}")
    return parsed


def load_settings(
    env_file_path: str = ".env",
    warn: Callable[[str], None] | None = None,
) -> Settings:
    """
    Build :class:`Settings` from the .env file and the process environment.

    Invalid values are reported through ``warn`` and the default is kept.
    """
    values = load_from_env(env_file_path)
    settings = Settings()
    parsers: dict[str, tuple[str, Callable[[str], object]]] = {
        "HSMETRIC_DEBUG": ("debug", str_to_bool),
        "HSMETRIC_ETA_SAMPLES": ("eta_samples", str_to_positive_int),
        "HSMETRIC_RESOLUTION": ("resolution", str_to_positive_int),
        "HSMETRIC_SEED": ("seed", _seed),
        "HSMETRIC_PAIRS": ("pairs", str_to_positive_int),
    }
    for key, (attr, parse) in parsers.items():
        raw = values.get(key)
        if raw is None:
            continue
        try:
            setattr(settings, attr, parse(raw))
        except ValueError:
            if warn is not None:
                warn(
                    f"Invalid value for {key} environment variable: {raw!r}. "
                    f"Falling back to {getattr(settings, attr)!r}."
                )
    return settings
