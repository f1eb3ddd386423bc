"""Verification engine for ML development process models."""
import logging
import os
from typing import Any, Dict, Mapping, Optional

from dotenv import load_dotenv

from .constants import (
    DEFAULT_DWELL,
    DEFAULT_FEEDBACK_RATE,
    DEFAULT_LOG_LEVEL,
    DEFAULT_STEPS,
    ENUMERATE_MAX_ELEMENTS,
    LOG_FORMAT,
)
from .exceptions import ConfigurationError

__version__ = "0.3.0"

load_dotenv()

_ENV_SETTINGS = {
    # config key: (environment variable, default, parser)
    "LOG_LEVEL": ("PROCVERIFY_LOG_LEVEL", DEFAULT_LOG_LEVEL, str),
    "ENUMERATE_MAX_ELEMENTS": ("PROCVERIFY_ENUMERATE_MAX_ELEMENTS", ENUMERATE_MAX_ELEMENTS, int),
    "DEFAULT_DWELL": ("PROCVERIFY_DEFAULT_DWELL", DEFAULT_DWELL, int),
    "DEFAULT_STEPS": ("PROCVERIFY_DEFAULT_STEPS", DEFAULT_STEPS, int),
    "RANDOM_FEEDBACK_RATE": ("PROCVERIFY_RANDOM_FEEDBACK_RATE", DEFAULT_FEEDBACK_RATE, float),
}


def load_config(overrides: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    """
    Build the runtime configuration.

    Environment variables (optionally from a `.env` file) override the
    defaults; `overrides` wins over both.

    Args:
        overrides: Optional mapping of config keys to values (used by tests)

    Returns:
        Dictionary of configuration values

    Raises:
        ConfigurationError: If a value does not parse or is out of range
    """
    config: Dict[str, Any] = {}
    for key, (env_name, default, parser) in _ENV_SETTINGS.items():
        raw = os.getenv(env_name)
        if raw is None:
            config[key] = default
            continue
        try:
            config[key] = parser(raw)
        except ValueError as exc:
            raise ConfigurationError(f"{env_name}={raw!r} is not a valid {parser.__name__}") from exc

    if overrides:
        unknown = set(overrides) - set(_ENV_SETTINGS)
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
        config.update(overrides)

    if config["ENUMERATE_MAX_ELEMENTS"] < 1:
        raise ConfigurationError("ENUMERATE_MAX_ELEMENTS must be positive")
    if config["DEFAULT_DWELL"] < 1:
        raise ConfigurationError("DEFAULT_DWELL must be positive")
    if config["DEFAULT_STEPS"] < 1:
        raise ConfigurationError("DEFAULT_STEPS must be positive")
    if not 0.0 <= config["RANDOM_FEEDBACK_RATE"] <= 1.0:
        raise ConfigurationError("RANDOM_FEEDBACK_RATE must lie in [0, 1]")
    if logging.getLevelName(str(config["LOG_LEVEL"]).upper()) == f"Level {str(config['LOG_LEVEL']).upper()}":
        raise ConfigurationError(f"unknown log level {config['LOG_LEVEL']!r}")
    config["LOG_LEVEL"] = str(config["LOG_LEVEL"]).upper()
    return config


def configure_logging(level: str = DEFAULT_LOG_LEVEL) -> None:
    """
    Configure stderr logging for command-line use.

    A root handler is installed only when none exists; the package logger
    level is always set.
    """
    logging.basicConfig(format=LOG_FORMAT)
    logging.getLogger(__name__).setLevel(level.upper())
