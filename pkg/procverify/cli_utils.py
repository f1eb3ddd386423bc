"""
Command Utilities Module

Standardized command results and error handling for consistent exit codes
and verdict lines across all CLI commands.
"""

import logging
from dataclasses import dataclass
from functools import wraps
from typing import Callable, Optional

import click

from .constants import EXIT_ERROR, EXIT_FAILURE, EXIT_SUCCESS, FILE_ENCODING, VERDICT_ERROR
from .exceptions import DslSyntaxError, FormulaSyntaxError, ProcessVerifyError
from .reporting import verdict_line

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommandResult:
    """Report text plus the exit code it maps to."""
    text: str
    exit_code: int

    @staticmethod
    def success(text: str) -> "CommandResult":
        """
        Create a successful result (property holds, conforming, ...).

        Args:
            text: Rendered report, ending with the verdict line

        Returns:
            CommandResult with exit code 0
        """
        return CommandResult(text, EXIT_SUCCESS)

    @staticmethod
    def failure(text: str) -> "CommandResult":
        """
        Create a failed-check result (property fails, non-conforming, ...).

        Returns:
            CommandResult with exit code 1
        """
        return CommandResult(text, EXIT_FAILURE)

    @staticmethod
    def from_outcome(text: str, ok: bool) -> "CommandResult":
        return CommandResult.success(text) if ok else CommandResult.failure(text)

    def emit(self) -> None:
        """Print the report and exit with the result's code."""
        click.echo(self.text)
        raise click.exceptions.Exit(self.exit_code)


def describe_error(error: Exception, source: Optional[str] = None) -> str:
    """
    One-line diagnostic for an input or usage error.

    Args:
        error: The exception raised while running a command
        source: File the error relates to, if known

    Returns:
        `file:line:col: message` for parse errors, `file: message` otherwise
    """
    if isinstance(error, DslSyntaxError):
        return error.located() if error.filename or source is None else error.with_filename(source).located()
    if isinstance(error, FormulaSyntaxError):
        prefix = f"{source}: " if source else ""
        return f"{prefix}formula:{error.position + 1}: {error.message}"
    if isinstance(error, OSError):
        name = error.filename or source or "<input>"
        return f"{name}: {error.strerror or error}"
    prefix = f"{source}: " if source else ""
    return f"{prefix}{error}"


def handles_errors(f: Callable) -> Callable:
    """
    Decorator mapping engine and I/O errors to exit status 2.

    The diagnostic goes to stderr; stdout still ends with `VERDICT: error`.

    Usage:
        @cli.command()
        @handles_errors
        def validate(model_file):
            ...
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (ProcessVerifyError, OSError, ValueError) as error:
            logger.debug(f"{f.__name__} failed: {error!r}")
            click.echo(f"error: {describe_error(error)}", err=True)
            click.echo(verdict_line(VERDICT_ERROR))
            raise click.exceptions.Exit(EXIT_ERROR)
    return decorated_function


def read_text(path: str) -> str:
    with open(path, encoding=FILE_ENCODING) as handle:
        return handle.read()


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding=FILE_ENCODING) as handle:
        handle.write(text)
