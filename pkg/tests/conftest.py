"""
Pytest configuration and fixtures for procverify tests.

This module provides the shared models and helpers the test modules build
on: the two shipped catalogs, small hand-made models for exhaustive checks,
and a click CliRunner.
"""

import logging

import pytest
from click.testing import CliRunner

from procverify import load_config
from procverify.catalog import example_traces, marl_process, ml_dev_process
from procverify.models import (
    Element,
    ElementKind,
    Phase,
    ProcessModel,
    produce,
    require,
)


def activity(element_id: str, phase: Phase = Phase.DEVELOPMENT, automated: bool = False) -> Element:
    kind = ElementKind.AUTOMATED_PROCEDURE if automated else ElementKind.HUMAN_TASK
    return Element(element_id, kind, phase)


def artifact(element_id: str, phase: Phase = Phase.DEVELOPMENT, external: bool = False) -> Element:
    return Element(element_id, ElementKind.DATA, phase, external=external)


@pytest.fixture(scope="session")
def ml_dev():
    """
    The ML development catalog model.

    Returns:
        ProcessModel: 13 activities, 19 artifacts
    """
    return ml_dev_process()


@pytest.fixture(scope="session")
def marl():
    """The multi-agent reinforcement learning catalog model."""
    return marl_process()


@pytest.fixture(scope="session")
def traces():
    """Every shipped example trace, keyed by fixture name."""
    return example_traces()


@pytest.fixture(scope="session")
def happy_path(traces):
    return traces["happy_path"]


@pytest.fixture(scope="function")
def two_element():
    """
    Activity `a` producing artifact `x`.

    Returns:
        ProcessModel: the smallest well-formed model with an association
    """
    return ProcessModel(
        name="pair",
        elements=frozenset({activity("a"), artifact("x")}),
        associations=frozenset({produce("a", "x")}),
    )


@pytest.fixture(scope="function")
def chain():
    """
    Chain a -> x -> b -> y (activity, artifact, activity, artifact).

    Returns:
        ProcessModel: four elements, small enough for brute force
    """
    return ProcessModel(
        name="chain",
        elements=frozenset({activity("a"), artifact("x"), activity("b"), artifact("y")}),
        associations=frozenset({produce("a", "x"), require("x", "b"), produce("b", "y")}),
    )


@pytest.fixture(scope="function")
def config():
    """Configuration with test overrides applied over the environment."""
    return load_config({"LOG_LEVEL": "DEBUG", "ENUMERATE_MAX_ELEMENTS": 6})


@pytest.fixture(scope="function")
def runner():
    """
    Create a CLI runner for the procverify command group.

    Returns:
        CliRunner: runner with stderr captured separately
    """
    return CliRunner(mix_stderr=False)


@pytest.fixture(autouse=True)
def package_log_level():
    """Restore the package logger level changed by CLI runs."""
    package_logger = logging.getLogger("procverify")
    level = package_logger.level
    yield
    package_logger.setLevel(level)
