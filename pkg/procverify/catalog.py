"""
Built-in process models and example traces.

`ml_dev_process` is the full machine learning development process, from
use case analysis to monitoring, with feedback loops from the test verdict
and the monitoring report. `marl_process` is the smaller multi-agent
reinforcement learning process with three feedback loops from the
evaluation verdict. The same models and traces ship as text files under
`fixtures/`; tests keep both in agreement.
"""

import logging
import shutil
from pathlib import Path
from typing import Dict, Iterable, List, Tuple

from .conformance import Trace
from .constants import EXAMPLE_FILES
from .exceptions import ProcessVerifyError
from .models import (
    Element,
    ElementKind,
    FeedbackAnnotation,
    Phase,
    ProcessModel,
    produce,
    require,
)
from .semantics import ElementState, reset_set
from .simulator import Eager, Scripted, simulate
from .validation import validate

logger = logging.getLogger(__name__)

FIXTURES_DIR = Path(__file__).parent / "fixtures"

PLANNING, DEVELOPMENT, DEPLOYMENT, OPERATIONS = (
    Phase.PLANNING,
    Phase.DEVELOPMENT,
    Phase.DEPLOYMENT,
    Phase.OPERATIONS,
)
HUMAN, AUTOMATED = ElementKind.HUMAN_TASK, ElementKind.AUTOMATED_PROCEDURE
DATA, LOGICAL, FUNCTIONAL = ElementKind.DATA, ElementKind.LOGICAL_STATEMENT, ElementKind.FUNCTIONAL_DESCRIPTION

# activity id, phase, kind, display name, requires, produces
ML_DEV_ACTIVITIES: List[Tuple[str, Phase, ElementKind, str, Tuple[str, ...], Tuple[str, ...]]] = [
    ("use_case_analysis", PLANNING, HUMAN, "Use Case Analysis", (), ("development_specification",)),
    ("data_selection", DEVELOPMENT, HUMAN, "Data Selection",
     ("development_specification",), ("training_data", "test_data", "validation_data")),
    ("target_definition", DEVELOPMENT, HUMAN, "Target Definition",
     ("development_specification",), ("dev_performance_indicators",)),
    ("model_definition", DEVELOPMENT, HUMAN, "ML Model Definition",
     ("training_data", "dev_performance_indicators"), ("initial_ml_model",)),
    ("hyperparameter_selection", DEVELOPMENT, HUMAN, "Hyper-Parameter Selection",
     ("initial_ml_model",), ("hyper_parameters",)),
    ("training", DEVELOPMENT, AUTOMATED, "Training",
     ("initial_ml_model", "hyper_parameters", "training_data"), ("trained_ml_model",)),
    ("testing", DEVELOPMENT, AUTOMATED, "Testing",
     ("trained_ml_model", "dev_performance_indicators", "test_data"), ("test_verdict",)),
    ("validation", DEVELOPMENT, HUMAN, "Validation",
     ("trained_ml_model", "development_specification", "validation_data"), ("factory_quality_seal",)),
    ("onsite_target_definition", DEPLOYMENT, HUMAN, "On-Site Target Definition",
     ("on_site_contract", "factory_quality_seal"), ("onsite_performance_indicators",)),
    ("onsite_adaptation", DEPLOYMENT, AUTOMATED, "On-Site Adaptation",
     ("trained_ml_model", "onsite_performance_indicators", "customer_data"), ("adapted_ml_model",)),
    ("onboarding", DEPLOYMENT, HUMAN, "Onboarding",
     ("adapted_ml_model", "on_site_contract", "customer_data"), ("onsite_quality_seal",)),
    ("production_target_definition", OPERATIONS, HUMAN, "Production Target Definition",
     ("sla", "onsite_quality_seal"), ("production_performance_indicators",)),
    ("monitoring", OPERATIONS, AUTOMATED, "Monitoring",
     ("adapted_ml_model", "production_performance_indicators", "production_data"), ("monitoring_report",)),
]

# artifact id, phase, kind, display name, external
ML_DEV_ARTIFACTS: List[Tuple[str, Phase, ElementKind, str, bool]] = [
    ("development_specification", PLANNING, LOGICAL, "Development Specification", False),
    ("on_site_contract", DEPLOYMENT, LOGICAL, "On-Site Contract", True),
    ("customer_data", DEPLOYMENT, DATA, "Customer Data", True),
    ("sla", OPERATIONS, LOGICAL, "Service Level Agreement", True),
    ("production_data", OPERATIONS, DATA, "Production Data", True),
    ("training_data", DEVELOPMENT, DATA, "Training Data", False),
    ("test_data", DEVELOPMENT, DATA, "Test Data", False),
    ("validation_data", DEVELOPMENT, DATA, "Validation Data", False),
    ("dev_performance_indicators", DEVELOPMENT, LOGICAL, "Development Performance Indicators", False),
    ("initial_ml_model", DEVELOPMENT, FUNCTIONAL, "Initial ML Model", False),
    ("hyper_parameters", DEVELOPMENT, DATA, "Hyper-Parameters", False),
    ("trained_ml_model", DEVELOPMENT, FUNCTIONAL, "Trained ML Model", False),
    ("test_verdict", DEVELOPMENT, LOGICAL, "Test Verdict", False),
    ("factory_quality_seal", DEVELOPMENT, LOGICAL, "Factory Quality Seal", False),
    ("onsite_performance_indicators", DEPLOYMENT, LOGICAL, "On-Site Performance Indicators", False),
    ("adapted_ml_model", DEPLOYMENT, FUNCTIONAL, "Adapted ML Model", False),
    ("onsite_quality_seal", DEPLOYMENT, LOGICAL, "On-Site Quality Seal", False),
    ("production_performance_indicators", OPERATIONS, LOGICAL, "Production Performance Indicators", False),
    ("monitoring_report", OPERATIONS, LOGICAL, "Monitoring Report", False),
]

ML_DEV_FEEDBACK = [
    ("test_verdict", "model_definition", "revise model"),
    ("test_verdict", "hyperparameter_selection", "retune"),
    ("monitoring_report", "data_selection", "extend data set"),
]

MARL_ACTIVITIES = [
    ("define_training_target", DEVELOPMENT, HUMAN, "Define Training Target",
     ("development_specification",), ("training_target",)),
    ("derive_reward", DEVELOPMENT, HUMAN, "Derive Reward", ("training_target",), ("reward_function",)),
    ("configure_environment", DEVELOPMENT, HUMAN, "Configure Environment",
     ("development_specification",), ("environment_simulation",)),
    ("train_agents", DEVELOPMENT, AUTOMATED, "Train Agents",
     ("reward_function", "environment_simulation"), ("policy_model",)),
    ("evaluate", DEVELOPMENT, HUMAN, "Evaluate", ("policy_model", "training_target"), ("evaluation_verdict",)),
]

MARL_ARTIFACTS = [
    ("development_specification", PLANNING, LOGICAL, "Development Specification", True),
    ("training_target", DEVELOPMENT, LOGICAL, "Training Target", False),
    ("reward_function", DEVELOPMENT, FUNCTIONAL, "Reward Function", False),
    ("environment_simulation", DEVELOPMENT, FUNCTIONAL, "Environment Simulation", False),
    ("policy_model", DEVELOPMENT, FUNCTIONAL, "Policy Model", False),
    ("evaluation_verdict", DEVELOPMENT, LOGICAL, "Evaluation Verdict", False),
]

MARL_FEEDBACK = [
    ("evaluation_verdict", "derive_reward", "adjust reward"),
    ("evaluation_verdict", "define_training_target", "adjust training target"),
    ("evaluation_verdict", "configure_environment", "adjust environment"),
]


def _build(name: str, activities: Iterable, artifacts: Iterable, feedback: Iterable) -> ProcessModel:
    elements = []
    associations = []
    for element_id, phase, kind, display_name, requires, produces in activities:
        elements.append(Element(element_id, kind, phase, display_name=display_name))
        associations.extend(require(artifact, element_id) for artifact in requires)
        associations.extend(produce(element_id, artifact) for artifact in produces)
    for element_id, phase, kind, display_name, external in artifacts:
        elements.append(Element(element_id, kind, phase, external=external, display_name=display_name))
    model = ProcessModel(
        name=name,
        elements=frozenset(elements),
        associations=frozenset(associations),
        feedback=frozenset(FeedbackAnnotation(*entry) for entry in feedback),
    )
    report = validate(model)
    if not report.is_well_formed:
        raise ProcessVerifyError(f"built-in process '{name}' is ill-formed: {report.codes()}")
    return model


def ml_dev_process() -> ProcessModel:
    """The ML development process: 13 activities, 19 artifacts."""
    return _build("ml_dev", ML_DEV_ACTIVITIES, ML_DEV_ARTIFACTS, ML_DEV_FEEDBACK)


def marl_process() -> ProcessModel:
    """The multi-agent reinforcement learning process with three feedback loops."""
    return _build("marl", MARL_ACTIVITIES, MARL_ARTIFACTS, MARL_FEEDBACK)


def _reset_overlay(model: ProcessModel, base: Trace, step: int, target: str) -> Scripted:
    """Scripted overlay firing one synchronized reset of `target` at `step`."""
    reopened = reset_set(model, base[step], target)
    deltas = [None] * step + [{element_id: ElementState.INACTIVE for element_id in reopened}]
    return Scripted(tuple(deltas))


def ml_dev_traces() -> Dict[str, Trace]:
    model = ml_dev_process()
    happy = simulate(model, Eager(dwell=1), 20)

    # test_verdict is Done at t=13; the quality gate sends the work back to
    # the hyper-parameters, which re-opens everything downstream of them.
    retune_base = simulate(model, Eager(dwell=1), 13)
    retune = simulate(
        model, Eager(dwell=1), 24, feedback=_reset_overlay(model, retune_base, 13, "hyper_parameters")
    )

    return {
        "happy_path": happy,
        "feedback_retune": retune,
        "mutant_r1": happy.replace_state(0, {"use_case_analysis": ElementState.ACTIVE}),
        "mutant_r2": happy.replace_state(1, {"development_specification": ElementState.ACTIVE}),
        "mutant_r3": happy.replace_state(2, {"development_specification": ElementState.DONE}),
        "mutant_r4": happy.replace_state(5, {"development_specification": ElementState.INACTIVE})
                          .replace_state(6, {"development_specification": ElementState.ACTIVE}),
        "mutant_r5": happy.replace_state(5, {"training_data": ElementState.INACTIVE})
                          .replace_state(6, {"training_data": ElementState.ACTIVE}),
        "mutant_r6": happy.relabel(20, 21),
    }


def marl_traces() -> Dict[str, Trace]:
    model = marl_process()
    return {
        "marl_happy_path": simulate(model, Eager(dwell=1), 10),
        # the first gate after the verdict re-opens the environment branch
        "marl_curriculum": simulate(model, Eager(dwell=1, feedback_rounds=1), 18),
    }


def example_traces() -> Dict[str, Trace]:
    """Every shipped example trace, keyed by fixture name."""
    traces = ml_dev_traces()
    traces.update(marl_traces())
    return traces


# Designated rule and time index of each shipped mutant.
MUTANT_EXPECTATIONS = {
    "mutant_r1": ("R1_INIT", 0),
    "mutant_r2": ("R2_ACT", 1),
    "mutant_r3": ("R3_DONE", 2),
    "mutant_r4": ("R4_RESET", 5),
    "mutant_r5": ("R5_INV", 5),
    "mutant_r6": ("R6_TIME", 20),
}


def fixture_path(filename: str) -> Path:
    path = FIXTURES_DIR / filename
    if not path.is_file():
        raise FileNotFoundError(f"no shipped fixture named '{filename}'")
    return path


def init_example(example: str, destination: Path) -> List[Path]:
    """
    Copy the fixture files of one example into `destination`.

    Args:
        example: "ml_dev" or "marl"
        destination: Target directory, created if missing

    Returns:
        Paths of the written files

    Raises:
        ValueError: If the example name is unknown
    """
    if example not in EXAMPLE_FILES:
        raise ValueError(f"unknown example '{example}' (expected {', '.join(EXAMPLE_FILES)})")
    destination.mkdir(parents=True, exist_ok=True)
    written = []
    for filename in EXAMPLE_FILES[example]:
        target = destination / filename
        shutil.copyfile(fixture_path(filename), target)
        written.append(target)
    logger.info(f"Copied {len(written)} '{example}' fixtures to {destination}")
    return written
