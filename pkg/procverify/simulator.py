"""
Deterministic simulation of process instances.

Policies decide how an instance evolves:
    Eager          every enabled element activates at once and finishes after
                   `dwell` steps; declared feedback loops fire up to
                   `feedback_rounds` times (quality gates re-opening work).
    UniformRandom  per-element forward moves drawn from a seeded generator;
                   with `feedback_rate` a declared loop fires instead.
    Scripted       explicit per-step deltas applied verbatim.

A Scripted overlay passed as `feedback` replaces the policy at the steps
where it carries a delta, which is how hand-written feedback scenarios are
combined with an otherwise eager run.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .constants import DEFAULT_DWELL, MAX_SIMULATION_STEPS
from .conformance import Trace
from .exceptions import ScriptedStepError, UnknownElementError
from .models import FeedbackAnnotation, ProcessModel
from .semantics import (
    ElementState,
    InstanceState,
    feedback_reset,
    initial_state,
    step_violations,
)

logger = logging.getLogger(__name__)

Delta = Mapping[str, ElementState]


@dataclass(frozen=True)
class Eager:
    dwell: int = DEFAULT_DWELL
    feedback_rounds: int = 0

    def __post_init__(self):
        if self.dwell < 1:
            raise ValueError("dwell must be a positive number of steps")
        if self.feedback_rounds < 0:
            raise ValueError("feedback_rounds must not be negative")


@dataclass(frozen=True)
class UniformRandom:
    seed: int
    feedback_rate: float = 0.0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 0.0 <= self.feedback_rate <= 1.0:
            raise ValueError("feedback_rate must lie in [0, 1]")


@dataclass(frozen=True)
class Scripted:
    """Per-step deltas; entry i moves t=i to t=i+1. None means no delta."""
    deltas: Tuple[Optional[Delta], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(self.deltas))

    def delta_at(self, step: int) -> Optional[Delta]:
        if step < len(self.deltas):
            return self.deltas[step]
        return None

    def referenced_ids(self) -> List[str]:
        return sorted({element_id for delta in self.deltas if delta for element_id in delta})


SimulationPolicy = Union[Eager, UniformRandom, Scripted]


class Simulator:
    """Runs one policy over one model; keeps the bookkeeping policies need."""

    def __init__(self, model: ProcessModel, policy: SimulationPolicy, feedback: Optional[Scripted] = None):
        self.model = model
        self.policy = policy
        self.feedback = feedback
        self.rng = random.Random(policy.seed) if isinstance(policy, UniformRandom) else None
        self.annotations: List[FeedbackAnnotation] = sorted(
            (note for note in model.feedback if note.source in model and note.target in model),
            key=FeedbackAnnotation.sort_key,
        )
        self.active_since: Dict[str, int] = {}
        self.fired: Dict[FeedbackAnnotation, int] = {note: 0 for note in self.annotations}
        self.armed: List[FeedbackAnnotation] = []

        for scripted in (policy, feedback):
            if isinstance(scripted, Scripted):
                for element_id in scripted.referenced_ids():
                    if element_id not in model:
                        raise UnknownElementError(element_id, f"process '{model.name}'")

    def run(self, steps: int) -> Trace:
        if steps < 1 or steps > MAX_SIMULATION_STEPS:
            raise ValueError(f"steps must lie in [1, {MAX_SIMULATION_STEPS}]")
        logger.info(f"Simulating '{self.model.name}' for {steps} steps with {self.policy!r}")

        states = [initial_state(self.model)]
        for step in range(steps):
            current = states[-1]
            overlay = self.feedback.delta_at(step) if self.feedback else None
            if overlay is not None:
                following = self._apply_script(current, overlay, step)
            elif isinstance(self.policy, Scripted):
                following = self._apply_script(current, self.policy.delta_at(step) or {}, step)
            elif isinstance(self.policy, Eager):
                following = self._eager_step(current, step)
            else:
                following = self._random_step(current)
            self._record(current, following, step + 1)
            states.append(following)

        logger.info(f"Simulation of '{self.model.name}' finished after {steps} steps")
        return Trace(self.model.name, tuple(states))

    def _apply_script(self, current: InstanceState, delta: Delta, step: int) -> InstanceState:
        following = current.evolve(delta)
        violations = step_violations(self.model, current, following)
        if violations:
            logger.error(f"Scripted step {step + 1} rejected: {[v.rule.value for v in violations]}")
            raise ScriptedStepError(step + 1, violations)
        return following

    def _record(self, current: InstanceState, following: InstanceState, t: int) -> None:
        for element_id, state in following.items():
            before = current[element_id]
            if state is ElementState.ACTIVE and before is not ElementState.ACTIVE:
                self.active_since[element_id] = t
            if state is ElementState.DONE and before is not ElementState.DONE:
                self.armed.extend(n for n in self.annotations if n.source == element_id)
            if state is not ElementState.DONE:
                self.armed = [n for n in self.armed if n.source != element_id]

    def _enabled(self, state: InstanceState, element_id: str) -> bool:
        return all(state[p].started for p in self.model.pre(element_id))

    def _eager_step(self, current: InstanceState, step: int) -> InstanceState:
        for note in sorted(set(self.armed), key=FeedbackAnnotation.sort_key):
            if self.fired[note] < self.policy.feedback_rounds:
                self.fired[note] += 1
                self.armed = [n for n in self.armed if n != note]
                logger.info(f"Feedback {note.source} -> {note.target} fires at t={step + 1}")
                return feedback_reset(self.model, current, note.target)

        changes: Dict[str, ElementState] = {}
        for element_id, state in current.items():
            if state is ElementState.INACTIVE and self._enabled(current, element_id):
                changes[element_id] = ElementState.ACTIVE
            elif state is ElementState.ACTIVE:
                if step + 1 - self.active_since.get(element_id, 0) >= self.policy.dwell:
                    changes[element_id] = ElementState.DONE
        return current.evolve(changes)

    def _random_step(self, current: InstanceState) -> InstanceState:
        if self.policy.feedback_rate > 0:
            candidates = [n for n in self.annotations if current[n.source] is ElementState.DONE]
            if candidates and self.rng.random() < self.policy.feedback_rate:
                note = self.rng.choice(candidates)
                logger.debug(f"Random feedback {note.source} -> {note.target}")
                return feedback_reset(self.model, current, note.target)

        changes: Dict[str, ElementState] = {}
        for element_id, state in current.items():
            if state is ElementState.INACTIVE:
                options: Sequence[ElementState] = (
                    (ElementState.INACTIVE, ElementState.ACTIVE)
                    if self._enabled(current, element_id) else (ElementState.INACTIVE,)
                )
            elif state is ElementState.ACTIVE:
                options = (ElementState.ACTIVE, ElementState.DONE)
            else:
                options = (ElementState.DONE,)
            if len(options) > 1:
                changes[element_id] = self.rng.choice(options)
        return current.evolve(changes)


def simulate(
    model: ProcessModel,
    policy: SimulationPolicy,
    steps: int,
    feedback: Optional[Scripted] = None,
) -> Trace:
    """
    Simulate an instance of `model`.

    Args:
        model: A validated process model
        policy: Eager, UniformRandom or Scripted
        steps: Number of steps; the trace has steps+1 states
        feedback: Optional Scripted overlay replacing the policy where it has deltas

    Returns:
        Trace starting from the all-Inactive state

    Raises:
        ScriptedStepError: If a scripted or overlaid step is illegal
        UnknownElementError: If a script names an unknown element
    """
    return Simulator(model, policy, feedback).run(steps)
