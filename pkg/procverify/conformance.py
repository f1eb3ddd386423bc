"""
Process instances (traces) and the conformance check.

A trace records the state of every element at t = 0..t_end and names the
model it was recorded against; checking conformance needs both. All
violations are collected, ordered by time index, never just the first.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .constants import VERDICT_CONFORMING, VERDICT_NON_CONFORMING
from .exceptions import ModelMismatchError, StateMismatchError, UnknownElementError
from .models import ProcessModel
from .semantics import (
    ElementState,
    InstanceState,
    LegalityViolation,
    Rule,
    step_violations,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Trace:
    """
    An instance of a process: one state per time index.

    `times` holds the recorded index labels; it defaults to 0..len-1 and
    only differs from that for traces read leniently from malformed files.
    """
    model_name: str
    states: Tuple[InstanceState, ...]
    times: Optional[Tuple[int, ...]] = field(default=None)

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise ValueError("a trace needs at least one state")
        object.__setattr__(self, "states", states)
        times = tuple(range(len(states))) if self.times is None else tuple(self.times)
        if len(times) != len(states):
            raise ValueError("one time label per state is required")
        object.__setattr__(self, "times", times)

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, index: int) -> InstanceState:
        return self.states[index]

    def __iter__(self):
        return iter(self.states)

    @property
    def steps(self) -> int:
        """Number of transitions (t_end)."""
        return len(self.states) - 1

    @property
    def element_ids(self) -> Tuple[str, ...]:
        return tuple(self.states[0])

    @property
    def has_consecutive_times(self) -> bool:
        return self.times == tuple(range(len(self.states)))

    def prefix(self, t_end: int) -> "Trace":
        """The trace restricted to t = 0..t_end."""
        if t_end < 0:
            raise ValueError("t_end must be non-negative")
        return Trace(self.model_name, self.states[: t_end + 1], self.times[: t_end + 1])

    def replace_state(self, t: int, changes: Mapping[str, ElementState]) -> "Trace":
        """A copy with the state at position `t` updated by `changes`."""
        states = list(self.states)
        states[t] = states[t].evolve(changes)
        return Trace(self.model_name, tuple(states), self.times)

    def relabel(self, position: int, label: int) -> "Trace":
        times = list(self.times)
        times[position] = label
        return Trace(self.model_name, self.states, tuple(times))

    def first_index(self, element_id: str, state: ElementState) -> Optional[int]:
        for t, snapshot in enumerate(self.states):
            if snapshot[element_id] is state:
                return t
        return None


@dataclass(frozen=True)
class TimedViolation:
    t: int
    violation: LegalityViolation

    @property
    def rule(self) -> Rule:
        return self.violation.rule


@dataclass(frozen=True)
class ConformanceReport:
    """Result of `check_trace`; conforming iff there are no violations."""
    model_name: str
    violations: Tuple[TimedViolation, ...] = ()

    @property
    def is_conforming(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return VERDICT_CONFORMING if self.is_conforming else VERDICT_NON_CONFORMING

    def rules(self) -> List[Rule]:
        return [v.rule for v in self.violations]

    def at(self, t: int) -> List[LegalityViolation]:
        return [v.violation for v in self.violations if v.t == t]


def _check_elements(model: ProcessModel, trace: Trace) -> None:
    expected = set(model.element_ids)
    for state in trace.states:
        unknown = sorted(set(state) - expected)
        if unknown:
            raise UnknownElementError(unknown[0], f"process '{model.name}'")
        missing = sorted(expected - set(state))
        if missing:
            raise StateMismatchError(
                f"trace state is missing elements of '{model.name}': {', '.join(missing)}"
            )


def check_trace(model: ProcessModel, trace: Trace) -> ConformanceReport:
    """
    Check whether a trace adheres to its process model.

    Reports R6_TIME for malformed index labels, R1_INIT when the first state
    is not all-Inactive, and every step violation tagged with the later index.

    Raises:
        ModelMismatchError: If the trace names another model
        UnknownElementError: If the trace mentions elements the model lacks
    """
    if trace.model_name != model.name:
        raise ModelMismatchError(
            f"trace was recorded for '{trace.model_name}', not for '{model.name}'"
        )
    _check_elements(model, trace)

    found: List[TimedViolation] = []
    for position, label in enumerate(trace.times):
        if label != position:
            found.append(TimedViolation(position, LegalityViolation(
                Rule.R6_TIME, (),
                f"state {position} is labelled t={label}; indexes must run 0, 1, 2, ...",
            )))

    started = tuple(e for e in model.element_ids if trace.states[0][e].started)
    if started:
        found.append(TimedViolation(0, LegalityViolation(
            Rule.R1_INIT, started,
            f"initial state must be all inactive; started: {', '.join(started)}",
        )))

    for t in range(trace.steps):
        for violation in step_violations(model, trace.states[t], trace.states[t + 1]):
            found.append(TimedViolation(t + 1, violation))

    found.sort(key=lambda v: (v.t,) + v.violation.sort_key())
    report = ConformanceReport(model.name, tuple(found))
    logger.info(
        f"Checked trace of {len(trace)} states against '{model.name}': {report.verdict} "
        f"({len(found)} violations)"
    )
    return report


def check_traces(model: ProcessModel, traces: Mapping[str, Trace]) -> Dict[str, ConformanceReport]:
    """Check a batch of named traces (e.g. every recorded instance of a team)."""
    return {name: check_trace(model, traces[name]) for name in sorted(traces)}


def all_conform(reports: Iterable[ConformanceReport]) -> bool:
    return all(report.is_conforming for report in reports)


@dataclass(frozen=True)
class ElementSummary:
    """How one element evolved over a trace."""
    element_id: str
    first_active: Optional[int]
    first_done: Optional[int]
    activations: int
    final_state: ElementState


def summarize(trace: Trace) -> Dict[str, ElementSummary]:
    """
    Per-element first-active index, first-done index and activation count.

    An activation is any move into Active from another state (or Active at
    t=0); more than one activation means the element was reworked.
    """
    summary: Dict[str, ElementSummary] = {}
    for element_id in trace.element_ids:
        activations = 0
        previous: Optional[ElementState] = None
        for state in trace.states:
            current = state[element_id]
            if current is ElementState.ACTIVE and previous is not ElementState.ACTIVE:
                activations += 1
            previous = current
        summary[element_id] = ElementSummary(
            element_id=element_id,
            first_active=trace.first_index(element_id, ElementState.ACTIVE),
            first_done=trace.first_index(element_id, ElementState.DONE),
            activations=activations,
            final_state=trace.states[-1][element_id],
        )
    return summary
