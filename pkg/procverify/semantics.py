"""
Small-step semantics of process instances.

An instance assigns every element one of three states at each time point.
This module decides which steps between two states are legal, enumerates
legal successors, and builds synchronized feedback resets.

Rules checked for a step s -> s_next:
    R2_ACT   Inactive -> Active needs every prerequisite Active or Done in s.
    R3_DONE  Done in s_next needs Active or Done in s.
    R4_RESET a backward move leaves no element of post(e) Done in s_next.
    R5_INV   every Active element of s_next has its prerequisites started.
R1_INIT and R6_TIME concern whole traces and live in `conformance`.
"""

import itertools
import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

from .exceptions import StateMismatchError, UnknownElementError
from .models import ProcessModel

logger = logging.getLogger(__name__)


class ElementState(Enum):
    INACTIVE = "inactive"
    ACTIVE = "active"
    DONE = "done"

    @property
    def rank(self) -> int:
        return _STATE_RANK[self]

    @property
    def started(self) -> bool:
        return self is not ElementState.INACTIVE


_STATE_RANK = {ElementState.INACTIVE: 0, ElementState.ACTIVE: 1, ElementState.DONE: 2}
STATE_ORDER = (ElementState.INACTIVE, ElementState.ACTIVE, ElementState.DONE)


class Rule(Enum):
    R1_INIT = "R1_INIT"
    R2_ACT = "R2_ACT"
    R3_DONE = "R3_DONE"
    R4_RESET = "R4_RESET"
    R5_INV = "R5_INV"
    R6_TIME = "R6_TIME"


_RULE_ORDER = {rule: index for index, rule in enumerate(Rule)}


@dataclass(frozen=True)
class LegalityViolation:
    """A broken semantics rule; `elements[0]` is the element the rule was checked for."""
    rule: Rule
    elements: Tuple[str, ...]
    message: str

    def sort_key(self) -> Tuple:
        return (_RULE_ORDER[self.rule], self.elements)


StateLike = Union[ElementState, str]


def _coerce(value: StateLike) -> ElementState:
    return value if isinstance(value, ElementState) else ElementState(value)


class InstanceState(Mapping[str, ElementState]):
    """
    Immutable, hashable snapshot mapping element ids to states.

    Iteration is in lexicographic id order.
    """

    __slots__ = ("_states", "_key")

    def __init__(self, states: Union[Mapping[str, StateLike], Iterable[Tuple[str, StateLike]]] = ()):
        items = dict(states).items() if not isinstance(states, dict) else states.items()
        ordered = sorted((element_id, _coerce(value)) for element_id, value in items)
        self._key: Tuple[Tuple[str, ElementState], ...] = tuple(ordered)
        self._states: Dict[str, ElementState] = dict(ordered)

    @classmethod
    def uniform(cls, element_ids: Iterable[str], state: ElementState = ElementState.INACTIVE) -> "InstanceState":
        return cls({element_id: state for element_id in element_ids})

    def __getitem__(self, element_id: str) -> ElementState:
        try:
            return self._states[element_id]
        except KeyError:
            raise UnknownElementError(element_id, "instance state") from None

    def __contains__(self, element_id: object) -> bool:
        return element_id in self._states

    def __iter__(self) -> Iterator[str]:
        return iter(self._states)

    def __len__(self) -> int:
        return len(self._states)

    def __hash__(self) -> int:
        return hash(self._key)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, InstanceState):
            return self._key == other._key
        return Mapping.__eq__(self, other)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}={v.value}" for k, v in self._key)
        return f"InstanceState({body})"

    def started(self, element_id: str) -> bool:
        return self[element_id].started

    def evolve(self, changes: Mapping[str, StateLike]) -> "InstanceState":
        """Return a new state with `changes` applied; unknown ids are rejected."""
        for element_id in changes:
            if element_id not in self._states:
                raise UnknownElementError(element_id, "instance state")
        merged = dict(self._states)
        merged.update({k: _coerce(v) for k, v in changes.items()})
        return InstanceState(merged)

    def delta(self, previous: "InstanceState") -> Dict[str, ElementState]:
        """Elements whose state differs from `previous`, in id order."""
        return {k: v for k, v in self._key if previous._states.get(k) is not v}

    def with_state(self, state: ElementState) -> List[str]:
        return [k for k, v in self._key if v is state]


def initial_state(model: ProcessModel) -> InstanceState:
    """Every element Inactive."""
    return InstanceState.uniform(model.element_ids)


def _ensure_total(model: ProcessModel, *states: InstanceState) -> None:
    expected = set(model.element_ids)
    for state in states:
        if set(state) != expected:
            missing = sorted(expected - set(state))
            extra = sorted(set(state) - expected)
            raise StateMismatchError(
                f"state is not total over process '{model.name}' "
                f"(missing: {missing or 'none'}, unknown: {extra or 'none'})"
            )


def support_violations(model: ProcessModel, state: InstanceState) -> List[LegalityViolation]:
    """R5_INV: every Active element has all prerequisites Active or Done."""
    found = []
    for element_id in model.element_ids:
        if state[element_id] is not ElementState.ACTIVE:
            continue
        missing = tuple(p for p in model.pre(element_id) if not state[p].started)
        if missing:
            found.append(LegalityViolation(
                Rule.R5_INV, (element_id,) + missing,
                f"'{element_id}' is active while prerequisites {', '.join(missing)} are inactive",
            ))
    return found


def is_supported(model: ProcessModel, state: InstanceState) -> bool:
    """Whether `state` satisfies the support invariant."""
    _ensure_total(model, state)
    return not support_violations(model, state)


def step_violations(model: ProcessModel, s: InstanceState, s_next: InstanceState) -> List[LegalityViolation]:
    """Rules R2-R5 for one step, without the totality check of `check_step`."""
    found: List[LegalityViolation] = []
    for element_id in model.element_ids:
        before, after = s[element_id], s_next[element_id]
        if before is after:
            continue

        if before is ElementState.INACTIVE and after is ElementState.ACTIVE:
            missing = tuple(p for p in model.pre(element_id) if not s[p].started)
            if missing:
                found.append(LegalityViolation(
                    Rule.R2_ACT, (element_id,) + missing,
                    f"'{element_id}' activated before prerequisites {', '.join(missing)} started",
                ))

        if after is ElementState.DONE and before is ElementState.INACTIVE:
            found.append(LegalityViolation(
                Rule.R3_DONE, (element_id,),
                f"'{element_id}' jumped from inactive to done without being active",
            ))

        if after.rank < before.rank:
            still_done = tuple(q for q in model.post(element_id) if s_next[q] is ElementState.DONE)
            if still_done:
                found.append(LegalityViolation(
                    Rule.R4_RESET, (element_id,) + still_done,
                    f"'{element_id}' moved back from {before.value} to {after.value} "
                    f"while dependents {', '.join(still_done)} stayed done",
                ))

    found.extend(support_violations(model, s_next))
    return sorted(found, key=LegalityViolation.sort_key)


def check_step(model: ProcessModel, s: InstanceState, s_next: InstanceState) -> List[LegalityViolation]:
    """
    Check one step of an instance.

    Args:
        model: The process model
        s: State at time t
        s_next: State at time t+1

    Returns:
        Violations ordered by rule then element; empty means the step is legal

    Raises:
        StateMismatchError: If either state is not total over the model
    """
    _ensure_total(model, s, s_next)
    return step_violations(model, s, s_next)


def _local_options(model: ProcessModel, s: InstanceState, element_id: str) -> Tuple[ElementState, ...]:
    current = s[element_id]
    if current is ElementState.INACTIVE:
        if all(s[p].started for p in model.pre(element_id)):
            return (ElementState.INACTIVE, ElementState.ACTIVE)
        return (ElementState.INACTIVE,)
    return STATE_ORDER


def successors(model: ProcessModel, s: InstanceState) -> Iterator[InstanceState]:
    """
    Lazily yield every legal successor of `s` in canonical order.

    Elements vary in lexicographic id order (the last id fastest) and each
    element's options are tried Inactive < Active < Done. `s` itself is
    always among the results.
    """
    _ensure_total(model, s)
    element_ids = model.element_ids
    options = [_local_options(model, s, element_id) for element_id in element_ids]
    for combination in itertools.product(*options):
        candidate = InstanceState(zip(element_ids, combination))
        if not step_violations(model, s, candidate):
            yield candidate


def forward_successors(
    model: ProcessModel,
    s: InstanceState,
    movable: Optional[Iterable[str]] = None,
    finishable: Optional[Iterable[str]] = None,
) -> Iterator[InstanceState]:
    """
    Yield the successors of `s` reachable by forward moves only.

    Only elements in `movable` may activate and only elements in
    `finishable` may become Done (None means all elements). No element
    moves backwards, so every yielded state is a legal successor.
    """
    movable_set = set(model.element_ids if movable is None else movable)
    finishable_set = set(model.element_ids if finishable is None else finishable)
    element_ids = model.element_ids
    options: List[Tuple[ElementState, ...]] = []
    for element_id in element_ids:
        current = s[element_id]
        if (
            current is ElementState.INACTIVE
            and element_id in movable_set
            and all(s[p].started for p in model.pre(element_id))
        ):
            options.append((ElementState.INACTIVE, ElementState.ACTIVE))
        elif current is ElementState.ACTIVE and element_id in finishable_set:
            options.append((ElementState.ACTIVE, ElementState.DONE))
        else:
            options.append((current,))
    for combination in itertools.product(*options):
        yield InstanceState(zip(element_ids, combination))


def reset_set(model: ProcessModel, s: InstanceState, target: str) -> Tuple[str, ...]:
    """Started elements among `target` and everything downstream of it."""
    model.element(target)
    scope = (target,) + model.post_closure(target)
    return tuple(sorted(e for e in scope if s[e].started))


def feedback_reset(model: ProcessModel, s: InstanceState, target: str) -> InstanceState:
    """
    Synchronized feedback move re-opening `target` and its dependents.

    Every started element of {target} and post*(target) becomes Inactive in
    one step; the result is a legal successor of `s`.

    Raises:
        UnknownElementError: If `target` is not an element of the model
    """
    _ensure_total(model, s)
    reopened = reset_set(model, s, target)
    logger.debug(f"Feedback to '{target}' re-opens {', '.join(reopened) or 'nothing'}")
    return s.evolve({element_id: ElementState.INACTIVE for element_id in reopened})
