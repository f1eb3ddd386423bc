"""
Explicit-state search over legal evolutions of a process model.

- `reach` finds a shortest evolution whose final state satisfies a state
  predicate (breadth-first, deduplicating visited states).
- `enumerate_traces` lists every conforming trace of a fixed length; it is
  exponential and guarded by an element-count limit.
- `holds_on_all` checks a temporal formula against every enumerated trace.

By default `reach` explores forward moves only, restricted to the elements
the goal can depend on: the goal's atoms and their prerequisite closure.
A state reachable by any legal evolution is reachable by forward moves in
no more steps, and elements outside a prerequisite-closed set never enable
anything inside it, so the shortest witness length is unchanged.
"""

import logging
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from .conformance import Trace
from .constants import ENUMERATE_MAX_ELEMENTS, EXHAUSTIVE_REACH_MAX_ELEMENTS
from .exceptions import EnumerationGuardError, TemporalGoalError
from .ltl import Formula, atoms, check_atoms, eval as eval_formula, finish, is_temporal, progress
from .models import ProcessModel
from .progress_tracker import ProgressTracker, SearchStage
from .semantics import InstanceState, forward_successors, initial_state, successors

logger = logging.getLogger(__name__)


def holds_in_state(formula: Formula, state: InstanceState) -> bool:
    """Truth of a state predicate (no temporal operators) in one state."""
    return finish(progress(formula, state))


def goal_cone(model: ProcessModel, goal: Formula) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    """
    Elements a search for `goal` needs to move.

    Returns:
        (movable, finishable): the goal's atoms with their prerequisite
        closure, and the goal's atoms themselves
    """
    goal_ids = atoms(goal)
    movable: Set[str] = set(goal_ids)
    for element_id in goal_ids:
        movable.update(model.pre_closure(element_id))
    return frozenset(movable), frozenset(goal_ids)


def _check_guard(model: ProcessModel, limit: int, force: bool, what: str) -> None:
    size = len(model.element_ids)
    if size > limit and not force:
        raise EnumerationGuardError(
            f"{what} over {size} elements explores up to 3^{size} states; "
            f"the limit is {limit} elements (use force to override)"
        )


def reach(
    model: ProcessModel,
    goal: Formula,
    depth: int,
    exhaustive: bool = False,
    force: bool = False,
    tracker: Optional[ProgressTracker] = None,
) -> Optional[Trace]:
    """
    Find a shortest legal evolution whose final state satisfies `goal`.

    Args:
        model: A well-formed process model
        goal: State predicate without temporal operators
        depth: Maximum number of steps of the witness
        exhaustive: Explore the full successor relation instead of forward
            moves within the goal's cone (small models only)
        force: Lift the element-count limit of exhaustive mode
        tracker: Optional progress tracker, one report per layer

    Returns:
        Witness trace with at most `depth` steps, or None

    Raises:
        TemporalGoalError: If the goal contains temporal operators
        UnknownElementError: If the goal names an unknown element
        EnumerationGuardError: If exhaustive mode exceeds the element limit
    """
    if is_temporal(goal):
        raise TemporalGoalError("reach goals must be state predicates without X, F, G or U")
    if depth < 0:
        raise ValueError("depth must be a natural number")
    check_atoms(goal, model)
    if exhaustive:
        _check_guard(model, EXHAUSTIVE_REACH_MAX_ELEMENTS, force, "exhaustive reach")

    tracker = tracker or ProgressTracker()
    start = initial_state(model)

    expand = _expander(model, goal, exhaustive)

    parents: Dict[InstanceState, Optional[InstanceState]] = {start: None}
    frontier: List[InstanceState] = [start]

    with tracker.stage(SearchStage.STARTING, f"searching up to depth {depth}"):
        for layer in range(depth + 1):
            for state in frontier:
                if holds_in_state(goal, state):
                    witness = _witness(model, parents, state)
                    tracker.found(f"goal satisfied after {witness.steps} steps", layer)
                    return witness
            if layer == depth:
                break

            following: List[InstanceState] = []
            for state in frontier:
                for candidate in expand(state):
                    if candidate not in parents:
                        parents[candidate] = state
                        following.append(candidate)
            if not following:
                break
            frontier = following
            tracker.report(
                SearchStage.EXPANDING,
                f"{len(frontier)} new states ({len(parents)} visited)",
                layer + 1,
            )

        tracker.exhausted(f"goal not reachable within {depth} steps", depth)
    return None


def _expander(model: ProcessModel, goal: Formula, exhaustive: bool) -> Callable[[InstanceState], Iterator[InstanceState]]:
    if exhaustive:
        return lambda state: successors(model, state)
    movable, finishable = goal_cone(model, goal)
    return lambda state: forward_successors(model, state, movable, finishable)


def _witness(
    model: ProcessModel, parents: Dict[InstanceState, Optional[InstanceState]], state: InstanceState
) -> Trace:
    path: List[InstanceState] = []
    current: Optional[InstanceState] = state
    while current is not None:
        path.append(current)
        current = parents[current]
    return Trace(model.name, tuple(reversed(path)))


def enumerate_traces(
    model: ProcessModel,
    depth: int,
    force: bool = False,
    max_elements: int = ENUMERATE_MAX_ELEMENTS,
) -> Iterator[Trace]:
    """
    Yield every conforming trace with exactly `depth` + 1 states.

    Traces come in canonical order: depth-first over `successors`.

    Raises:
        EnumerationGuardError: If the model has more than `max_elements`
            elements and force is not set
    """
    if depth < 0:
        raise ValueError("depth must be a natural number")
    _check_guard(model, max_elements, force, "enumeration")
    logger.info(f"Enumerating traces of '{model.name}' with {depth} steps")

    path: List[InstanceState] = [initial_state(model)]

    def extend() -> Iterator[Trace]:
        if len(path) == depth + 1:
            yield Trace(model.name, tuple(path))
            return
        for candidate in successors(model, path[-1]):
            path.append(candidate)
            yield from extend()
            path.pop()

    yield from extend()


def count_traces(
    model: ProcessModel,
    depth: int,
    force: bool = False,
    max_elements: int = ENUMERATE_MAX_ELEMENTS,
    tracker: Optional[ProgressTracker] = None,
) -> int:
    """Number of traces `enumerate_traces` would yield, without building them."""
    if depth < 0:
        raise ValueError("depth must be a natural number")
    _check_guard(model, max_elements, force, "enumeration")
    tracker = tracker or ProgressTracker()

    layer: Dict[InstanceState, int] = {initial_state(model): 1}
    with tracker.stage(SearchStage.STARTING, f"counting traces with {depth} steps"):
        for step in range(depth):
            following: Dict[InstanceState, int] = {}
            for state, ways in layer.items():
                for candidate in successors(model, state):
                    following[candidate] = following.get(candidate, 0) + ways
            layer = following
            tracker.report(SearchStage.EXPANDING, f"{len(layer)} distinct states", step + 1)
        total = sum(layer.values())
        tracker.exhausted(f"{total} traces", depth)
    return total


def find_counterexample(
    model: ProcessModel, formula: Formula, depth: int, force: bool = False
) -> Optional[Trace]:
    """First enumerated trace (canonical order) on which `formula` fails."""
    check_atoms(formula, model)
    for trace in enumerate_traces(model, depth, force=force):
        if not eval_formula(formula, trace):
            return trace
    return None


def holds_on_all(model: ProcessModel, formula: Formula, depth: int, force: bool = False) -> bool:
    """
    Whether `formula` holds on every conforming trace with `depth` steps.

    Exhaustive; only meant for small models.
    """
    return find_counterexample(model, formula, depth, force=force) is None
