"""
Linear temporal logic over finite traces.

Formulas are immutable trees. Two evaluation routes are provided and must
agree:

- `eval` / `eval_at` compute truth bottom-up over the trace positions,
  one boolean vector per subformula.
- `progress` / `finish` consume the trace one state at a time and decide the
  residual at the end; this is the route used during search.

Next is strong: `X φ` is false at the last position.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, List

from .conformance import Trace
from .exceptions import UnknownElementError
from .models import ProcessModel
from .semantics import ElementState, InstanceState

logger = logging.getLogger(__name__)


class Predicate(Enum):
    INACTIVE = "inactive"
    ACTIVE = "active"
    DONE = "done"
    STARTED = "started"

    def holds(self, state: ElementState) -> bool:
        if self is Predicate.STARTED:
            return state.started
        return state.value == self.value


@dataclass(frozen=True)
class Formula:
    """Base class of all formula nodes."""


@dataclass(frozen=True)
class TrueFormula(Formula):
    pass


@dataclass(frozen=True)
class FalseFormula(Formula):
    pass


TRUE = TrueFormula()
FALSE = FalseFormula()


@dataclass(frozen=True)
class Atom(Formula):
    predicate: Predicate
    element_id: str

    def holds_in(self, state: InstanceState) -> bool:
        return self.predicate.holds(state[self.element_id])


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class BoundedEventually(Formula):
    bound: int
    operand: Formula

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError(f"bound must be a natural number, got {self.bound}")


@dataclass(frozen=True)
class BoundedAlways(Formula):
    bound: int
    operand: Formula

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError(f"bound must be a natural number, got {self.bound}")


_UNARY = (Not, Next, Eventually, Always, BoundedEventually, BoundedAlways)
_BINARY = (And, Or, Implies, Until)
_TEMPORAL = (Next, Eventually, Always, Until, BoundedEventually, BoundedAlways)


def inactive(element_id: str) -> Atom:
    return Atom(Predicate.INACTIVE, element_id)


def active(element_id: str) -> Atom:
    return Atom(Predicate.ACTIVE, element_id)


def done(element_id: str) -> Atom:
    return Atom(Predicate.DONE, element_id)


def started(element_id: str) -> Atom:
    return Atom(Predicate.STARTED, element_id)


def children(formula: Formula) -> List[Formula]:
    if isinstance(formula, _UNARY):
        return [formula.operand]
    if isinstance(formula, _BINARY):
        return [formula.left, formula.right]
    return []


def atoms(formula: Formula) -> FrozenSet[str]:
    """Element ids mentioned by the formula."""
    if isinstance(formula, Atom):
        return frozenset({formula.element_id})
    found: FrozenSet[str] = frozenset()
    for child in children(formula):
        found |= atoms(child)
    return found


def check_atoms(formula: Formula, model: ProcessModel) -> None:
    """
    Raises:
        UnknownElementError: For the first (lexicographic) id the model lacks
    """
    unknown = sorted(atoms(formula) - set(model.element_ids))
    if unknown:
        raise UnknownElementError(unknown[0], f"process '{model.name}'")


def is_temporal(formula: Formula) -> bool:
    """True if any temporal operator occurs in the formula."""
    if isinstance(formula, _TEMPORAL):
        return True
    return any(is_temporal(child) for child in children(formula))


def depth(formula: Formula) -> int:
    nested = children(formula)
    return 1 + max((depth(child) for child in nested), default=0)


# Smart constructors with constant folding


def mk_not(operand: Formula) -> Formula:
    if operand == TRUE:
        return FALSE
    if operand == FALSE:
        return TRUE
    if isinstance(operand, Not):
        return operand.operand
    return Not(operand)


def mk_and(left: Formula, right: Formula) -> Formula:
    if left == FALSE or right == FALSE:
        return FALSE
    if left == TRUE:
        return right
    if right == TRUE or left == right:
        return left
    return And(left, right)


def mk_or(left: Formula, right: Formula) -> Formula:
    if left == TRUE or right == TRUE:
        return TRUE
    if left == FALSE:
        return right
    if right == FALSE or left == right:
        return left
    return Or(left, right)


def mk_implies(left: Formula, right: Formula) -> Formula:
    if left == FALSE or right == TRUE:
        return TRUE
    if left == TRUE:
        return right
    if right == FALSE:
        return mk_not(left)
    return Implies(left, right)


# Direct evaluation


def _vector(formula: Formula, states: List[InstanceState]) -> List[bool]:
    n = len(states)

    if isinstance(formula, TrueFormula):
        return [True] * n
    if isinstance(formula, FalseFormula):
        return [False] * n
    if isinstance(formula, Atom):
        return [formula.holds_in(state) for state in states]
    if isinstance(formula, Not):
        return [not value for value in _vector(formula.operand, states)]

    if isinstance(formula, (And, Or, Implies)):
        left = _vector(formula.left, states)
        right = _vector(formula.right, states)
        if isinstance(formula, And):
            return [a and b for a, b in zip(left, right)]
        if isinstance(formula, Or):
            return [a or b for a, b in zip(left, right)]
        return [(not a) or b for a, b in zip(left, right)]

    if isinstance(formula, Next):
        sub = _vector(formula.operand, states)
        return sub[1:] + [False]

    if isinstance(formula, (Eventually, Always)):
        sub = _vector(formula.operand, states)
        result = [False] * n
        carry = isinstance(formula, Always)
        for i in range(n - 1, -1, -1):
            carry = (sub[i] and carry) if isinstance(formula, Always) else (sub[i] or carry)
            result[i] = carry
        return result

    if isinstance(formula, Until):
        left = _vector(formula.left, states)
        right = _vector(formula.right, states)
        result = [False] * n
        carry = False
        for i in range(n - 1, -1, -1):
            carry = right[i] or (left[i] and carry)
            result[i] = carry
        return result

    if isinstance(formula, (BoundedEventually, BoundedAlways)):
        sub = _vector(formula.operand, states)
        combine = any if isinstance(formula, BoundedEventually) else all
        return [combine(sub[i : min(i + formula.bound, n - 1) + 1]) for i in range(n)]

    raise TypeError(f"not a formula: {formula!r}")


def eval_at(formula: Formula, trace: Trace, position: int) -> bool:
    """
    Evaluate a formula at one position of a finite trace.

    Args:
        formula: Formula to evaluate
        trace: Finite trace
        position: Index in 0..t_end

    Returns:
        Truth value over the suffix starting at `position`

    Raises:
        UnknownElementError: If an atom names an element the trace lacks
        IndexError: If the position lies outside the trace
    """
    if not 0 <= position < len(trace):
        raise IndexError(f"position {position} outside trace of {len(trace)} states")
    return _vector(formula, list(trace.states))[position]


def eval(formula: Formula, trace: Trace) -> bool:  # noqa: A001
    """Evaluate a formula at position 0."""
    return eval_at(formula, trace, 0)


# Progression


def progress(formula: Formula, state: InstanceState) -> Formula:
    """
    Consume one state and return the obligation on the remaining suffix.

    A strong Next leaves its operand conjoined with `F true`, the obligation
    that another state follows.
    """
    if isinstance(formula, (TrueFormula, FalseFormula)):
        return formula
    if isinstance(formula, Atom):
        return TRUE if formula.holds_in(state) else FALSE
    if isinstance(formula, Not):
        return mk_not(progress(formula.operand, state))
    if isinstance(formula, And):
        return mk_and(progress(formula.left, state), progress(formula.right, state))
    if isinstance(formula, Or):
        return mk_or(progress(formula.left, state), progress(formula.right, state))
    if isinstance(formula, Implies):
        return mk_implies(progress(formula.left, state), progress(formula.right, state))
    if isinstance(formula, Next):
        return mk_and(formula.operand, Eventually(TRUE))
    if isinstance(formula, Eventually):
        return mk_or(progress(formula.operand, state), formula)
    if isinstance(formula, Always):
        return mk_and(progress(formula.operand, state), formula)
    if isinstance(formula, Until):
        return mk_or(
            progress(formula.right, state),
            mk_and(progress(formula.left, state), formula),
        )
    if isinstance(formula, BoundedEventually):
        rest = BoundedEventually(formula.bound - 1, formula.operand) if formula.bound > 0 else FALSE
        return mk_or(progress(formula.operand, state), rest)
    if isinstance(formula, BoundedAlways):
        rest = BoundedAlways(formula.bound - 1, formula.operand) if formula.bound > 0 else TRUE
        return mk_and(progress(formula.operand, state), rest)
    raise TypeError(f"not a formula: {formula!r}")


def finish(formula: Formula) -> bool:
    """Decide a residual formula on the empty suffix at the end of a trace."""
    if isinstance(formula, TrueFormula):
        return True
    if isinstance(formula, (FalseFormula, Atom)):
        return False
    if isinstance(formula, Not):
        return not finish(formula.operand)
    if isinstance(formula, And):
        return finish(formula.left) and finish(formula.right)
    if isinstance(formula, Or):
        return finish(formula.left) or finish(formula.right)
    if isinstance(formula, Implies):
        return (not finish(formula.left)) or finish(formula.right)
    if isinstance(formula, (Next, Eventually, Until, BoundedEventually)):
        return False
    if isinstance(formula, (Always, BoundedAlways)):
        return True
    raise TypeError(f"not a formula: {formula!r}")


def eval_by_progression(formula: Formula, trace: Trace) -> bool:
    """Evaluate at position 0 by progressing through every state, then finishing."""
    residual = formula
    for state in trace.states:
        residual = progress(residual, state)
    return finish(residual)
