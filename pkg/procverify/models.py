"""
Process model domain types.

A ProcessModel is the static development process: a set of elements
(activities and artifacts) wired by Require/Produce associations, plus
feedback annotations that document where quality gates may loop back.
All types are immutable; a model can be shared freely between threads.
"""

import graphlib
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

from .constants import ELEMENT_ID_PATTERN
from .exceptions import CyclicModelError, UnknownElementError

_ELEMENT_ID_RE = re.compile(rf"^{ELEMENT_ID_PATTERN}$")


def is_valid_id(value: str) -> bool:
    """Check an element or model identifier against `[a-z][a-z0-9_]*`."""
    return bool(_ELEMENT_ID_RE.match(value))


class ElementKind(Enum):
    """Activity or artifact sub-kind; the value is the DSL keyword."""
    HUMAN_TASK = "human"
    AUTOMATED_PROCEDURE = "automated"
    DATA = "data"
    LOGICAL_STATEMENT = "logical"
    FUNCTIONAL_DESCRIPTION = "functional"

    @property
    def is_activity(self) -> bool:
        return self in (ElementKind.HUMAN_TASK, ElementKind.AUTOMATED_PROCEDURE)

    @property
    def is_artifact(self) -> bool:
        return not self.is_activity

    @property
    def category(self) -> str:
        return "activity" if self.is_activity else "artifact"

    @classmethod
    def activity_kinds(cls) -> Tuple["ElementKind", ...]:
        return tuple(k for k in cls if k.is_activity)

    @classmethod
    def artifact_kinds(cls) -> Tuple["ElementKind", ...]:
        return tuple(k for k in cls if k.is_artifact)


class Phase(Enum):
    """Development phase, totally ordered Planning < ... < Operations."""
    PLANNING = "planning"
    DEVELOPMENT = "development"
    DEPLOYMENT = "deployment"
    OPERATIONS = "operations"

    @property
    def rank(self) -> int:
        return _PHASE_ORDER.index(self)

    def __lt__(self, other: "Phase") -> bool:
        if not isinstance(other, Phase):
            return NotImplemented
        return self.rank < other.rank


_PHASE_ORDER = [Phase.PLANNING, Phase.DEVELOPMENT, Phase.DEPLOYMENT, Phase.OPERATIONS]


class AssociationKind(Enum):
    REQUIRE = "require"
    PRODUCE = "produce"


@dataclass(frozen=True, order=True)
class SourceSpan:
    """1-based line/column range of a construct in a text file."""
    line: int
    column: int
    end_line: int
    end_column: int

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError("source spans are 1-based")
        if (self.end_line, self.end_column) < (self.line, self.column):
            raise ValueError("source span ends before it starts")

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Element:
    """An activity or artifact of the process."""
    id: str
    kind: ElementKind
    phase: Phase
    lane: str = ""
    external: bool = False
    display_name: str = ""

    def __post_init__(self):
        if self.external and self.kind.is_activity:
            raise ValueError(f"activity '{self.id}' cannot be external")

    @property
    def is_activity(self) -> bool:
        return self.kind.is_activity

    @property
    def is_artifact(self) -> bool:
        return self.kind.is_artifact


@dataclass(frozen=True)
class Association:
    """Require (artifact -> activity) or Produce (activity -> artifact) edge."""
    kind: AssociationKind
    source: str
    target: str

    def sort_key(self) -> Tuple[str, str, str]:
        return (self.kind.value, self.source, self.target)


@dataclass(frozen=True)
class FeedbackAnnotation:
    """Documented feedback arrow from a V&V artifact back to an earlier element."""
    source: str
    target: str
    label: str = ""

    def sort_key(self) -> Tuple[str, str, str]:
        return (self.source, self.target, self.label)


def _sorted_ids(ids: Iterable[str]) -> Tuple[str, ...]:
    return tuple(sorted(set(ids)))


@dataclass(frozen=True)
class ProcessModel:
    """
    The static development process.

    Elements, associations and feedback annotations are stored as frozensets,
    so equality does not depend on declaration order. `source_map` optionally
    maps an element id, Association or FeedbackAnnotation to the SourceSpan it
    was parsed from; it takes no part in equality.
    """
    name: str
    elements: FrozenSet[Element] = frozenset()
    associations: FrozenSet[Association] = frozenset()
    feedback: FrozenSet[FeedbackAnnotation] = frozenset()
    source_map: Optional[Mapping[object, SourceSpan]] = field(
        default=None, compare=False, hash=False, repr=False
    )

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.elements))
        object.__setattr__(self, "associations", frozenset(self.associations))
        object.__setattr__(self, "feedback", frozenset(self.feedback))

    # --- lookups ---

    @cached_property
    def _by_id(self) -> Dict[str, Element]:
        index: Dict[str, Element] = {}
        for element in sorted(self.elements, key=lambda e: (e.id, e.kind.value, e.phase.value)):
            index.setdefault(element.id, element)
        return index

    @cached_property
    def element_ids(self) -> Tuple[str, ...]:
        """Known element ids in lexicographic order."""
        return tuple(sorted(self._by_id))

    @cached_property
    def _pre_index(self) -> Dict[str, Tuple[str, ...]]:
        sources: Dict[str, set] = {}
        for assoc in self.associations:
            sources.setdefault(assoc.target, set()).add(assoc.source)
        return {target: _sorted_ids(ids) for target, ids in sources.items()}

    @cached_property
    def _post_index(self) -> Dict[str, Tuple[str, ...]]:
        targets: Dict[str, set] = {}
        for assoc in self.associations:
            targets.setdefault(assoc.source, set()).add(assoc.target)
        return {source: _sorted_ids(ids) for source, ids in targets.items()}

    def __contains__(self, element_id: object) -> bool:
        return element_id in self._by_id

    def element(self, element_id: str) -> Element:
        try:
            return self._by_id[element_id]
        except KeyError:
            raise UnknownElementError(element_id, f"process '{self.name}'") from None

    def activities(self) -> Tuple[Element, ...]:
        return tuple(self._by_id[i] for i in self.element_ids if self._by_id[i].is_activity)

    def artifacts(self) -> Tuple[Element, ...]:
        return tuple(self._by_id[i] for i in self.element_ids if self._by_id[i].is_artifact)

    def phase_of(self, element_id: str) -> Phase:
        return self.element(element_id).phase

    def span_of(self, key: object) -> Optional[SourceSpan]:
        if self.source_map is None:
            return None
        return self.source_map.get(key)

    # --- pre / post ---

    def pre(self, element_id: str) -> Tuple[str, ...]:
        """Prerequisites of an element, lexicographically ordered."""
        self.element(element_id)
        return self._pre_index.get(element_id, ())

    def post(self, element_id: str) -> Tuple[str, ...]:
        """Elements for which `element_id` is a prerequisite."""
        self.element(element_id)
        return self._post_index.get(element_id, ())

    def producers(self, element_id: str) -> Tuple[str, ...]:
        return _sorted_ids(
            a.source for a in self.associations
            if a.kind is AssociationKind.PRODUCE and a.target == element_id
        )

    def pre_closure(self, element_id: str) -> Tuple[str, ...]:
        """All transitive prerequisites (pre*), excluding the element itself."""
        return self._closure(element_id, self._pre_index)

    def post_closure(self, element_id: str) -> Tuple[str, ...]:
        """All transitive dependents (post*), excluding the element itself."""
        return self._closure(element_id, self._post_index)

    def _closure(self, element_id: str, index: Mapping[str, Tuple[str, ...]]) -> Tuple[str, ...]:
        self.element(element_id)
        seen: set = set()
        stack = list(index.get(element_id, ()))
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            stack.extend(index.get(current, ()))
        seen.discard(element_id)
        return _sorted_ids(seen)

    # --- ordering ---

    @cached_property
    def _levels(self) -> Dict[str, int]:
        sorter = graphlib.TopologicalSorter()
        for element_id in self.element_ids:
            sorter.add(element_id, *self._pre_index.get(element_id, ()))
        try:
            order = list(sorter.static_order())
        except graphlib.CycleError as exc:
            raise CyclicModelError(exc.args[1]) from None

        levels: Dict[str, int] = {}
        for node in order:
            prerequisites = self._pre_index.get(node, ())
            levels[node] = 1 + max((levels[p] for p in prerequisites), default=0)
        return {element_id: levels[element_id] for element_id in self.element_ids}

    def topo_levels(self) -> Dict[str, int]:
        """
        Topological level of every element.

        level(e) = 1 if pre(e) is empty, else 1 + max level over pre(e).

        Raises:
            CyclicModelError: If the association graph has a cycle
        """
        return dict(self._levels)

    # --- construction helpers ---

    def with_changes(self, **changes) -> "ProcessModel":
        """Return a copy with some fields replaced (source map dropped)."""
        values = {
            "name": self.name,
            "elements": self.elements,
            "associations": self.associations,
            "feedback": self.feedback,
        }
        values.update(changes)
        return ProcessModel(**values)


def pre(model: ProcessModel, element_id: str) -> Tuple[str, ...]:
    """Prerequisites of `element_id` in `model`."""
    return model.pre(element_id)


def post(model: ProcessModel, element_id: str) -> Tuple[str, ...]:
    """Elements for which `element_id` is a prerequisite."""
    return model.post(element_id)


def topo_levels(model: ProcessModel) -> Dict[str, int]:
    """Topological level of every element of an acyclic model."""
    return model.topo_levels()


def produce(activity: str, artifact: str) -> Association:
    return Association(AssociationKind.PRODUCE, activity, artifact)


def require(artifact: str, activity: str) -> Association:
    return Association(AssociationKind.REQUIRE, artifact, activity)
