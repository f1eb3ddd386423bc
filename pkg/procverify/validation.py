"""
Well-formedness validation of process models.

Checks the structural rules W1-W7 and reports every violation instead of
failing on the first one. Validation is a separate, explicit step so that
deliberately ill-formed models can be built and inspected.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .constants import (
    W1_INVALID_ID,
    W2_ENDPOINT_KIND,
    W3_NO_PRODUCT,
    W4_NO_PRODUCER,
    W5_CYCLE,
    W6_FEEDBACK_DIRECTION,
    W7_UNKNOWN_REFERENCE,
    WARN_MULTI_PRODUCER,
)
from .models import AssociationKind, ProcessModel, SourceSpan, is_valid_id

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    """A rule-coded diagnostic with the elements it concerns."""
    code: str
    elements: Tuple[str, ...]
    message: str
    span: Optional[SourceSpan] = None

    def sort_key(self) -> Tuple:
        return (self.code, self.elements, self.message)


@dataclass(frozen=True)
class WellFormednessReport:
    """Outcome of `validate`. Empty `violations` means well-formed."""
    model_name: str
    violations: Tuple[Violation, ...] = ()
    warnings: Tuple[Violation, ...] = ()

    @property
    def is_well_formed(self) -> bool:
        return not self.violations

    def codes(self) -> List[str]:
        return [v.code for v in self.violations]


class ModelValidator:
    """Structural rule checks; each check returns a list of violations."""

    def __init__(self, model: ProcessModel):
        self.model = model
        self.known: Set[str] = {e.id for e in model.elements}

    def run(self) -> WellFormednessReport:
        violations: List[Violation] = []
        for check in (
            self.check_identifiers,
            self.check_references,
            self.check_endpoint_kinds,
            self.check_activity_products,
            self.check_artifact_producers,
            self.check_acyclic,
            self.check_feedback_direction,
        ):
            violations.extend(check())

        warnings = self.check_multiple_producers()
        report = WellFormednessReport(
            model_name=self.model.name,
            violations=tuple(sorted(set(violations), key=Violation.sort_key)),
            warnings=tuple(sorted(set(warnings), key=Violation.sort_key)),
        )
        for warning in report.warnings:
            logger.warning(f"{self.model.name}: {warning.message}")
        logger.info(
            f"Validated process '{self.model.name}': "
            f"{len(report.violations)} violations, {len(report.warnings)} warnings"
        )
        return report

    def _span(self, key: object) -> Optional[SourceSpan]:
        return self.model.span_of(key)

    def check_identifiers(self) -> List[Violation]:
        """W1: invalid model name, invalid element ids, duplicate ids."""
        found: List[Violation] = []
        if not is_valid_id(self.model.name):
            found.append(Violation(
                W1_INVALID_ID, (), f"process name '{self.model.name}' is not a valid identifier"
            ))
        counts = Counter(e.id for e in self.model.elements)
        for element_id in sorted(counts):
            if not is_valid_id(element_id):
                found.append(Violation(
                    W1_INVALID_ID, (element_id,),
                    f"element id '{element_id}' must match [a-z][a-z0-9_]*",
                    self._span(element_id),
                ))
            if counts[element_id] > 1:
                found.append(Violation(
                    W1_INVALID_ID, (element_id,),
                    f"element id '{element_id}' is declared {counts[element_id]} times",
                    self._span(element_id),
                ))
        return found

    def check_references(self) -> List[Violation]:
        """W7: associations and feedback annotations naming unknown ids."""
        found: List[Violation] = []
        for assoc in self.model.associations:
            for endpoint in (assoc.source, assoc.target):
                if endpoint not in self.known:
                    found.append(Violation(
                        W7_UNKNOWN_REFERENCE, (endpoint,),
                        f"{assoc.kind.value} {assoc.source} -> {assoc.target} "
                        f"references unknown element '{endpoint}'",
                        self._span(assoc),
                    ))
        for note in self.model.feedback:
            for endpoint in (note.source, note.target):
                if endpoint not in self.known:
                    found.append(Violation(
                        W7_UNKNOWN_REFERENCE, (endpoint,),
                        f"feedback {note.source} -> {note.target} "
                        f"references unknown element '{endpoint}'",
                        self._span(note),
                    ))
        return found

    def check_endpoint_kinds(self) -> List[Violation]:
        """W2: require must run artifact -> activity, produce activity -> artifact."""
        found: List[Violation] = []
        for assoc in self.model.associations:
            if assoc.source not in self.known or assoc.target not in self.known:
                continue
            source = self.model.element(assoc.source)
            target = self.model.element(assoc.target)
            if assoc.kind is AssociationKind.REQUIRE:
                ok = source.is_artifact and target.is_activity
                expected = "artifact -> activity"
            else:
                ok = source.is_activity and target.is_artifact
                expected = "activity -> artifact"
            if not ok:
                found.append(Violation(
                    W2_ENDPOINT_KIND, (assoc.source, assoc.target),
                    f"{assoc.kind.value} {assoc.source} -> {assoc.target} must connect {expected}",
                    self._span(assoc),
                ))
        return found

    def check_activity_products(self) -> List[Violation]:
        """W3: every activity produces at least one artifact."""
        producing = {
            a.source for a in self.model.associations if a.kind is AssociationKind.PRODUCE
        }
        return [
            Violation(
                W3_NO_PRODUCT, (activity.id,),
                f"activity '{activity.id}' produces no artifact",
                self._span(activity.id),
            )
            for activity in self.model.activities()
            if activity.id not in producing
        ]

    def check_artifact_producers(self) -> List[Violation]:
        """W4: every non-external artifact has a producer."""
        produced = {
            a.target for a in self.model.associations if a.kind is AssociationKind.PRODUCE
        }
        return [
            Violation(
                W4_NO_PRODUCER, (artifact.id,),
                f"artifact '{artifact.id}' is neither external nor produced by any activity",
                self._span(artifact.id),
            )
            for artifact in self.model.artifacts()
            if not artifact.external and artifact.id not in produced
        ]

    def check_acyclic(self) -> List[Violation]:
        """W5: one violation per strongly connected cycle of the association graph."""
        return [
            Violation(
                W5_CYCLE, component,
                f"association cycle through {', '.join(component)}",
                self._span(component[0]),
            )
            for component in self._cycles()
        ]

    def _successor_map(self) -> Dict[str, Set[str]]:
        graph: Dict[str, Set[str]] = {element_id: set() for element_id in self.known}
        for assoc in self.model.associations:
            if assoc.source in self.known and assoc.target in self.known:
                graph[assoc.source].add(assoc.target)
        return graph

    def _reachable(self, graph: Dict[str, Set[str]]) -> Dict[str, Set[str]]:
        reach: Dict[str, Set[str]] = {}
        for start in sorted(graph):
            seen: Set[str] = set()
            stack = sorted(graph[start])
            while stack:
                node = stack.pop()
                if node not in seen:
                    seen.add(node)
                    stack.extend(graph[node])
            reach[start] = seen
        return reach

    def _cycles(self) -> List[Tuple[str, ...]]:
        graph = self._successor_map()
        reach = self._reachable(graph)
        components: Set[FrozenSet[str]] = set()
        for node in graph:
            if node not in reach[node]:
                continue
            components.add(frozenset(other for other in reach[node] if node in reach[other]))
        return sorted(tuple(sorted(c)) for c in components)

    def check_feedback_direction(self) -> List[Violation]:
        """W6: feedback starts at an artifact and points strictly backwards."""
        found: List[Violation] = []
        reach = self._reachable(self._successor_map())
        for note in self.model.feedback:
            if note.source not in self.known or note.target not in self.known:
                continue
            if not self.model.element(note.source).is_artifact:
                found.append(Violation(
                    W6_FEEDBACK_DIRECTION, (note.source, note.target),
                    f"feedback {note.source} -> {note.target} must start at an artifact",
                    self._span(note),
                ))
            backwards = note.source in reach[note.target] and note.target not in reach[note.source]
            if not backwards:
                found.append(Violation(
                    W6_FEEDBACK_DIRECTION, (note.source, note.target),
                    f"feedback {note.source} -> {note.target} does not point to an earlier element",
                    self._span(note),
                ))
        return found

    def check_multiple_producers(self) -> List[Violation]:
        """Warn about artifacts produced by more than one activity (conjunctive)."""
        return [
            Violation(
                WARN_MULTI_PRODUCER, (artifact.id,) + self.model.producers(artifact.id),
                f"artifact '{artifact.id}' has {len(self.model.producers(artifact.id))} producers; "
                f"all of them must have started before it can activate",
                self._span(artifact.id),
            )
            for artifact in self.model.artifacts()
            if len(self.model.producers(artifact.id)) > 1
        ]


def validate(model: ProcessModel) -> WellFormednessReport:
    """
    Check a process model against the well-formedness rules W1-W7.

    Args:
        model: The model to check

    Returns:
        WellFormednessReport listing every violation (empty = well-formed)
    """
    return ModelValidator(model).run()
