"""Graphviz dot rendering of a process model, clustered by phase."""

import logging
from typing import List

from .models import Association, Element, FeedbackAnnotation, Phase, ProcessModel

logger = logging.getLogger(__name__)

INDENT = "  "


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _node_line(element: Element) -> str:
    label = _escape(element.display_name or element.id)
    attributes = [f'label="{label}"']
    if element.is_activity:
        attributes.append("shape=box")
    else:
        attributes.append("shape=ellipse")
        if element.external:
            attributes.append("peripheries=2")
    if element.lane:
        attributes.append(f'tooltip="lane: {_escape(element.lane)}"')
    return f'{INDENT * 2}"{element.id}" [{", ".join(attributes)}];'


def export_dot(model: ProcessModel) -> str:
    """
    Render the model as a dot digraph.

    Activities are boxes, artifacts ellipses (double-bordered when
    external). Associations are solid edges, one line each; feedback
    annotations are dashed, labelled edges. Elements sit in one cluster per
    phase, Planning to Operations.
    """
    lines: List[str] = [f'digraph "{_escape(model.name)}" {{', f"{INDENT}rankdir=LR;", f"{INDENT}compound=true;"]

    for phase in sorted(Phase):
        members = [model.element(i) for i in model.element_ids if model.phase_of(i) is phase]
        lines.append(f"{INDENT}subgraph cluster_{phase.value} {{")
        lines.append(f'{INDENT * 2}label="{phase.value.capitalize()}";')
        lines.extend(_node_line(element) for element in members)
        lines.append(f"{INDENT}}}")

    for association in sorted(model.associations, key=Association.sort_key):
        lines.append(
            f'{INDENT}"{association.source}" -> "{association.target}" '
            f'[style=solid, class="{association.kind.value}"];'
        )

    for annotation in sorted(model.feedback, key=FeedbackAnnotation.sort_key):
        label = _escape(annotation.label or "feedback")
        lines.append(
            f'{INDENT}"{annotation.source}" -> "{annotation.target}" '
            f'[style=dashed, constraint=false, label="{label}"];'
        )

    lines.append("}")
    logger.debug(f"Exported '{model.name}' as dot ({len(model.elements)} nodes)")
    return "\n".join(lines) + "\n"
