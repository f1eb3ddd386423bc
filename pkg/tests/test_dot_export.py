"""Tests for dot export."""

from procverify.dot_export import export_dot
from procverify.models import Element, ElementKind, FeedbackAnnotation, Phase


class TestExportDot:
    """Test the dot rendering of process models."""

    def test_header_and_footer(self, ml_dev):
        """The output is one left-to-right digraph named after the process."""
        dot = export_dot(ml_dev)
        lines = dot.splitlines()
        assert lines[0] == 'digraph "ml_dev" {'
        assert "  rankdir=LR;" in lines
        assert lines[-1] == "}"
        assert dot.endswith("}\n")

    def test_one_cluster_per_phase(self, ml_dev):
        """Four phase clusters in phase order."""
        dot = export_dot(ml_dev)
        clusters = [line.strip() for line in dot.splitlines() if "subgraph cluster_" in line]
        assert clusters == [
            "subgraph cluster_planning {",
            "subgraph cluster_development {",
            "subgraph cluster_deployment {",
            "subgraph cluster_operations {",
        ]
        assert 'label="Planning";' in dot

    def test_nodes(self, ml_dev):
        """Activities are boxes, artifacts ellipses, externals double-bordered."""
        dot = export_dot(ml_dev)
        assert dot.count("shape=box") == 13
        assert dot.count("shape=ellipse") == 19
        assert dot.count("peripheries=2") == 4
        assert '"training" [label="Training", shape=box];' in dot

    def test_edges(self, ml_dev):
        """One solid edge per association and one dashed edge per feedback annotation."""
        dot = export_dot(ml_dev)
        assert dot.count("style=solid") == 42
        assert dot.count('class="produce"') == 15
        assert dot.count("style=dashed") == 3
        assert '"test_verdict" -> "hyperparameter_selection" [style=dashed, constraint=false, label="retune"];' in dot

    def test_deterministic(self, ml_dev):
        """Export is byte-stable."""
        assert export_dot(ml_dev) == export_dot(ml_dev)

    def test_escaping_and_lanes(self, two_element):
        """Quotes in labels are escaped and lanes become tooltips."""
        element = Element("z", ElementKind.DATA, Phase.PLANNING, lane="QA team", display_name='The "Z"')
        dot = export_dot(two_element.with_changes(elements=two_element.elements | {element}))
        assert '"z" [label="The \\"Z\\"", shape=ellipse, tooltip="lane: QA team"];' in dot

    def test_unlabelled_feedback(self, chain):
        """Feedback without a label is labelled 'feedback'."""
        dot = export_dot(chain.with_changes(feedback=frozenset({FeedbackAnnotation("y", "a")})))
        assert 'label="feedback"' in dot

    def test_empty_phases_still_clustered(self, two_element):
        """Empty phases produce empty clusters."""
        assert export_dot(two_element).count("subgraph cluster_") == 4
