"""Tests for model well-formedness validation."""

import random

import pytest

from procverify.constants import (
    W1_INVALID_ID,
    W2_ENDPOINT_KIND,
    W3_NO_PRODUCT,
    W4_NO_PRODUCER,
    W5_CYCLE,
    W6_FEEDBACK_DIRECTION,
    W7_UNKNOWN_REFERENCE,
    WARN_MULTI_PRODUCER,
)
from procverify.dsl import parse_model
from procverify.models import (
    Element,
    ElementKind,
    FeedbackAnnotation,
    Phase,
    ProcessModel,
    produce,
    require,
)
from procverify.validation import ModelValidator, validate
from tests.conftest import activity, artifact


def model(elements, associations=(), feedback=(), name="sample"):
    return ProcessModel(
        name=name,
        elements=frozenset(elements),
        associations=frozenset(associations),
        feedback=frozenset(feedback),
    )


class TestCatalogModels:
    """The shipped catalogs are well-formed."""

    def test_ml_dev_is_well_formed(self, ml_dev):
        """The ML development process has no violations and no warnings."""
        report = validate(ml_dev)
        assert report.is_well_formed
        assert report.violations == ()
        assert report.warnings == ()

    def test_marl_is_well_formed(self, marl):
        """The multi-agent RL process has no violations."""
        assert validate(marl).is_well_formed

    def test_small_fixtures_are_well_formed(self, two_element, chain):
        """The hand-built test models pass every rule."""
        assert validate(two_element).is_well_formed
        assert validate(chain).is_well_formed


class TestIdentifierRule:
    """W1: invalid and duplicate identifiers."""

    def test_invalid_element_id(self):
        """An id with capitals is reported with the offending id."""
        report = validate(model(
            [activity("Train"), artifact("x")], [produce("Train", "x")]
        ))
        assert report.codes() == [W1_INVALID_ID]
        assert report.violations[0].elements == ("Train",)

    def test_invalid_model_name(self, two_element):
        """The process name follows the same syntax as element ids."""
        report = validate(two_element.with_changes(name="My Process"))
        assert report.codes() == [W1_INVALID_ID]
        assert report.violations[0].elements == ()

    def test_duplicate_id(self):
        """Two elements sharing an id (different kinds) are reported once."""
        report = validate(model(
            [activity("a"), artifact("x"), Element("x", ElementKind.LOGICAL_STATEMENT, Phase.PLANNING)],
            [produce("a", "x")],
        ))
        assert report.codes() == [W1_INVALID_ID]
        assert "declared 2 times" in report.violations[0].message


class TestEndpointKindRule:
    """W2: associations connect the right kinds."""

    def test_produce_from_artifact(self):
        """produce must start at an activity."""
        report = validate(model(
            [activity("a"), artifact("x"), artifact("y")],
            [produce("a", "x"), produce("x", "y")],
        ))
        assert W2_ENDPOINT_KIND in report.codes()
        w2 = [v for v in report.violations if v.code == W2_ENDPOINT_KIND]
        assert w2[0].elements == ("x", "y")

    def test_require_between_activities(self):
        """require must start at an artifact and end at an activity."""
        report = validate(model(
            [activity("a"), activity("b"), artifact("x"), artifact("y")],
            [produce("a", "x"), produce("b", "y"), require("a", "b")],
        ))
        assert report.codes() == [W2_ENDPOINT_KIND]
        assert report.violations[0].elements == ("a", "b")


class TestProductRule:
    """W3: activities produce something."""

    def test_activity_without_product(self):
        """A lone activity yields exactly one W3 violation."""
        report = validate(model([activity("a")]))
        assert report.codes() == [W3_NO_PRODUCT]
        assert report.violations[0].elements == ("a",)


class TestProducerRule:
    """W4: non-external artifacts have a producer."""

    def test_orphan_artifact(self):
        """An artifact nobody produces is reported."""
        report = validate(model(
            [activity("a"), artifact("x"), artifact("orphan")],
            [produce("a", "x"), require("orphan", "a")],
        ))
        assert report.codes() == [W4_NO_PRODUCER]
        assert report.violations[0].elements == ("orphan",)

    def test_external_artifact_exempt(self):
        """External artifacts need no producer."""
        report = validate(model(
            [activity("a"), artifact("x"), artifact("customer_data", external=True)],
            [produce("a", "x"), require("customer_data", "a")],
        ))
        assert report.is_well_formed


class TestCycleRule:
    """W5: the association graph is acyclic."""

    def test_two_cycle(self):
        """Activity b produces a and requires a: one W5 for the component."""
        report = validate(model(
            [activity("b"), artifact("a")],
            [produce("b", "a"), require("a", "b")],
        ))
        assert report.codes() == [W5_CYCLE]
        assert report.violations[0].elements == ("a", "b")

    def test_one_violation_per_component(self):
        """Two disjoint cycles give two violations."""
        report = validate(model(
            [activity("b"), artifact("a"), activity("d"), artifact("c")],
            [produce("b", "a"), require("a", "b"), produce("d", "c"), require("c", "d")],
        ))
        assert report.codes() == [W5_CYCLE, W5_CYCLE]
        assert [v.elements for v in report.violations] == [("a", "b"), ("c", "d")]


class TestFeedbackRule:
    """W6: feedback starts at an artifact and points backwards."""

    def test_backward_feedback_accepted(self, chain):
        """y -> a points to an upstream element."""
        report = validate(chain.with_changes(feedback=frozenset({FeedbackAnnotation("y", "a", "redo")})))
        assert report.is_well_formed

    def test_forward_feedback_rejected(self, chain):
        """x -> b points downstream."""
        report = validate(chain.with_changes(feedback=frozenset({FeedbackAnnotation("x", "b")})))
        assert report.codes() == [W6_FEEDBACK_DIRECTION]
        assert report.violations[0].elements == ("x", "b")

    def test_unrelated_feedback_rejected(self):
        """Feedback between unconnected elements is not strictly backwards."""
        report = validate(model(
            [activity("a"), artifact("x"), activity("b"), artifact("y")],
            [produce("a", "x"), produce("b", "y")],
            [FeedbackAnnotation("y", "a")],
        ))
        assert report.codes() == [W6_FEEDBACK_DIRECTION]

    def test_feedback_from_activity_rejected(self, chain):
        """Feedback sources must be artifacts."""
        report = validate(chain.with_changes(feedback=frozenset({FeedbackAnnotation("b", "a")})))
        assert report.codes() == [W6_FEEDBACK_DIRECTION]
        assert "must start at an artifact" in report.violations[0].message


class TestReferenceRule:
    """W7: references name known elements."""

    def test_unknown_association_endpoint(self, two_element):
        """A require from an undeclared artifact is W7, not W2."""
        report = validate(two_element.with_changes(
            associations=two_element.associations | {require("ghost", "a")}
        ))
        assert report.codes() == [W7_UNKNOWN_REFERENCE]
        assert report.violations[0].elements == ("ghost",)

    def test_unknown_feedback_target(self, two_element):
        """Feedback naming an undeclared element is W7."""
        report = validate(two_element.with_changes(
            feedback=frozenset({FeedbackAnnotation("x", "nowhere")})
        ))
        assert report.codes() == [W7_UNKNOWN_REFERENCE]


class TestWarnings:
    """Warnings do not affect well-formedness."""

    def test_multiple_producers_warned(self):
        """An artifact with two producers is allowed but warned about."""
        report = validate(model(
            [activity("a"), activity("b"), artifact("x")],
            [produce("a", "x"), produce("b", "x")],
        ))
        assert report.is_well_formed
        assert [w.code for w in report.warnings] == [WARN_MULTI_PRODUCER]
        assert report.warnings[0].elements == ("x", "a", "b")

    def test_warning_is_logged(self, caplog):
        """Each warning is also emitted on the validation logger."""
        with caplog.at_level("WARNING", logger="procverify.validation"):
            validate(model(
                [activity("a"), activity("b"), artifact("x")],
                [produce("a", "x"), produce("b", "x")],
            ))
        assert "2 producers" in caplog.text


class TestReportProperties:
    """Report ordering and source spans."""

    def test_violations_collected_not_first_only(self):
        """Independent problems are all reported, sorted by code."""
        report = validate(model(
            [activity("a"), activity("lonely"), artifact("x"), artifact("orphan")],
            [produce("a", "x")],
        ))
        assert report.codes() == [W3_NO_PRODUCT, W4_NO_PRODUCER]

    def test_order_independent(self, ml_dev):
        """Rebuilding a broken model from shuffled parts yields the same report."""
        broken = ml_dev.with_changes(
            associations=ml_dev.associations | {produce("testing", "use_case_analysis")}
        )
        elements = list(broken.elements)
        associations = list(broken.associations)
        random.Random(3).shuffle(elements)
        random.Random(5).shuffle(associations)
        shuffled = ProcessModel(broken.name, frozenset(elements), frozenset(associations), broken.feedback)
        assert validate(shuffled) == validate(broken)
        assert not validate(broken).is_well_formed

    def test_spans_from_parsed_text(self):
        """Violations of parsed models point at the declaring line."""
        text = (
            "process sample\n"
            "activity a phase=development kind=human\n"
            "activity lonely phase=development kind=human\n"
            "artifact x phase=development kind=data\n"
            "produce a -> x\n"
        )
        report = validate(parse_model(text))
        assert report.codes() == [W3_NO_PRODUCT]
        assert report.violations[0].span.line == 3
        assert report.violations[0].span.column == 1

    def test_spans_absent_for_built_models(self):
        """Models built in code carry no spans."""
        report = validate(model([activity("a")]))
        assert report.violations[0].span is None

    @pytest.mark.parametrize("check", [
        "check_identifiers",
        "check_references",
        "check_endpoint_kinds",
        "check_activity_products",
        "check_artifact_producers",
        "check_acyclic",
        "check_feedback_direction",
    ])
    def test_each_check_clean_on_catalog(self, ml_dev, check):
        """Every individual check passes on the ML catalog."""
        assert getattr(ModelValidator(ml_dev), check)() == []
