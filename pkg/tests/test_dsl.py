"""Tests for the process model text format."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from procverify.catalog import fixture_path
from procverify.constants import W3_NO_PRODUCT
from procverify.dsl import KEYWORDS, parse_model, print_model
from procverify.exceptions import ModelSyntaxError
from procverify.models import (
    AssociationKind,
    Element,
    ElementKind,
    FeedbackAnnotation,
    Phase,
    ProcessModel,
    produce,
    require,
)
from procverify.validation import validate

HEADER = "process p\n"


def syntax_error(text, filename=None):
    with pytest.raises(ModelSyntaxError) as info:
        parse_model(text, filename=filename)
    return info.value


@pytest.fixture(scope="module")
def ml_dev_text():
    return fixture_path("ml_dev.proc").read_text(encoding="utf-8")


class TestParseModel:
    """Test parsing well-formed model text."""

    def test_ml_dev_file(self, ml_dev_text, ml_dev):
        """The shipped file has 13 activities and 19 artifacts and equals the catalog."""
        model = parse_model(ml_dev_text)
        assert len(model.activities()) == 13
        assert len(model.artifacts()) == 19
        assert model == ml_dev

    def test_marl_file(self, marl):
        """The MARL file parses to the MARL catalog."""
        assert parse_model(fixture_path("marl.proc").read_text(encoding="utf-8")) == marl

    def test_declaration_fields(self):
        """Attributes map onto element fields."""
        model = parse_model(
            HEADER
            + 'artifact sla phase=operations kind=logical external lane="customer" name="Service Level Agreement"\n'
        )
        element = model.element("sla")
        assert element == Element(
            "sla", ElementKind.LOGICAL_STATEMENT, Phase.OPERATIONS,
            lane="customer", external=True, display_name="Service Level Agreement",
        )

    def test_associations_and_feedback(self):
        """produce, require and feedback statements build the edges."""
        model = parse_model(
            HEADER
            + "activity a phase=development kind=automated\n"
            + "artifact x phase=development kind=data\n"
            + "produce a -> x\n"
            + "require x -> a\n"
            + 'feedback x -> a label="again"\n'
        )
        assert {a.kind for a in model.associations} == {AssociationKind.PRODUCE, AssociationKind.REQUIRE}
        assert model.feedback == frozenset({FeedbackAnnotation("x", "a", "again")})

    def test_comments_and_blank_lines(self):
        """Comments and blank lines are ignored."""
        model = parse_model("# header comment\n\nprocess p  # trailing\n\n   # indented\n")
        assert model.name == "p"
        assert model.elements == frozenset()

    def test_escaped_strings(self):
        """Quoted values may contain escaped quotes and backslashes."""
        model = parse_model(HEADER + r'activity a phase=planning kind=human name="Say \"hi\" \\ now"' + "\n")
        assert model.element("a").display_name == 'Say "hi" \\ now'

    def test_escaped_line_breaks(self):
        """\\n, \\r, \\t and \\u escapes decode to the characters they name."""
        model = parse_model(HEADER + r'activity a phase=planning kind=human lane="ops\nteam\r\tx\u2028y"' + "\n")
        assert model.element("a").lane == "ops\nteam\r\tx\u2028y"

    def test_parse_does_not_validate(self):
        """An activity without products parses and only fails validation."""
        model = parse_model("process p\nactivity a phase=planning kind=human\n")
        assert validate(model).codes() == [W3_NO_PRODUCT]

    def test_unknown_references_parse(self):
        """Undeclared endpoints are left to validation."""
        model = parse_model(HEADER + "produce a -> x\n")
        assert model.associations == frozenset({produce("a", "x")})

    def test_source_map(self):
        """Declarations are mapped to their source lines."""
        model = parse_model(HEADER + "\nactivity a phase=planning kind=human\nrequire x -> a\n")
        assert model.span_of("a").line == 3
        assert model.span_of(require("x", "a")).line == 4


class TestParseErrors:
    """Test model diagnostics."""

    def test_misspelled_keyword(self):
        """'artefact' is an unknown keyword reported at its line and column."""
        error = syntax_error(HEADER + "artefact x phase=planning kind=data\n")
        assert (error.span.line, error.span.column) == (2, 1)
        assert "unknown keyword 'artefact'" in error.message
        for keyword in KEYWORDS:
            assert keyword in error.message

    def test_filename_prefix(self):
        """Diagnostics read file:line:col: message."""
        error = syntax_error(HEADER + "artefact x phase=planning kind=data\n", filename="model.proc")
        assert str(error).startswith("model.proc:2:1: unknown keyword")

    def test_duplicate_declaration(self):
        """A second declaration names the first line."""
        text = HEADER + "activity a phase=planning kind=human\n\nactivity a phase=planning kind=human\n"
        error = syntax_error(text)
        assert "first declared at line 2" in error.message
        assert (error.span.line, error.span.column) == (4, 10)

    def test_duplicate_association(self):
        """Repeated edges are rejected."""
        error = syntax_error(HEADER + "produce a -> x\nproduce a -> x\n")
        assert "duplicate produce a -> x" in error.message
        assert error.span.line == 3

    def test_duplicate_feedback(self):
        """Repeated feedback annotations are rejected."""
        error = syntax_error(HEADER + "feedback x -> a\nfeedback x -> a label=\"again\"\n")
        assert "duplicate feedback" in error.message

    def test_missing_attribute(self):
        """phase and kind are required."""
        assert "missing the 'kind=' attribute" in syntax_error(HEADER + "activity a phase=planning\n").message

    def test_unknown_phase(self):
        """Phases are planning, development, deployment or operations."""
        error = syntax_error(HEADER + "activity a phase=testing kind=human\n")
        assert "unknown phase 'testing'" in error.message
        assert error.span.column == 18

    def test_wrong_kind_for_category(self):
        """Artifact kinds are not activity kinds."""
        assert "unknown activity kind 'data'" in syntax_error(HEADER + "activity a phase=planning kind=data\n").message

    def test_external_activity(self):
        """Only artifacts may be external."""
        error = syntax_error(HEADER + "activity a phase=planning kind=human external\n")
        assert "only allowed on artifacts" in error.message

    @pytest.mark.parametrize("line, fragment", [
        ("activity a phase=planning kind=human owner=me\n", "unknown attribute 'owner'"),
        ("activity a phase=planning phase=planning kind=human\n", "given twice"),
        ("produce a ->\n", "unexpected end of line"),
        ("produce a x\n", "unexpected 'x'"),
        ("activity a phase=planning kind=human $\n", "unexpected character '$'"),
    ])
    def test_malformed_lines(self, line, fragment):
        """Malformed statements are syntax errors on their line."""
        error = syntax_error(HEADER + line)
        assert fragment in error.message
        assert error.span.line == 2

    def test_declaration_before_process(self):
        """The process line comes first."""
        assert "before any declaration" in syntax_error("activity a phase=planning kind=human\n").message

    def test_duplicate_process(self):
        """Only one process line is allowed."""
        assert "duplicate 'process'" in syntax_error("process p\nprocess q\n").message

    def test_empty_text(self):
        """Empty text has no process line."""
        error = syntax_error("# nothing here\n")
        assert "empty model" in error.message
        assert error.span is None


class TestPrintModel:
    """Test the canonical printer."""

    def test_fixpoint(self, ml_dev_text):
        """print(parse(text)) reproduces the canonical shipped file."""
        printed = print_model(parse_model(ml_dev_text))
        assert printed == ml_dev_text
        assert print_model(parse_model(printed)) == printed

    def test_declaration_order_irrelevant(self, ml_dev_text):
        """Shuffled declarations print identically."""
        header, *body = [line for line in ml_dev_text.splitlines() if line]
        random.Random(42).shuffle(body)
        shuffled = "\n".join([header] + body) + "\n"
        assert print_model(parse_model(shuffled)) == ml_dev_text

    def test_empty_model(self):
        """An empty model prints as its process line."""
        assert print_model(ProcessModel(name="empty")) == "process empty\n"

    def test_sections(self, two_element):
        """Sections are separated by blank lines and empty sections are skipped."""
        assert print_model(two_element) == (
            "process pair\n"
            "\n"
            "activity a phase=development kind=human\n"
            "\n"
            "artifact x phase=development kind=data\n"
            "\n"
            "produce a -> x\n"
        )

    def test_multiline_text_stays_on_one_line(self, two_element):
        """Line breaks inside quoted values are escaped and survive a round trip."""
        lane = "ops\nteam"
        element = Element("a", ElementKind.HUMAN_TASK, Phase.DEVELOPMENT, lane=lane, display_name="a\r\nb\x85c")
        model = ProcessModel(
            name="pair",
            elements=frozenset({element, two_element.element("x")}),
            associations=two_element.associations,
            feedback=frozenset({FeedbackAnnotation("x", "a", "retune\tnow")}),
        )
        text = print_model(model)
        assert 'lane="ops\\nteam"' in text
        assert len(text.splitlines()) == len(print_model(two_element).splitlines()) + 2
        assert parse_model(text) == model


IDS = st.sampled_from(["a", "b", "c", "d", "e", "f"])
TEXT = st.text(alphabet='abc XYZ"\\-_\n\r\t\x85\u2028', max_size=12)


@st.composite
def models(draw):
    ids = draw(st.lists(IDS, unique=True, max_size=6))
    elements = []
    for element_id in ids:
        kind = draw(st.sampled_from(list(ElementKind)))
        elements.append(Element(
            element_id,
            kind,
            draw(st.sampled_from(list(Phase))),
            lane=draw(TEXT),
            external=kind.is_artifact and draw(st.booleans()),
            display_name=draw(TEXT),
        ))
    edges = draw(st.lists(st.tuples(IDS, IDS, st.booleans()), max_size=8))
    associations = {produce(s, t) if is_produce else require(s, t) for s, t, is_produce in edges}
    notes = draw(st.lists(st.tuples(IDS, IDS, TEXT), max_size=3, unique_by=lambda n: (n[0], n[1])))
    return ProcessModel(
        name="generated",
        elements=frozenset(elements),
        associations=frozenset(associations),
        feedback=frozenset(FeedbackAnnotation(s, t, label) for s, t, label in notes),
    )


class TestRoundTrip:
    """Generated checks of parse and print."""

    @settings(max_examples=100, deadline=None)
    @given(model=models())
    def test_parse_inverts_print(self, model):
        """parse(print(m)) == m for structurally sound models."""
        assert parse_model(print_model(model)) == model
