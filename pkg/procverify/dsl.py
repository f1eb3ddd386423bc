"""
Text format for process models.

One statement per line, `#` starts a comment:

    process <name>
    activity <id> phase=<phase> kind=<human|automated> [lane="..."] [name="..."]
    artifact <id> phase=<phase> kind=<data|logical|functional> [external] [lane="..."] [name="..."]
    produce <activity_id> -> <artifact_id>
    require <artifact_id> -> <activity_id>
    feedback <artifact_id> -> <element_id> [label="..."]

Parsing does not validate: references to undeclared elements, wrong
endpoint kinds and cycles are left to `validate`. Duplicate declarations,
unknown keywords and malformed attributes are syntax errors.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

import lark

from .exceptions import ModelSyntaxError
from .models import (
    Association,
    AssociationKind,
    Element,
    ElementKind,
    FeedbackAnnotation,
    Phase,
    ProcessModel,
    SourceSpan,
)

logger = logging.getLogger(__name__)

grammar = r"""
?statement: process | activity | artifact | produce | require | feedback

process: "process" NAME
activity: "activity" NAME attribute*
artifact: "artifact" NAME attribute*
produce: "produce" NAME "->" NAME
require: "require" NAME "->" NAME
feedback: "feedback" NAME "->" NAME attribute*

attribute: NAME "=" (NAME | ESCAPED_STRING)  -> pair
         | "external"                        -> flag

NAME: /[A-Za-z_][A-Za-z0-9_]*/
COMMENT: /#[^\n]*/
%import common.ESCAPED_STRING
%import common.WS_INLINE
%ignore WS_INLINE
%ignore COMMENT
"""

KEYWORDS = ("process", "activity", "artifact", "produce", "require", "feedback")

_BLANK = re.compile(r"^\s*(#.*)?$")
_FIRST_WORD = re.compile(r"^(\s*)([^\s#]+)")
_ESCAPE = re.compile(r"\\(u[0-9a-fA-F]{4}|U[0-9a-fA-F]{8}|.)")
_ENCODED = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_DECODED = {"n": "\n", "r": "\r", "t": "\t"}
_PHASES = {phase.value: phase for phase in Phase}
_ACTIVITY_KINDS = {kind.value: kind for kind in ElementKind.activity_kinds()}
_ARTIFACT_KINDS = {kind.value: kind for kind in ElementKind.artifact_kinds()}

_parser: Optional[lark.Lark] = None


def _statement_parser() -> lark.Lark:
    global _parser
    if _parser is None:
        _parser = lark.Lark(grammar, start="statement", parser="lalr", propagate_positions=True)
    return _parser


def _token_span(line_no: int, token: lark.Token) -> SourceSpan:
    column = token.column or 1
    end = (token.end_column or column + 1) - 1
    return SourceSpan(line_no, column, line_no, max(end, column))


def _meta_span(line_no: int, meta) -> SourceSpan:
    column = getattr(meta, "column", 1)
    end = getattr(meta, "end_column", column + 1) - 1
    return SourceSpan(line_no, column, line_no, max(end, column))


def _decode_escape(match: re.Match) -> str:
    code = match.group(1)
    if len(code) > 1:
        return chr(int(code[1:], 16))
    return _DECODED.get(code, code)


def _unquote(token: lark.Token) -> str:
    if token.type == "ESCAPED_STRING":
        return _ESCAPE.sub(_decode_escape, token.value[1:-1])
    return token.value


def _encode_char(char: str) -> str:
    if char in _ENCODED:
        return _ENCODED[char]
    if char.isprintable():
        return char
    # Anything splitlines() treats as a line break must stay off the line.
    code = ord(char)
    return f"\\u{code:04x}" if code <= 0xFFFF else f"\\U{code:08x}"


def _quote(text: str) -> str:
    escaped = "".join(_encode_char(c) for c in text)
    return f'"{escaped}"'


@dataclass
class _Attributes:
    """Attribute values of one declaration, with the token each came from."""
    values: Dict[str, str] = field(default_factory=dict)
    tokens: Dict[str, lark.Token] = field(default_factory=dict)
    external: bool = False


class _ModelBuilder:
    """Accumulates statements line by line into a ProcessModel."""

    def __init__(self, filename: Optional[str] = None):
        self.filename = filename
        self.name: Optional[str] = None
        self.elements: Dict[str, Element] = {}
        self.associations: Dict[Association, int] = {}
        self.feedback: Dict[Tuple[str, str], FeedbackAnnotation] = {}
        self.source_map: Dict[object, SourceSpan] = {}
        self.first_line: Dict[object, int] = {}

    def error(self, message: str, span: Optional[SourceSpan]) -> ModelSyntaxError:
        return ModelSyntaxError(message, span, self.filename)

    def add_line(self, text: str, line_no: int) -> None:
        word = _FIRST_WORD.match(text)
        if word and word.group(2) not in KEYWORDS and re.match(r"^[A-Za-z_]\w*$", word.group(2)):
            column = len(word.group(1)) + 1
            raise self.error(
                f"unknown keyword '{word.group(2)}' (expected one of {', '.join(KEYWORDS)})",
                SourceSpan(line_no, column, line_no, column + len(word.group(2)) - 1),
            )

        tree = self._parse(text, line_no)
        span = _meta_span(line_no, tree.meta)
        handler = getattr(self, f"_on_{tree.data}")
        if tree.data != "process" and self.name is None:
            raise self.error("expected 'process <name>' before any declaration", span)
        handler(tree, line_no, span)

    def _parse(self, text: str, line_no: int) -> lark.Tree:
        try:
            return _statement_parser().parse(text)
        except lark.exceptions.UnexpectedCharacters as exc:
            raise self.error(
                f"unexpected character {text[exc.pos_in_stream]!r}",
                SourceSpan(line_no, exc.column, line_no, exc.column),
            ) from None
        except lark.exceptions.UnexpectedToken as exc:
            if exc.token.type == "$END":
                column = len(text.rstrip()) + 1
                raise self.error("unexpected end of line", SourceSpan(line_no, column, line_no, column)) from None
            raise self.error(f"unexpected '{exc.token}'", _token_span(line_no, exc.token)) from None

    # --- statements ---

    def _on_process(self, tree: lark.Tree, line_no: int, span: SourceSpan) -> None:
        if self.name is not None:
            raise self.error("duplicate 'process' declaration", span)
        self.name = str(tree.children[0])

    def _on_activity(self, tree: lark.Tree, line_no: int, span: SourceSpan) -> None:
        self._declare(tree, line_no, span, _ACTIVITY_KINDS, allow_external=False)

    def _on_artifact(self, tree: lark.Tree, line_no: int, span: SourceSpan) -> None:
        self._declare(tree, line_no, span, _ARTIFACT_KINDS, allow_external=True)

    def _on_produce(self, tree: lark.Tree, line_no: int, span: SourceSpan) -> None:
        self._associate(AssociationKind.PRODUCE, tree, line_no, span)

    def _on_require(self, tree: lark.Tree, line_no: int, span: SourceSpan) -> None:
        self._associate(AssociationKind.REQUIRE, tree, line_no, span)

    def _on_feedback(self, tree: lark.Tree, line_no: int, span: SourceSpan) -> None:
        source, target, *attribute_trees = tree.children
        attributes = self._attributes(attribute_trees, line_no, allowed={"label"}, allow_external=False)
        key = (str(source), str(target))
        if key in self.feedback:
            first = self.first_line[("feedback",) + key]
            raise self.error(f"duplicate feedback {key[0]} -> {key[1]} (first declared at line {first})", span)
        annotation = FeedbackAnnotation(key[0], key[1], attributes.values.get("label", ""))
        self.feedback[key] = annotation
        self.first_line[("feedback",) + key] = line_no
        self.source_map[annotation] = span

    # --- helpers ---

    def _declare(self, tree, line_no, span, kinds: Dict[str, ElementKind], allow_external: bool) -> None:
        id_token, *attribute_trees = tree.children
        element_id = str(id_token)
        if element_id in self.elements:
            raise self.error(
                f"duplicate declaration of '{element_id}' (first declared at line {self.first_line[element_id]})",
                _token_span(line_no, id_token),
            )
        attributes = self._attributes(
            attribute_trees, line_no, allowed={"phase", "kind", "lane", "name"}, allow_external=allow_external
        )
        for required in ("phase", "kind"):
            if required not in attributes.values:
                raise self.error(f"'{element_id}' is missing the '{required}=' attribute", span)

        phase_word = attributes.values["phase"]
        if phase_word not in _PHASES:
            raise self.error(
                f"unknown phase '{phase_word}' (expected {', '.join(_PHASES)})",
                _token_span(line_no, attributes.tokens["phase"]),
            )
        kind_word = attributes.values["kind"]
        if kind_word not in kinds:
            raise self.error(
                f"unknown {tree.data} kind '{kind_word}' (expected {', '.join(kinds)})",
                _token_span(line_no, attributes.tokens["kind"]),
            )

        self.elements[element_id] = Element(
            id=element_id,
            kind=kinds[kind_word],
            phase=_PHASES[phase_word],
            lane=attributes.values.get("lane", ""),
            external=attributes.external,
            display_name=attributes.values.get("name", ""),
        )
        self.first_line[element_id] = line_no
        self.source_map[element_id] = span

    def _associate(self, kind: AssociationKind, tree, line_no: int, span: SourceSpan) -> None:
        source, target = (str(child) for child in tree.children)
        association = Association(kind, source, target)
        if association in self.associations:
            raise self.error(
                f"duplicate {kind.value} {source} -> {target} "
                f"(first declared at line {self.associations[association]})",
                span,
            )
        self.associations[association] = line_no
        self.source_map[association] = span

    def _attributes(self, trees, line_no: int, allowed: Set[str], allow_external: bool) -> _Attributes:
        attributes = _Attributes()
        for item in trees:
            if item.data == "flag":
                if not allow_external:
                    raise self.error("'external' is only allowed on artifacts", _meta_span(line_no, item.meta))
                attributes.external = True
                continue
            key_token, value_token = item.children
            key = str(key_token)
            if key not in allowed:
                raise self.error(
                    f"unknown attribute '{key}' (expected {', '.join(sorted(allowed))})",
                    _token_span(line_no, key_token),
                )
            if key in attributes.values:
                raise self.error(f"attribute '{key}' given twice", _token_span(line_no, key_token))
            attributes.values[key] = _unquote(value_token)
            attributes.tokens[key] = value_token
        return attributes

    def build(self) -> ProcessModel:
        if self.name is None:
            raise self.error("empty model: missing 'process <name>' declaration", None)
        return ProcessModel(
            name=self.name,
            elements=frozenset(self.elements.values()),
            associations=frozenset(self.associations),
            feedback=frozenset(self.feedback.values()),
            source_map=dict(self.source_map),
        )


def parse_model(text: str, filename: Optional[str] = None) -> ProcessModel:
    """
    Parse process model text.

    Args:
        text: Model file contents
        filename: Optional name used in diagnostics

    Returns:
        The (unvalidated) ProcessModel with a source map for diagnostics

    Raises:
        ModelSyntaxError: With the line/column of the offending token
    """
    builder = _ModelBuilder(filename)
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if _BLANK.match(raw):
            continue
        builder.add_line(raw, line_no)
    model = builder.build()
    logger.info(
        f"Parsed process '{model.name}' with {len(model.elements)} elements "
        f"and {len(model.associations)} associations"
    )
    return model


def _element_line(element: Element) -> str:
    keyword = "activity" if element.is_activity else "artifact"
    parts = [keyword, element.id, f"phase={element.phase.value}", f"kind={element.kind.value}"]
    if element.external:
        parts.append("external")
    if element.lane:
        parts.append(f"lane={_quote(element.lane)}")
    if element.display_name:
        parts.append(f"name={_quote(element.display_name)}")
    return " ".join(parts)


def print_model(model: ProcessModel) -> str:
    """
    Canonical text for a model.

    Activities, then artifacts, each sorted by id; then produce, require and
    feedback edges, each sorted. Sections are separated by one blank line.
    """
    elements = sorted(model.elements, key=lambda e: e.id)
    produces = sorted((a for a in model.associations if a.kind is AssociationKind.PRODUCE), key=Association.sort_key)
    requires = sorted((a for a in model.associations if a.kind is AssociationKind.REQUIRE), key=Association.sort_key)
    sections: List[List[str]] = [
        [f"process {model.name}"],
        [_element_line(e) for e in elements if e.is_activity],
        [_element_line(e) for e in elements if e.is_artifact],
        [f"produce {a.source} -> {a.target}" for a in produces],
        [f"require {a.source} -> {a.target}" for a in requires],
        [
            f"feedback {f.source} -> {f.target}" + (f" label={_quote(f.label)}" if f.label else "")
            for f in sorted(model.feedback, key=FeedbackAnnotation.sort_key)
        ],
    ]
    return "\n\n".join("\n".join(lines) for lines in sections if lines) + "\n"
