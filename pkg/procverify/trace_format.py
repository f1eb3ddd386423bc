"""
Text format for traces.

    trace <model_name>
    t 0
      <element_id> <inactive|active|done>
    t 1
      <element_id> <state>

Blocks after `t 0` list only changed elements; unmentioned elements keep
their previous state and `t 0` starts from all-Inactive. The canonical form
written by `serialize_trace` lists every element at `t 0`, so a trace file
is self-describing. `#` starts a comment.
"""

import logging
import re
from typing import Dict, List, Optional, Tuple

import lark

from .conformance import Trace
from .exceptions import TraceSyntaxError
from .models import ProcessModel, SourceSpan
from .semantics import ElementState, InstanceState

logger = logging.getLogger(__name__)

grammar = r"""
?line: time | pair
time: NAME INT
pair: NAME NAME

NAME: /[A-Za-z_][A-Za-z0-9_]*/
INT: /-?[0-9]+/
COMMENT: /#[^\n]*/
%import common.WS_INLINE
%ignore WS_INLINE
%ignore COMMENT
"""

_BLANK = re.compile(r"^\s*(#.*)?$")
_STATE_WORDS = {state.value: state for state in ElementState}

_parser: Optional[lark.Lark] = None


def _line_parser() -> lark.Lark:
    global _parser
    if _parser is None:
        _parser = lark.Lark(grammar, start="line", parser="lalr", propagate_positions=True)
    return _parser


def _span(line_no: int, token: lark.Token) -> SourceSpan:
    column = token.column or 1
    return SourceSpan(line_no, column, line_no, column + max(len(token.value), 1) - 1)


def _parse_line(text: str, line_no: int) -> lark.Tree:
    try:
        return _line_parser().parse(text)
    except lark.exceptions.UnexpectedInput as exc:
        column = exc.column if isinstance(exc.column, int) and exc.column > 0 else len(text) + 1
        if isinstance(exc, lark.exceptions.UnexpectedToken):
            message = f"unexpected '{exc.token}'"
        elif isinstance(exc, lark.exceptions.UnexpectedCharacters):
            message = f"unexpected character {text[column - 1]!r}" if column <= len(text) else "unexpected input"
        else:
            message = "unexpected end of line"
        raise TraceSyntaxError(message, SourceSpan(line_no, column, line_no, column)) from None


def parse_trace(
    text: str,
    model: Optional[ProcessModel] = None,
    strict: bool = True,
    filename: Optional[str] = None,
) -> Trace:
    """
    Parse trace text.

    Args:
        text: Trace file contents
        model: Optional model; when given, its elements define the state
            universe and unknown ids are rejected
        strict: Reject non-consecutive `t` blocks. With strict=False the
            recorded labels are kept so `check_trace` can report R6_TIME.
        filename: Optional name used in diagnostics

    Returns:
        Trace with total states

    Raises:
        TraceSyntaxError: With the line/column of the offending token
    """
    try:
        return _parse_trace(text, model, strict)
    except TraceSyntaxError as error:
        if filename is None:
            raise
        raise error.with_filename(filename) from None


def _parse_trace(text: str, model: Optional[ProcessModel], strict: bool) -> Trace:
    model_name: Optional[str] = None
    blocks: List[Tuple[int, Dict[str, ElementState]]] = []
    last_header_line = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        if _BLANK.match(raw):
            continue
        tree = _parse_line(raw, line_no)
        keyword, token = tree.children

        # `t` and `trace` are keywords only at the start of a time or header line.
        if tree.data == "time" and keyword != "t":
            raise TraceSyntaxError(f"unexpected '{token}'", _span(line_no, token))
        is_header = model_name is None or str(token) not in _STATE_WORDS
        if keyword == "trace" and tree.data == "pair" and is_header:
            if model_name is not None:
                raise TraceSyntaxError("duplicate 'trace' header", _span(line_no, token))
            model_name = str(token)
            last_header_line = line_no
            continue

        if model_name is None:
            raise TraceSyntaxError("file must start with 'trace <model_name>'", SourceSpan(line_no, 1, line_no, 1))

        if tree.data == "time":
            label = int(token)
            expected = blocks[-1][0] + 1 if blocks else 0
            if label < 0:
                raise TraceSyntaxError(f"negative time index {label}", _span(line_no, token))
            if label != expected:
                if strict:
                    previous = f"after 't {blocks[-1][0]}'" if blocks else "as the first block"
                    raise TraceSyntaxError(
                        f"expected 't {expected}' {previous}, found 't {label}'", _span(line_no, token)
                    )
                logger.warning(f"line {line_no}: time label {label} where {expected} was expected")
            blocks.append((label, {}))
            continue

        element_token, state_token = tree.children
        if not blocks:
            raise TraceSyntaxError("state line before the first 't' block", _span(line_no, element_token))
        element_id, word = str(element_token), str(state_token)
        if word not in _STATE_WORDS:
            raise TraceSyntaxError(
                f"unknown state '{word}' (expected inactive, active or done)", _span(line_no, state_token)
            )
        if model is not None and element_id not in model:
            raise TraceSyntaxError(
                f"unknown element '{element_id}' for process '{model.name}'", _span(line_no, element_token)
            )
        block = blocks[-1][1]
        if element_id in block:
            raise TraceSyntaxError(
                f"element '{element_id}' appears twice in block 't {blocks[-1][0]}'",
                _span(line_no, element_token),
            )
        block[element_id] = _STATE_WORDS[word]

    if model_name is None:
        raise TraceSyntaxError("empty trace file: missing 'trace <model_name>' header")
    if not blocks:
        raise TraceSyntaxError(
            "trace has no 't' blocks", SourceSpan(last_header_line, 1, last_header_line, 1)
        )
    if model is not None and model.name != model_name:
        logger.warning(f"trace names process '{model_name}' but was parsed against '{model.name}'")

    universe = set(model.element_ids) if model is not None else set()
    for _, block in blocks:
        universe.update(block)

    states: List[InstanceState] = []
    current = InstanceState.uniform(universe)
    for _, block in blocks:
        current = current.evolve(block)
        states.append(current)

    return Trace(model_name, tuple(states), tuple(label for label, _ in blocks))


def serialize_trace(trace: Trace) -> str:
    """Canonical text: every element at `t 0`, then only changes, ids sorted."""
    lines = [f"trace {trace.model_name}"]
    previous: Optional[InstanceState] = None
    for label, state in zip(trace.times, trace.states):
        lines.append(f"t {label}")
        changed = state.items() if previous is None else state.delta(previous).items()
        for element_id, value in changed:
            lines.append(f"  {element_id} {value.value}")
        previous = state
    return "\n".join(lines) + "\n"
