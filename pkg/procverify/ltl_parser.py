"""
Concrete syntax for temporal formulas.

    phi := true | false | pred(id) | !phi | (phi)
         | X phi | F phi | G phi | F[<=k] phi | G[<=k] phi
         | phi U phi | phi && phi | phi || phi | phi -> phi

Binding from tightest: unary operators, `U` (right-assoc), `&&`, `||`,
`->` (right-assoc).
"""

import logging
from typing import Optional

import lark

from .exceptions import FormulaSyntaxError
from .ltl import (
    FALSE,
    TRUE,
    Always,
    And,
    Atom,
    BoundedAlways,
    BoundedEventually,
    Eventually,
    FalseFormula,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    Predicate,
    TrueFormula,
    Until,
)

logger = logging.getLogger(__name__)

grammar = r"""
?start: implies

?implies: or_ ("->" implies)?
?or_: and_ ("||" and_)*
?and_: until ("&&" until)*
?until: unary ("U" until)?

?unary: "!" unary                      -> not_
      | "X" unary                      -> next_
      | "F" unary                      -> eventually
      | "G" unary                      -> always
      | "F" "[" "<=" INT "]" unary     -> bounded_eventually
      | "G" "[" "<=" INT "]" unary     -> bounded_always
      | primary

?primary: TRUE                         -> true
        | FALSE                        -> false
        | NAME "(" (NAME | TRUE | FALSE) ")" -> atom
        | "(" implies ")"

TRUE: "true"
FALSE: "false"

NAME: /[A-Za-z_][A-Za-z0-9_]*/
INT: /-?[0-9]+/
%import common.WS
%ignore WS
"""

_PREDICATES = {predicate.value: predicate for predicate in Predicate}

_parser: Optional[lark.Lark] = None


def _formula_parser() -> lark.Lark:
    global _parser
    if _parser is None:
        _parser = lark.Lark(grammar, start="start", parser="lalr", propagate_positions=True)
    return _parser


def _bound(token: lark.Token) -> int:
    value = int(token)
    if value < 0:
        raise FormulaSyntaxError(f"bound must be a natural number, got {value}", token.start_pos or 0)
    return value


class _FormulaTransformer(lark.Transformer):
    def implies(self, items):
        left, right = items
        return Implies(left, right)

    def or_(self, items):
        result = items[0]
        for item in items[1:]:
            result = Or(result, item)
        return result

    def and_(self, items):
        result = items[0]
        for item in items[1:]:
            result = And(result, item)
        return result

    def until(self, items):
        left, right = items
        return Until(left, right)

    def not_(self, items):
        return Not(items[0])

    def next_(self, items):
        return Next(items[0])

    def eventually(self, items):
        return Eventually(items[0])

    def always(self, items):
        return Always(items[0])

    def bounded_eventually(self, items):
        bound, operand = items
        return BoundedEventually(_bound(bound), operand)

    def bounded_always(self, items):
        bound, operand = items
        return BoundedAlways(_bound(bound), operand)

    def true(self, items):
        return TRUE

    def false(self, items):
        return FALSE

    def atom(self, items):
        word, element_id = items
        if str(word) not in _PREDICATES:
            raise FormulaSyntaxError(
                f"unknown predicate '{word}' (expected inactive, active, done or started)",
                word.start_pos or 0,
            )
        return Atom(_PREDICATES[str(word)], str(element_id))


def parse_formula(text: str) -> Formula:
    """
    Parse formula text.

    Args:
        text: Formula in the concrete syntax above

    Returns:
        Formula tree

    Raises:
        FormulaSyntaxError: With the 0-based character offset of the problem
    """
    try:
        tree = _formula_parser().parse(text)
    except lark.exceptions.UnexpectedCharacters as exc:
        raise FormulaSyntaxError(f"unexpected character {text[exc.pos_in_stream]!r}", exc.pos_in_stream) from None
    except lark.exceptions.UnexpectedToken as exc:
        if exc.token.type == "$END":
            raise FormulaSyntaxError("unexpected end of formula", len(text)) from None
        position = exc.token.start_pos if exc.token.start_pos is not None else len(text)
        raise FormulaSyntaxError(f"unexpected '{exc.token}'", position) from None
    except lark.exceptions.UnexpectedEOF:
        raise FormulaSyntaxError("unexpected end of formula", len(text)) from None

    try:
        formula = _FormulaTransformer().transform(tree)
    except lark.exceptions.VisitError as exc:
        if isinstance(exc.orig_exc, FormulaSyntaxError):
            raise exc.orig_exc from None
        raise
    logger.debug(f"Parsed formula {text!r}")
    return formula


# Binding strength used by the printer; higher binds tighter.
_LEVEL = {Implies: 1, Or: 2, And: 3, Until: 4}
_UNARY_LEVEL = 5
_PRIMARY_LEVEL = 6


def _level(formula: Formula) -> int:
    if isinstance(formula, (TrueFormula, FalseFormula, Atom)):
        return _PRIMARY_LEVEL
    return _LEVEL.get(type(formula), _UNARY_LEVEL)


def _wrap(formula: Formula, needs_parens: bool) -> str:
    text = format_formula(formula)
    return f"({text})" if needs_parens else text


def format_formula(formula: Formula) -> str:
    """Canonical text with minimal parentheses; parse_formula inverts it."""
    if isinstance(formula, TrueFormula):
        return "true"
    if isinstance(formula, FalseFormula):
        return "false"
    if isinstance(formula, Atom):
        return f"{formula.predicate.value}({formula.element_id})"

    if isinstance(formula, (Not, Next, Eventually, Always, BoundedEventually, BoundedAlways)):
        operand = _wrap(formula.operand, _level(formula.operand) < _UNARY_LEVEL)
        if isinstance(formula, Not):
            return f"!{operand}"
        if isinstance(formula, Next):
            return f"X {operand}"
        if isinstance(formula, Eventually):
            return f"F {operand}"
        if isinstance(formula, Always):
            return f"G {operand}"
        if isinstance(formula, BoundedEventually):
            return f"F[<={formula.bound}] {operand}"
        return f"G[<={formula.bound}] {operand}"

    level = _LEVEL[type(formula)]
    symbol = {Implies: "->", Or: "||", And: "&&", Until: "U"}[type(formula)]
    if isinstance(formula, (Implies, Until)):
        left = _wrap(formula.left, _level(formula.left) <= level)
        right = _wrap(formula.right, _level(formula.right) < level)
    else:
        left = _wrap(formula.left, _level(formula.left) < level)
        right = _wrap(formula.right, _level(formula.right) <= level)
    return f"{left} {symbol} {right}"
