#!/usr/bin/env python3
"""
Text form of wSTL formulas.

Grammar (precedence ``!`` > temporal > ``&`` > ``|``, parentheses anywhere):

    G[a,b] phi        always within [a,b]
    F[a,b] phi        eventually within [a,b]
    phi & psi         conjunction (chains flatten into one n-ary node)
    phi | psi         disjunction
    !phi              negation
    x >= c, x < c     predicates

Weights are optional ``{w=...}`` annotations: after the interval of a
temporal operator (one weight per window position), or after a
parenthesised group, where they attach to the group's root (a scalar for a
predicate, one weight per child for a conjunction or disjunction).

    F[0,5] G[20,25] (x < 0.1) & G[65,72] (x >= 0.3)
    ((x >= 0.3){w=2} | G[0,2]{w=1,0.5,1} (x < 1)){w=2,3}
"""

import re
from typing import Optional, Sequence

from lark import Lark, Transformer, UnexpectedEOF, UnexpectedInput
from lark.exceptions import VisitError

from ..common.errors import FormulaError, FormulaSyntaxError, FormulaWeightError
from .formula import Always, And, Comparison, Eventually, Formula, Not, Or, Predicate

WSTL_GRAMMAR = r"""
    ?start: disjunction

    ?disjunction: conjunction ("|" conjunction)*
    ?conjunction: unary ("&" unary)*

    ?unary: "!" unary                           -> negation
          | "G" interval [weights] unary        -> always
          | "F" interval [weights] unary        -> eventually
          | atom

    ?atom: predicate
         | "(" disjunction ")" [weights]        -> group

    predicate: NAME COMPARATOR SIGNED_NUMBER
    interval: "[" INT "," INT "]"
    weights: "{" "w" "=" SIGNED_NUMBER ("," SIGNED_NUMBER)* "}"

    COMPARATOR: ">=" | "<"
    NAME: /[a-z][a-z0-9_]*/

    %import common.INT
    %import common.SIGNED_NUMBER
    %import common.WS
    %ignore WS
"""


class _FormulaBuilder(Transformer):
    """Builds AST nodes from the lark parse tree"""

    def disjunction(self, items):
        return Or(tuple(items))

    def conjunction(self, items):
        return And(tuple(items))

    def negation(self, items):
        return Not(items[0])

    def always(self, items):
        (start, end), weights, child = items
        return Always(child, start, end, weights)

    def eventually(self, items):
        (start, end), weights, child = items
        return Eventually(child, start, end, weights)

    def group(self, items):
        node, weights = items
        if weights is None:
            return node
        if isinstance(node, Predicate):
            if len(weights) != 1:
                raise FormulaWeightError(f"predicate takes one weight, got {len(weights)}")
            return Predicate(node.comparison, node.threshold, weights[0], node.variable)
        if isinstance(node, (And, Or)):
            return type(node)(node.children, weights)
        raise FormulaWeightError(
            "weights after a group attach to a predicate, conjunction or disjunction; "
            "temporal weights follow the interval"
        )

    def predicate(self, items):
        name, comparator, number = items
        return Predicate(Comparison(str(comparator)), float(number), 1.0, str(name))

    def interval(self, items):
        return int(items[0]), int(items[1])

    def weights(self, items):
        return tuple(float(item) for item in items)


_PARSER = Lark(WSTL_GRAMMAR, parser="lalr", maybe_placeholders=True)
_BUILDER = _FormulaBuilder()


def _end_position(text: str):
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1


def parse_formula(text: str) -> Formula:
    """Parse formula text into an AST

    Raises:
        FormulaSyntaxError: text does not follow the grammar (with line/column)
        FormulaIntervalError: interval start exceeds its end
        FormulaWeightError: negative weight or weight count mismatch
    """
    try:
        tree = _PARSER.parse(text)
    except UnexpectedEOF:
        line, column = _end_position(text)
        raise FormulaSyntaxError("Unexpected end of formula", line, column) from None
    except UnexpectedInput as e:
        line, column = e.line, e.column
        if line is None or line < 1:
            line, column = _end_position(text)
        raise FormulaSyntaxError(f"Unexpected input {_context(e, text)!r}", line, column) from None
    try:
        return _BUILDER.transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, FormulaError):
            raise e.orig_exc from None
        raise


def _context(error: UnexpectedInput, text: str) -> str:
    try:
        return error.get_context(text, span=10).splitlines()[0].strip()
    except Exception:
        return text


def _number(value: float) -> str:
    """Shortest text that parses back to exactly the same float"""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def _annotation(weights: Sequence[float]) -> str:
    if all(w == 1.0 for w in weights):
        return ""
    return "{w=" + ",".join(_number(w) for w in weights) + "}"


def format_formula(f: Formula, hide_below: Optional[float] = None) -> str:
    """Canonical text of a formula; weights printed only when != 1

    With ``hide_below`` set, conjunction/disjunction children whose weight is
    below the threshold are left out of the text (display form only).
    """
    return _format(f, hide_below)


def _format(f: Formula, hide_below: Optional[float]) -> str:
    if isinstance(f, Predicate):
        return f"({f.variable} {f.comparison.value} {_number(f.threshold)})" + _annotation((f.weight,))
    if isinstance(f, Not):
        return "!" + _operand(f.child, None, hide_below)
    if isinstance(f, (Always, Eventually)):
        op = "G" if isinstance(f, Always) else "F"
        head = f"{op}[{f.start},{f.end}]" + _annotation(f.weights)
        return f"{head} {_operand(f.child, None, hide_below)}"

    pairs = list(zip(f.children, f.weights))
    if hide_below is not None:
        kept = [(c, w) for c, w in pairs if w >= hide_below]
        pairs = kept or pairs[:1]
        if len(pairs) == 1:
            return _format(pairs[0][0], hide_below)
    symbol = " & " if isinstance(f, And) else " | "
    text = symbol.join(_operand(c, type(f), hide_below) for c, _ in pairs)
    annotation = _annotation([w for _, w in pairs])
    return f"({text}){annotation}" if annotation else text


def _operand(child: Formula, parent, hide_below: Optional[float]) -> str:
    text = _format(child, hide_below)
    if not isinstance(child, (And, Or)) or text.startswith("(") and _balanced_group(text):
        return text
    # & binds tighter than |, so an unweighted conjunction inside a disjunction needs no parentheses
    if parent is Or and isinstance(child, And):
        return text
    return f"({text})"


def _balanced_group(text: str) -> bool:
    """True when text is one parenthesised group, optionally followed by {w=...}"""
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                rest = text[i + 1:]
                return rest == "" or re.fullmatch(r"\{w=[^{}()]*\}", rest) is not None
    return False
