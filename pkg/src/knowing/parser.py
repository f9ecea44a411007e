"""Parse formula text.

The user grammar accepts variables `[a-z][a-z0-9_]*`, the term formers `0`, `S(t)`,
`t + t`, `t * t` and decimal numerals, and the formula formers `t = t`, `~f`,
`f -> f`, `f & f`, `f | f`, `f <-> f`, `forall x f`, `exists x f` and `K(f)`.

The internal grammar, used to read proofs and certificates back, additionally accepts
reserved names starting with `_` and predicate atoms `P<k>(t, ...)`.
"""

from functools import lru_cache

import lark as L

from knowing.exceptions import ParseError, UnknownSymbolError
from knowing.formula import (
    Add,
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Know,
    Mul,
    Not,
    Num,
    Or,
    Pred,
    Term,
    Var,
    succ,
)


#######################################################################################
# GRAMMAR


_GRAMMAR = r"""
?formula: implication
        | implication "<->" implication -> iff

?implication: disjunction
            | disjunction "->" implication -> implies

?disjunction: conjunction
            | disjunction "|" conjunction -> disj

?conjunction: unary
            | conjunction "&" unary -> conj

?unary: "~" unary -> neg
      | "forall" name unary -> forall
      | "exists" name unary -> exists
      | "K" "(" formula ")" -> know
      | term "=" term -> eq
      | "(" formula ")"
      %(predicate)s

?term: product
     | term "+" product -> add

?product: atom
        | product "*" atom -> mul

?atom: NUMBER -> number
     | "S" "(" term ")" -> succ
     | name -> var
     | "(" term ")"

name: VAR %(reserved)s

VAR: /[a-z][a-z0-9_]*/
RVAR: /_[a-z0-9_]+/
PRED: /P[0-9]+/
NUMBER: /[0-9]+/

%%import common.WS
%%ignore WS
"""

_INTERNAL = {
    "predicate": '| PRED "(" [term ("," term)*] ")" -> pred',
    "reserved": "| RVAR",
}

_USER = {"predicate": "", "reserved": ""}


class _ToSyntax(L.Transformer):
    def name(self, items) -> str:
        return str(items[0])

    def number(self, items) -> Term:
        return Num(int(items[0]))

    def var(self, items) -> Term:
        return Var(items[0])

    def succ(self, items) -> Term:
        return succ(items[0])

    def add(self, items) -> Term:
        return Add(items[0], items[1])

    def mul(self, items) -> Term:
        return Mul(items[0], items[1])

    def eq(self, items) -> Formula:
        return Eq(items[0], items[1])

    def pred(self, items) -> Formula:
        return Pred(int(items[0][1:]), tuple(t for t in items[1:] if t is not None))

    def neg(self, items) -> Formula:
        return Not(items[0])

    def know(self, items) -> Formula:
        return Know(items[0])

    def forall(self, items) -> Formula:
        return Forall(items[0], items[1])

    def exists(self, items) -> Formula:
        return Exists(items[0], items[1])

    def conj(self, items) -> Formula:
        return And(items[0], items[1])

    def disj(self, items) -> Formula:
        return Or(items[0], items[1])

    def implies(self, items) -> Formula:
        return Implies(items[0], items[1])

    def iff(self, items) -> Formula:
        return Iff(items[0], items[1])


@lru_cache(maxsize=None)
def _parser(internal: bool) -> L.Lark:
    grammar = _GRAMMAR % (_INTERNAL if internal else _USER)

    return L.Lark(
        grammar,
        parser="lalr",
        start=["formula", "term"],
        transformer=_ToSyntax(),
        maybe_placeholders=True,
    )


#######################################################################################
# PARSING METHODS


def _parse(text: str, start: str, internal: bool):
    try:
        return _parser(internal).parse(text, start=start)

    except L.exceptions.UnexpectedCharacters as exc:
        raise UnknownSymbolError(exc.char, exc.line, exc.column) from exc

    except L.exceptions.UnexpectedToken as exc:
        raise ParseError(text, exc.line, exc.column, exc.expected) from exc

    except L.exceptions.UnexpectedEOF as exc:
        raise ParseError(text, -1, len(text) + 1, exc.expected) from exc


def parse(text: str, internal: bool = False) -> Formula:
    """Parse formula text.

    Args:
        text (str): Formula in the text grammar.
        internal (bool, optional): Whether to accept reserved names and predicate
            atoms. Defaults to False.

    Raises:
        ParseError: If the text does not follow the grammar.
        UnknownSymbolError: If the text contains a character outside the grammar.

    Returns:
        Formula: The denoted formula.
    """
    return _parse(text, "formula", internal)


def parse_term(text: str, internal: bool = False) -> Term:
    """Parse term text. Raises like `parse`."""
    return _parse(text, "term", internal)
