"""Blueprints: programs of the enumerator language and their numeric indices.

A blueprint is a statement. Statements emit values, sequence, loop, branch, bind slots
and run other blueprints; expressions compute naturals from constants, the input,
slots, pairing, arithmetic, quotation, primitives and applications of other
blueprints. Indices use the same self-delimiting word packing as Godel numbers, over
a separate tag table.

Text form, one s-expression per node:

    (const 3)  input  (ref 0)  (pair a b)  (left a)  (right a)  (add a b) ...
    (quote stmt)  (prim candidate a)  (apply index input)
    (emit a)  (seq s ...)  (for 0 count s)  (loop 0 s)  (if c s s)  (let 0 a s)
    (each 0 index input s)

Attributes:
    BLUEPRINT_VERSION (str): Version pin of the tag table.
    BLUEPRINT_TAGS (dict[type, int]): Tag of each node type.
    ARITH_OPS (tuple[str, ...]): Arithmetic operations, by word.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import lark as L

from knowing.coding import pack, unpack
from knowing.compmodel.primitives import primitive, primitive_by_id
from knowing.exceptions import (
    NotABlueprintError,
    NotACodeError,
    ParseError,
    UnknownPrimitiveError,
    UnknownSymbolError,
)


BLUEPRINT_VERSION = "blueprint-v1"

ARITH_OPS = ("add", "mul", "monus", "div", "mod", "eq", "lt", "pow", "log")


#######################################################################################
# EXPRESSIONS


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Input:
    pass


@dataclass(frozen=True)
class Ref:
    slot: int


@dataclass(frozen=True)
class Pair:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Left:
    arg: Expr


@dataclass(frozen=True)
class Right:
    arg: Expr


@dataclass(frozen=True)
class Arith:
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Quote:
    body: Stmt


@dataclass(frozen=True)
class Prim:
    name: str
    arg: Expr


@dataclass(frozen=True)
class Apply:
    index: Expr
    input: Expr


Expr = Const | Input | Ref | Pair | Left | Right | Arith | Quote | Prim | Apply


#######################################################################################
# STATEMENTS


@dataclass(frozen=True)
class Emit:
    value: Expr


@dataclass(frozen=True)
class Seq:
    body: tuple[Stmt, ...] = ()


@dataclass(frozen=True)
class For:
    slot: int
    count: Expr
    body: Stmt


@dataclass(frozen=True)
class Loop:
    slot: int
    body: Stmt


@dataclass(frozen=True)
class If:
    cond: Expr
    then: Stmt
    orelse: Stmt


@dataclass(frozen=True)
class Let:
    slot: int
    value: Expr
    body: Stmt


@dataclass(frozen=True)
class Each:
    """Run blueprint `index` on `input` and execute `body` once per emitted value."""

    slot: int
    index: Expr
    input: Expr
    body: Stmt


Stmt = Emit | Seq | For | Loop | If | Let | Each

SKIP = Seq(())


#######################################################################################
# NUMERIC CODING


BLUEPRINT_TAGS: dict[type, int] = {
    Const: 0,
    Input: 1,
    Ref: 2,
    Pair: 3,
    Left: 4,
    Right: 5,
    Arith: 6,
    Quote: 7,
    Prim: 8,
    Apply: 9,
    Emit: 10,
    Seq: 11,
    For: 12,
    Loop: 13,
    If: 14,
    Let: 15,
    Each: 16,
}

_TAG_TYPES = {tag: node_type for node_type, tag in BLUEPRINT_TAGS.items()}

_EXPR_TAGS = frozenset(range(10))


def blueprint_words(node: Expr | Stmt) -> Iterator[int]:
    """Flatten a node into its word list in preorder."""
    yield BLUEPRINT_TAGS[type(node)]

    match node:
        case Const(value):
            yield value
        case Input():
            pass
        case Ref(slot):
            yield slot
        case Pair(left, right) | Apply(left, right):
            yield from blueprint_words(left)
            yield from blueprint_words(right)
        case Left(arg) | Right(arg):
            yield from blueprint_words(arg)
        case Arith(op, left, right):
            yield ARITH_OPS.index(op)
            yield from blueprint_words(left)
            yield from blueprint_words(right)
        case Quote(body):
            yield from blueprint_words(body)
        case Prim(name, arg):
            yield primitive(name).id
            yield from blueprint_words(arg)
        case Emit(value):
            yield from blueprint_words(value)
        case Seq(body):
            yield len(body)
            for part in body:
                yield from blueprint_words(part)
        case For(slot, count, body):
            yield slot
            yield from blueprint_words(count)
            yield from blueprint_words(body)
        case Loop(slot, body):
            yield slot
            yield from blueprint_words(body)
        case If(cond, then, orelse):
            yield from blueprint_words(cond)
            yield from blueprint_words(then)
            yield from blueprint_words(orelse)
        case Let(slot, value, body):
            yield slot
            yield from blueprint_words(value)
            yield from blueprint_words(body)
        case Each(slot, index, argument, body):
            yield slot
            yield from blueprint_words(index)
            yield from blueprint_words(argument)
            yield from blueprint_words(body)


@lru_cache(maxsize=1024)
def encode_blueprint(program: Stmt) -> int:
    """Return the index of a blueprint."""
    if BLUEPRINT_TAGS.get(type(program), -1) in _EXPR_TAGS | {-1}:
        raise TypeError("a blueprint is a statement")

    return pack(blueprint_words(program))


class _Reader:
    def __init__(self, words: list[int], index: int):
        self.words = words
        self.index = index
        self.position = 0

    def word(self) -> int:
        if self.position >= len(self.words):
            raise NotABlueprintError(self.index, "word list ends inside a node")

        self.position += 1
        return self.words[self.position - 1]

    def expr(self) -> Expr:
        return self.node(True)  # type: ignore[return-value]

    def stmt(self) -> Stmt:
        return self.node(False)  # type: ignore[return-value]

    def node(self, want_expr: bool) -> Expr | Stmt:
        tag = self.word()
        node_type = _TAG_TYPES.get(tag)

        if node_type is None:
            raise NotABlueprintError(self.index, f"unknown tag {tag}")

        if (tag in _EXPR_TAGS) != want_expr:
            expected = "an expression" if want_expr else "a statement"
            raise NotABlueprintError(self.index, f"tag {tag} where {expected} belongs")

        if node_type is Const:
            return Const(self.word())
        if node_type is Input:
            return Input()
        if node_type is Ref:
            return Ref(self.word())
        if node_type in (Pair, Apply):
            return node_type(self.expr(), self.expr())
        if node_type in (Left, Right):
            return node_type(self.expr())
        if node_type is Arith:
            op = self.word()
            if op >= len(ARITH_OPS):
                raise NotABlueprintError(self.index, f"unknown operation {op}")
            return Arith(ARITH_OPS[op], self.expr(), self.expr())
        if node_type is Quote:
            return Quote(self.stmt())
        if node_type is Prim:
            try:
                name = primitive_by_id(self.word()).name
            except UnknownPrimitiveError as exc:
                raise NotABlueprintError(self.index, str(exc)) from exc
            return Prim(name, self.expr())
        if node_type is Emit:
            return Emit(self.expr())
        if node_type is Seq:
            return Seq(tuple(self.stmt() for _ in range(self.word())))
        if node_type is For:
            return For(self.word(), self.expr(), self.stmt())
        if node_type is Loop:
            return Loop(self.word(), self.stmt())
        if node_type is If:
            return If(self.expr(), self.stmt(), self.stmt())
        if node_type is Let:
            return Let(self.word(), self.expr(), self.stmt())

        return Each(self.word(), self.expr(), self.expr(), self.stmt())


@lru_cache(maxsize=1024)
def decode_blueprint(index: int) -> Stmt:
    """Return the blueprint with the given index.

    Raises:
        NotABlueprintError: If `index` is not the index of a blueprint.
    """
    try:
        words = unpack(index)
    except NotACodeError as exc:
        raise NotABlueprintError(index, "not a packed word list") from exc

    reader = _Reader(words, index)
    program = reader.node(False)

    if reader.position != len(words):
        raise NotABlueprintError(index, "trailing words after the blueprint")

    return program  # type: ignore[return-value]


#######################################################################################
# TEXT FORM


_GRAMMAR = r"""
?sexp: "(" SYMBOL sexp* ")" -> node
     | SYMBOL -> symbol
     | INT -> number

SYMBOL: /[a-z][a-z0-9_-]*/

%import common.INT
%import common.WS
%ignore WS
"""


class _ToBlueprint(L.Transformer):
    def number(self, items) -> int:
        return int(items[0])

    def symbol(self, items):
        name = str(items[0])

        if name == "input":
            return Input()

        return name

    def node(self, items):
        head, *args = items
        return _build(str(head), args)


_BUILDERS = {
    "const": lambda value: Const(value),
    "ref": lambda slot: Ref(slot),
    "pair": Pair,
    "left": Left,
    "right": Right,
    "quote": Quote,
    "prim": lambda name, arg: Prim(primitive(name).name, arg),
    "apply": Apply,
    "emit": Emit,
    "seq": lambda *body: Seq(tuple(body)),
    "for": For,
    "loop": Loop,
    "if": If,
    "let": Let,
    "each": Each,
}


def _build(head: str, args: list):
    if head in ARITH_OPS:
        return Arith(head, *args)

    if head not in _BUILDERS:
        raise UnknownSymbolError(head, -1, -1)

    return _BUILDERS[head](*args)


@lru_cache(maxsize=None)
def _parser() -> L.Lark:
    return L.Lark(_GRAMMAR, parser="lalr", start="sexp", transformer=_ToBlueprint())


def parse_blueprint(text: str) -> Stmt:
    """Parse the text form of a blueprint.

    Raises:
        ParseError: If the text is not a well-formed s-expression of the language.
        UnknownSymbolError: If a node name is not part of the language.
        UnknownPrimitiveError: If a `prim` node names an unknown primitive.
    """
    try:
        program = _parser().parse(text)

    except L.exceptions.VisitError as exc:
        if isinstance(exc.orig_exc, (UnknownSymbolError, UnknownPrimitiveError)):
            raise exc.orig_exc from exc
        raise ParseError(text, -1, -1) from exc

    except L.exceptions.UnexpectedCharacters as exc:
        raise UnknownSymbolError(exc.char, exc.line, exc.column) from exc

    except L.exceptions.UnexpectedInput as exc:
        raise ParseError(text, exc.line, exc.column) from exc

    if BLUEPRINT_TAGS.get(type(program), -1) in _EXPR_TAGS | {-1}:
        raise ParseError(text, 1, 1, ["a statement"])

    return program


def show_blueprint(node: Expr | Stmt) -> str:
    """Render a blueprint in its text form."""
    match node:
        case Const(value):
            return f"(const {value})"
        case Input():
            return "input"
        case Ref(slot):
            return f"(ref {slot})"
        case Arith(op, left, right):
            return f"({op} {show_blueprint(left)} {show_blueprint(right)})"
        case Prim(name, arg):
            return f"(prim {name} {show_blueprint(arg)})"
        case Seq(body):
            return "(seq" + "".join(f" {show_blueprint(s)}" for s in body) + ")"

    head = type(node).__name__.lower()
    parts = []

    for value in vars(node).values():
        parts.append(str(value) if isinstance(value, int) else show_blueprint(value))

    return f"({head} {' '.join(parts)})"
