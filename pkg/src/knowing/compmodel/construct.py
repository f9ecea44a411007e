"""Constructions on indices: s-m-n, fixed points and the knowledge enumerator.

A transformer is a blueprint whose first emission on input e is the index f(e). The
fixed point of a transformer f is built the classical way: a blueprint D reads
<u, z>, computes f applied to the s-m-n index of (u, u) and runs the result on z;
n = smn(D, D) then behaves as f(n) on every input. Because D needs smn as a program,
`smn_expr` computes smn indices arithmetically from the packed word layout.

Attributes:
    KNOW (Stmt): Enumerator of the knowledge pairs of sigma(n), reading <n, z>.
    FIRST_SLICE (Stmt): Reads <<e, k>, z> and emits b for each <k, b> in W_e.
    SECOND_SLICE (Stmt): Reads <<e, c>, z> and emits m for each <m, c> in W_e.
    FIXPOINT_SETUP (int): Steps a fixed point may spend before its transformer's
        result starts running.
    SLICE_SETUP (int): Steps a slice spends before the sliced index starts running.
"""

from __future__ import annotations

import logging
from functools import lru_cache

import numpy as np

from knowing.budget import Budget, as_budget
from knowing.coding import chunk, pack, pair
from knowing.compmodel.blueprint import (
    SKIP,
    Apply,
    Arith,
    Const,
    Each,
    Emit,
    Expr,
    If,
    Input,
    Left,
    Let,
    Loop,
    Pair,
    Prim,
    Ref,
    Right,
    Seq,
    Stmt,
    decode_blueprint,
    encode_blueprint,
)
from knowing.compmodel.interpreter import Interpreter


log = logging.getLogger(__name__)


FIXPOINT_SETUP = 1 << 16

SLICE_SETUP = 64


#######################################################################################
# S-M-N


def smn_blueprint(index: int, fixed: int) -> Stmt:
    """Return the blueprint that runs `index` on <fixed, input>."""
    return Each(0, Const(index), Pair(Const(fixed), Input()), Emit(Ref(0)))


def smn(index: int, fixed: int) -> int:
    """Return an index that behaves as `index` with its first argument fixed.

    Raises:
        NotABlueprintError: If `index` is not the index of a blueprint.
    """
    decode_blueprint(index)
    return encode_blueprint(smn_blueprint(index, fixed))


def _segment(words: list[int]) -> tuple[int, int]:
    value, length = 0, 0

    for word in words:
        part, bits = chunk(word)
        value, length = (value << bits) | part, length + bits

    return value, length


def _op(op: str, left: Expr, right: Expr) -> Expr:
    return Arith(op, left, right)


def _append_words(acc: Expr, words: list[int]) -> Expr:
    value, length = _segment(words)
    return _op("add", _op("mul", acc, Const(1 << length)), Const(value))


def _append_chunk(acc: Expr, word: Expr) -> Expr:
    shifted = _op("add", word, Const(1))
    length = _op("log", shifted, Const(2))
    top = _op("pow", Const(2), length)
    one_more = _op("add", length, Const(1))
    value = _op(
        "add",
        _op("mul", _op("monus", top, Const(1)), _op("pow", Const(2), one_more)),
        _op("monus", shifted, top),
    )
    width = _op("pow", Const(2), _op("add", _op("mul", Const(2), length), Const(1)))

    return _op("add", _op("mul", acc, width), value)


# Words of smn_blueprint(p, k): [each 0 const] p [pair const] k [input emit ref 0]
_SMN_HEAD = [16, 0, 0]
_SMN_MIDDLE = [3, 0]
_SMN_TAIL = [1, 10, 2, 0]


def smn_expr(index: Expr, fixed: Expr) -> Expr:
    """Return an expression whose value is smn(index, fixed)."""
    acc = _append_chunk(Const(pack(_SMN_HEAD)), index)
    acc = _append_words(acc, _SMN_MIDDLE)
    acc = _append_chunk(acc, fixed)

    return _append_words(acc, _SMN_TAIL)


#######################################################################################
# TRANSFORMERS AND FIXED POINTS


def transformer(expr: Expr) -> int:
    """Return the transformer computing `expr` from its input."""
    return encode_blueprint(Emit(expr))


def constant_transformer(index: int) -> int:
    return transformer(Const(index))


def quine_transformer() -> int:
    """Return the transformer e -> index of (emit (const e))."""
    return transformer(_append_chunk(Const(pack([10, 0])), Input()))


def apply_transformer(index: int, argument: int, budget: Budget | int = 1 << 20) -> int:
    """Return the first value transformer `index` emits on `argument`."""
    interpreter = Interpreter(as_budget(budget))
    return interpreter.evaluate(Apply(Const(index), Const(argument)), {}, 0)


def fixpoint_blueprint(transformer_index: int) -> Stmt:
    """Return D: on <u, z>, run f(smn(u, u)) on z."""
    own = Left(Input())
    target = Apply(Const(transformer_index), smn_expr(own, own))

    return Each(0, target, Right(Input()), Emit(Ref(0)))


@lru_cache(maxsize=64)
def fixpoint(transformer_index: int) -> int:
    """Return n with W_n = W_f(n) for the transformer f.

    Raises:
        NotABlueprintError: If `transformer_index` is not the index of a blueprint.
    """
    decode_blueprint(transformer_index)
    diagonal = encode_blueprint(fixpoint_blueprint(transformer_index))
    n = smn(diagonal, diagonal)
    log.info("fixed point of a transformer: index of %d bits", n.bit_length())

    return n


def overhead(budget: int, setup: int = FIXPOINT_SETUP) -> int:
    """Return a budget at which a fixed point emits what f(n) emits within `budget`.

    Each step of f(n) costs at most five steps inside the fixed point, after the fixed
    point has spent at most `setup` steps computing f(n).
    """
    return setup + 5 * budget


def random_transformer(seed: int) -> int:
    """Return a seeded transformer drawn from a few families.

    The families are constant transformers of small emitters, quines, and
    transformers returning smn(P, e) for a random program P that mixes its fixed
    argument into the values it emits.
    """
    rng = np.random.default_rng(seed)
    family = int(rng.integers(3))
    values = [int(v) for v in rng.integers(0, 50, size=int(rng.integers(1, 5)))]

    if family == 0:
        emitter = Seq(tuple(Emit(Const(v)) for v in values))
        return constant_transformer(encode_blueprint(emitter))

    if family == 1:
        return quine_transformer()

    # P reads <e, z> and emits <e, v> for each drawn v, then e itself
    program = Seq(
        tuple(Emit(Pair(Left(Input()), Const(v))) for v in values)
        + (Emit(Left(Input())),)
    )

    return transformer(smn_expr(Const(encode_blueprint(program)), Input()))


#######################################################################################
# KNOWLEDGE ENUMERATOR


# Slots: 0 holds n, 1 the attempt i = <j, r>, 2 the candidate <m, code>
KNOW: Stmt = Let(
    0,
    Left(Input()),
    Loop(
        1,
        Let(
            2,
            Prim("candidate", Left(Ref(1))),
            If(
                Prim("entails-sigma", Pair(Ref(0), Pair(Ref(2), Right(Ref(1))))),
                Emit(Ref(2)),
                SKIP,
            ),
        ),
    ),
)


def knowledge_program() -> int:
    return encode_blueprint(KNOW)


def compile_knowledge_enumerator(n: int) -> int:
    """Return f(n), an index enumerating the pairs <m, code(phi)> with
    FV(phi) within {x} and sigma(n) entailing phi(x|m)."""
    return smn(knowledge_program(), n)


def knowledge_transformer() -> int:
    """Return the transformer n -> compile_knowledge_enumerator(n)."""
    return transformer(smn_expr(Const(knowledge_program()), Input()))


#######################################################################################
# SLICES


FIRST_SLICE: Stmt = Each(
    0,
    Left(Left(Input())),
    Const(0),
    If(
        Arith("eq", Left(Ref(0)), Right(Left(Input()))),
        Emit(Right(Ref(0))),
        SKIP,
    ),
)

SECOND_SLICE: Stmt = Each(
    0,
    Left(Left(Input())),
    Const(0),
    If(
        Arith("eq", Right(Ref(0)), Right(Left(Input()))),
        Emit(Left(Ref(0))),
        SKIP,
    ),
)


def first_slice(index: int, first: int) -> int:
    """Return an index of { b : <first, b> in W_index }."""
    return smn(encode_blueprint(FIRST_SLICE), pair(index, first))


def second_slice(index: int, second: int) -> int:
    """Return an index of { m : <m, second> in W_index }."""
    return smn(encode_blueprint(SECOND_SLICE), pair(index, second))


def slice_overhead(budget: int) -> int:
    """Return a budget at which a slice of e has every match e emits in `budget`."""
    return SLICE_SETUP + 16 * budget
