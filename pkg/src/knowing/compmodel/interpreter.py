"""Run blueprints under a step budget.

Execution is a generator of emitted values. Every node visited costs one step, large
products and powers cost extra in proportion to the size of their result, and
primitives charge the same counter. Running out of steps ends the run quietly, so the
values emitted within a budget are always a prefix of those emitted within a larger
one. W_e is the set of values blueprint e emits on input 0.
"""

from __future__ import annotations

import itertools
import logging
from typing import Iterator

from knowing.budget import Budget, BudgetExhausted, as_budget
from knowing.coding import pair, unpair
from knowing.compmodel.blueprint import (
    Apply,
    Arith,
    Const,
    Each,
    Emit,
    Expr,
    For,
    If,
    Input,
    Left,
    Let,
    Loop,
    Pair,
    Prim,
    Quote,
    Ref,
    Right,
    Seq,
    Stmt,
    decode_blueprint,
    encode_blueprint,
)
from knowing.compmodel.primitives import primitive
from knowing.exceptions import NotABlueprintError


log = logging.getLogger(__name__)


# Bits of a product or power paid for by one step
_BITS_PER_STEP = 64

Env = dict[int, int]


def _log(value: int, base: int, budget: Budget) -> int:
    if value == 0 or base < 2:
        return 0

    if base == 2:
        return value.bit_length() - 1

    exponent, power = 0, base

    while power <= value:
        budget.tick()
        exponent += 1
        power *= base

    return exponent


def arith(op: str, left: int, right: int, budget: Budget) -> int:
    """Apply an arithmetic operation; division and remainder by 0 give 0."""
    match op:
        case "add":
            return left + right
        case "mul":
            budget.tick((left.bit_length() + right.bit_length()) // _BITS_PER_STEP)
            return left * right
        case "monus":
            return max(left - right, 0)
        case "div":
            return left // right if right else 0
        case "mod":
            return left % right if right else 0
        case "eq":
            return int(left == right)
        case "lt":
            return int(left < right)
        case "pow":
            if left <= 1:
                return left if right else 1
            budget.tick(right * left.bit_length() // _BITS_PER_STEP)
            return left**right
        case "log":
            return _log(left, right, budget)

    raise ValueError(f"unknown operation {op}")


class Interpreter:
    """Executes blueprints against one budget."""

    def __init__(self, budget: Budget):
        self.budget = budget

    def program(self, index: int) -> Stmt | None:
        try:
            return decode_blueprint(index)
        except NotABlueprintError:
            return None

    def execute(self, stmt: Stmt, env: Env, argument: int) -> Iterator[int]:
        """Yield the values `stmt` emits."""
        self.budget.tick()

        match stmt:
            case Emit(value):
                yield self.evaluate(value, env, argument)
            case Seq(body):
                for part in body:
                    yield from self.execute(part, env, argument)
            case For(slot, count, body):
                for i in range(self.evaluate(count, env, argument)):
                    yield from self.execute(body, {**env, slot: i}, argument)
            case Loop(slot, body):
                for i in itertools.count():
                    self.budget.tick()
                    yield from self.execute(body, {**env, slot: i}, argument)
            case If(cond, then, orelse):
                branch = then if self.evaluate(cond, env, argument) else orelse
                yield from self.execute(branch, env, argument)
            case Let(slot, value, body):
                bound = {**env, slot: self.evaluate(value, env, argument)}
                yield from self.execute(body, bound, argument)
            case Each(slot, index, sub_input, body):
                program = self.program(self.evaluate(index, env, argument))
                value = self.evaluate(sub_input, env, argument)

                if program is None:
                    return

                for emitted in self.execute(program, {}, value):
                    yield from self.execute(body, {**env, slot: emitted}, argument)

    def evaluate(self, expr: Expr, env: Env, argument: int) -> int:
        """Return the value of `expr`."""
        self.budget.tick()

        match expr:
            case Const(value):
                return value
            case Input():
                return argument
            case Ref(slot):
                return env.get(slot, 0)
            case Pair(left, right):
                return pair(
                    self.evaluate(left, env, argument),
                    self.evaluate(right, env, argument),
                )
            case Left(arg):
                return unpair(self.evaluate(arg, env, argument))[0]
            case Right(arg):
                return unpair(self.evaluate(arg, env, argument))[1]
            case Arith(op, left, right):
                first = self.evaluate(left, env, argument)
                second = self.evaluate(right, env, argument)
                return arith(op, first, second, self.budget)
            case Quote(body):
                return encode_blueprint(body)
            case Prim(name, arg):
                return primitive(name)(self.evaluate(arg, env, argument), self.budget)
            case Apply(index, sub_input):
                program = self.program(self.evaluate(index, env, argument))
                value = self.evaluate(sub_input, env, argument)

                if program is None:
                    return 0

                return next(self.execute(program, {}, value), 0)

        raise TypeError(f"not an expression: {expr!r}")


def _emissions(
    index: int, budget: Budget, argument: int
) -> Iterator[tuple[int, int]]:
    program = decode_blueprint(index)
    interpreter = Interpreter(budget)

    try:
        for value in interpreter.execute(program, {}, argument):
            yield budget.used, value

    except BudgetExhausted as exc:
        if not budget.owns(exc):
            raise


def run(index: int, budget: Budget | int, argument: int = 0) -> frozenset[int]:
    """Return the values blueprint `index` emits within `budget`.

    Raises:
        NotABlueprintError: If `index` is not the index of a blueprint.
    """
    budget = as_budget(budget)
    emitted = frozenset(value for _, value in _emissions(index, budget, argument))
    log.debug("run: %d values in %d steps", len(emitted), budget.used)

    return emitted


def trace(index: int, budget: Budget | int, argument: int = 0) -> list[tuple[int, int]]:
    """Return (step, value) for every emission within `budget`, duplicates included.

    Raises:
        NotABlueprintError: If `index` is not the index of a blueprint.
    """
    return list(_emissions(index, as_budget(budget), argument))
