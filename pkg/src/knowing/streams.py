"""Size-ordered enumeration of formulas and closed terms.

Formulas are enumerated in stages. Stage w draws variable names from the first w names
of `variable_names()` and yields each formula of size at most w that is new at that
stage: it has size exactly w, or it uses the w-th name. Every formula therefore
appears exactly once, at a finite position, and the order is the same on every run.
"""

import itertools
from functools import lru_cache
from typing import Iterator

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
    Term,
    Var,
    free_vars,
    succ,
    term_vars,
)


# Preferred names, enumerated before the generated ones
_LEADING_NAMES = ("x", "y", "z")


def variable_names() -> Iterator[str]:
    """Yield every user variable name: x, y, z, the other letters, then x0, x1, ..."""
    yield from _LEADING_NAMES
    yield from (c for c in "abcdefghijklmnopqrstuvw" if c not in _LEADING_NAMES)
    yield from (f"x{i}" for i in itertools.count())


def name_pool(size: int) -> tuple[str, ...]:
    return tuple(itertools.islice(variable_names(), size))


#######################################################################################
# FIXED-SIZE ENUMERATION


def terms_of_size(size: int, pool: tuple[str, ...]) -> Iterator[Term]:
    """Yield the terms with `size` nodes over the variables in `pool`."""
    if size < 1:
        return

    if size == 1:
        yield from (Var(name) for name in pool)
        yield Num(0)
        return

    yield from (succ(term) for term in terms_of_size(size - 1, pool))

    for constructor in (Add, Mul):
        for left_size in range(1, size - 1):
            for left in terms_of_size(left_size, pool):
                for right in terms_of_size(size - 1 - left_size, pool):
                    yield constructor(left, right)


def formulas_of_size(size: int, pool: tuple[str, ...]) -> Iterator[Formula]:
    """Yield the formulas with `size` nodes over the variables in `pool`."""
    for left_size in range(1, size - 1):
        for left in terms_of_size(left_size, pool):
            for right in terms_of_size(size - 1 - left_size, pool):
                yield Eq(left, right)

    if size < 4:
        return

    for body in formulas_of_size(size - 1, pool):
        yield Not(body)
        yield Know(body)

    for name in pool:
        for body in formulas_of_size(size - 1, pool):
            yield Forall(name, body)
            yield Exists(name, body)

    for constructor in (Implies, And, Or, Iff):
        for left_size in range(3, size - 3):
            for left in formulas_of_size(left_size, pool):
                for right in formulas_of_size(size - 1 - left_size, pool):
                    yield constructor(left, right)


def _names_used(formula: Formula) -> set[str]:
    match formula:
        case Eq(left, right):
            return set(term_vars(left) | term_vars(right))
        case Not(body) | Know(body):
            return _names_used(body)
        case Forall(var, body) | Exists(var, body):
            return {var} | _names_used(body)

    return _names_used(formula.left) | _names_used(formula.right)  # type: ignore


#######################################################################################
# STREAMS


def formula_stream(free: frozenset[str] | None = None) -> Iterator[Formula]:
    """Yield every formula, in stage order.

    Args:
        free (frozenset[str], optional): If given, only formulas whose free variables
            lie in this set are yielded.
    """
    for stage in itertools.count(1):
        pool = name_pool(stage)
        newest = pool[-1]

        for formula_size in range(3, stage + 1):
            for formula in formulas_of_size(formula_size, pool):
                if formula_size != stage and newest not in _names_used(formula):
                    continue

                if free is not None and not free_vars(formula) <= free:
                    continue

                yield formula


def closed_term_stream() -> Iterator[Term]:
    """Yield every closed term in size order: 0, S(0), S(S(0)), 0+0, 0*0, ..."""
    for term_size in itertools.count(1):
        yield from terms_of_size(term_size, ())


class StreamIndex:
    """Random access into a stream, materialized on demand."""

    def __init__(self, stream: Iterator):
        self._stream = stream
        self._items: list = []

    def __getitem__(self, position: int):
        while len(self._items) <= position:
            self._items.append(next(self._stream))

        return self._items[position]

    def __iter__(self) -> Iterator:
        return (self[position] for position in itertools.count())

    def __len__(self) -> int:
        return len(self._items)


@lru_cache(maxsize=None)
def formula_index(free: frozenset[str] | None = None) -> StreamIndex:
    """Return the shared random-access view of `formula_stream(free)`."""
    return StreamIndex(formula_stream(free))


@lru_cache(maxsize=None)
def closed_term_index() -> StreamIndex:
    return StreamIndex(closed_term_stream())
