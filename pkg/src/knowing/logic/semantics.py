"""Bounded evaluation in structures over the standard naturals.

A `BaseStructure` fixes the arithmetic part to the standard model and supplies a
knowledge oracle that sees only the pattern atom of a K-formula and the values of its
arguments, so the variable constraints of the base logic hold by construction.
Quantifiers are searched over 0..bound, which makes evaluation three-valued.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np

from knowing.budget import Budget
from knowing.coding import encode, pair
from knowing.compmodel.arith import read_membership, read_pair_membership
from knowing.formula import (
    Add,
    And,
    Assignment,
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
    PatternAtom,
    Succ,
    Term,
    Var,
    pattern,
)


class ThreeValued(enum.Enum):
    """Strong Kleene truth values."""

    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"

    @classmethod
    def of(cls, value: bool | ThreeValued) -> ThreeValued:
        if isinstance(value, ThreeValued):
            return value

        return cls.TRUE if value else cls.FALSE

    @property
    def definite(self) -> bool:
        return self is not ThreeValued.UNKNOWN

    def __invert__(self) -> ThreeValued:
        return _NEGATION[self]

    def __and__(self, other: ThreeValued) -> ThreeValued:
        if ThreeValued.FALSE in (self, other):
            return ThreeValued.FALSE

        if ThreeValued.UNKNOWN in (self, other):
            return ThreeValued.UNKNOWN

        return ThreeValued.TRUE

    def __or__(self, other: ThreeValued) -> ThreeValued:
        return ~(~self & ~other)

    def implies(self, other: ThreeValued) -> ThreeValued:
        return ~self | other

    def iff(self, other: ThreeValued) -> ThreeValued:
        return self.implies(other) & other.implies(self)


_NEGATION = {
    ThreeValued.TRUE: ThreeValued.FALSE,
    ThreeValued.FALSE: ThreeValued.TRUE,
    ThreeValued.UNKNOWN: ThreeValued.UNKNOWN,
}


Oracle = Callable[[PatternAtom, tuple[int, ...]], "bool | ThreeValued"]


@dataclass(frozen=True)
class BaseStructure:
    """A structure with the standard naturals as its first-order part.

    Attributes:
        oracle (Oracle): Verdict of K-formulas from (pattern atom, argument values).
        name (str): Label used in reports.
        run_budget (int): Interpreter steps spent deciding one membership atom.
    """

    oracle: Oracle
    name: str = "standard"
    run_budget: int = 10_000


def standard_structure(run_budget: int = 10_000) -> BaseStructure:
    """Return the standard model with no information about knowledge."""
    return BaseStructure(
        lambda atom, values: ThreeValued.UNKNOWN, "standard", run_budget=run_budget
    )


#######################################################################################
# PATTERN STRUCTURES


def random_pattern_structure(seed: int, run_budget: int = 10_000) -> BaseStructure:
    """Return a structure whose oracle is a seeded coin flip per (atom, values).

    Verdicts depend only on the seed, the Godel number of the atom's skeleton and the
    argument values, so two formulas with the same pattern and the same argument
    values always agree.
    """
    verdicts: dict[tuple[PatternAtom, tuple[int, ...]], bool] = {}

    def oracle(atom: PatternAtom, values: tuple[int, ...]) -> bool:
        key = (atom, values)

        if key not in verdicts:
            rng = np.random.default_rng([seed, encode(atom.skeleton), *values])
            verdicts[key] = bool(rng.integers(2))

        return verdicts[key]

    return BaseStructure(oracle, f"pattern-{seed}", run_budget=run_budget)


def constrained_structure(
    seed: int,
    fixed: Mapping[PatternAtom, bool | Callable[[tuple[int, ...]], bool]],
    run_budget: int = 10_000,
) -> BaseStructure:
    """Return a pattern structure with prescribed verdicts for some atoms.

    Args:
        seed (int): Seed of the verdicts of every other atom.
        fixed (Mapping): Per atom, either one verdict for all argument values or a
            function of the argument values.
    """
    background = random_pattern_structure(seed).oracle

    def oracle(atom: PatternAtom, values: tuple[int, ...]) -> bool | ThreeValued:
        if atom in fixed:
            verdict = fixed[atom]
            return verdict(values) if callable(verdict) else verdict

        return background(atom, values)

    return BaseStructure(oracle, f"constrained-{seed}", run_budget=run_budget)


#######################################################################################
# EVALUATION


def value(term: Term, assignment: Assignment) -> int:
    """Return the value of `term` in the standard naturals."""
    match term:
        case Var(name):
            return assignment(name)
        case Num(number):
            return number
        case Succ(arg):
            return value(arg, assignment) + 1
        case Add(left, right):
            return value(left, assignment) + value(right, assignment)
        case Mul(left, right):
            return value(left, assignment) * value(right, assignment)

    raise TypeError(f"not a term: {term!r}")


@lru_cache(maxsize=4096)
def _emitted(index: int, run_budget: int) -> frozenset[int] | None:
    from knowing.compmodel.interpreter import run
    from knowing.exceptions import NotABlueprintError

    try:
        return run(index, Budget(run_budget))
    except NotABlueprintError:
        return None


def membership(element: int, index: int, run_budget: int) -> ThreeValued:
    """Decide element in W_index as far as `run_budget` interpreter steps allow."""
    emitted = _emitted(index, run_budget)

    if emitted is None:
        return ThreeValued.FALSE

    return ThreeValued.TRUE if element in emitted else ThreeValued.UNKNOWN


def evaluate(
    structure: BaseStructure,
    formula: Formula,
    assignment: Assignment | None = None,
    bound: int = 25,
) -> ThreeValued:
    """Evaluate `formula` at `assignment` with quantifiers searched up to `bound`.

    An existential is True on a witness at most `bound` and Unknown otherwise; a
    universal is False on a counterexample at most `bound` and Unknown otherwise.
    Raising the bound never turns a definite verdict around.
    """
    assignment = Assignment() if assignment is None else assignment

    return _evaluate(structure, formula, assignment, bound)


def _evaluate(
    structure: BaseStructure, formula: Formula, s: Assignment, bound: int
) -> ThreeValued:
    match formula:
        case Eq(left, right):
            return ThreeValued.of(value(left, s) == value(right, s))
        case Not(body):
            return ~_evaluate(structure, body, s, bound)
        case And(left, right):
            return _evaluate(structure, left, s, bound) & _evaluate(
                structure, right, s, bound
            )
        case Or(left, right):
            return _evaluate(structure, left, s, bound) | _evaluate(
                structure, right, s, bound
            )
        case Implies(left, right):
            return _evaluate(structure, left, s, bound).implies(
                _evaluate(structure, right, s, bound)
            )
        case Iff(left, right):
            return _evaluate(structure, left, s, bound).iff(
                _evaluate(structure, right, s, bound)
            )
        case Know():
            atom, args = pattern(formula)
            verdict = structure.oracle(atom, tuple(s(name) for name in args))
            return ThreeValued.of(verdict)
        case Exists(var, body):
            if (found := read_pair_membership(formula)) is not None:
                first, second, index = (value(t, s) for t in found)
                return membership(pair(first, second), index, structure.run_budget)

            if (member := read_membership(formula)) is not None:
                element, index = (value(t, s) for t in member)
                return membership(element, index, structure.run_budget)

            for candidate in range(bound + 1):
                witness = s.override(var, candidate)

                if _evaluate(structure, body, witness, bound) is ThreeValued.TRUE:
                    return ThreeValued.TRUE

            return ThreeValued.UNKNOWN
        case Forall(var, body):
            for candidate in range(bound + 1):
                witness = s.override(var, candidate)

                if _evaluate(structure, body, witness, bound) is ThreeValued.FALSE:
                    return ThreeValued.FALSE

            return ThreeValued.UNKNOWN

    raise TypeError(f"cannot evaluate {formula!r}")
