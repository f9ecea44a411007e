"""The versioned table of host primitives blueprints may call.

The table itself lives in `data/primitives.json`; this module binds each entry to its
implementation. A primitive takes one natural and the caller's budget and returns one
natural. Primitives that search for proofs run on child budgets sized by the table's
schedule, so a blueprint's behavior depends only on its syntax and the table version.

Attributes:
    PRIMITIVE_VERSION (str): Version of the table.
    SCHEDULE_BASE (int): Prover steps granted per schedule round.
    FETCH_INTERVAL (int): Search steps between two axiom fetches in primitives.
    PRIMITIVES (dict[str, Primitive]): Every primitive by name.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable

import pkg_resources

from knowing.budget import Budget
from knowing.coding import decode, encode, pair, unpair
from knowing.exceptions import NotACodeError, UnknownPrimitiveError
from knowing.formula import Num, free_vars, size, subst
from knowing.streams import formula_index


_primitive_data: dict[str, Any] = json.load(
    pkg_resources.resource_stream(__name__, "data/primitives.json")
)


PRIMITIVE_VERSION: str = _primitive_data["version"]
SCHEDULE_BASE: int = _primitive_data["schedule_base"]
FETCH_INTERVAL: int = _primitive_data["fetch_interval"]

# Formulas a knowledge enumerator ranges over
_X_ONLY = frozenset({"x"})


def schedule(round_number: int) -> int:
    """Return the prover budget of the given schedule round."""
    return SCHEDULE_BASE * (round_number + 1)


#######################################################################################
# IMPLEMENTATIONS


def _formula_with_x(position: int, budget: Budget):
    budget.tick(1 + position)
    formula = formula_index(_X_ONLY)[position]
    budget.tick(size(formula))
    return formula


def candidate(argument: int, budget: Budget) -> int:
    m, position = unpair(argument)
    return pair(m, encode(_formula_with_x(position, budget)))


def formula_code(argument: int, budget: Budget) -> int:
    return encode(_formula_with_x(argument, budget))


def entails_sigma(argument: int, budget: Budget) -> int:
    from knowing.schemata import entails_sigma as sigma_entails

    n, rest = unpair(argument)
    request, round_number = unpair(rest)
    m, code = unpair(request)
    budget.tick()

    try:
        formula = decode(code)
    except NotACodeError:
        return 0

    if not free_vars(formula) <= _X_ONLY:
        return 0

    goal = subst(formula, "x", Num(m))
    attempt = budget.child(schedule(round_number))

    return int(sigma_entails(n, goal, attempt, FETCH_INTERVAL) is not None)


def sigma_axiom(argument: int, budget: Budget) -> int:
    from knowing.schemata import sigma

    n, position = unpair(argument)
    budget.tick()
    cursor = sigma(n).cursor(budget)

    for _ in range(position):
        next(cursor)

    return encode(next(cursor))


def theorem(argument: int, budget: Budget) -> int:
    from knowing.logic.prover import prove_valid

    code, round_number = unpair(argument)
    budget.tick()

    try:
        formula = decode(code)
    except NotACodeError:
        return 0

    return int(prove_valid(formula, budget.child(schedule(round_number))) is not None)


#######################################################################################
# PRIMITIVE TABLE


@dataclass(frozen=True)
class Primitive:
    """A named host function.

    Attributes:
        id (int): Number of the primitive inside blueprint codes.
        name (str): Name of the primitive in blueprint text.
        description (str): What the primitive returns.
    """

    id: int
    name: str
    description: str

    def __call__(self, argument: int, budget: Budget) -> int:
        return PRIMITIVE_IMPLEMENTATIONS[self.name](argument, budget)


# A mapping of primitive names to the functions that implement them
PRIMITIVE_IMPLEMENTATIONS: dict[str, Callable[[int, Budget], int]] = {
    "candidate": candidate,
    "entails-sigma": entails_sigma,
    "sigma-axiom": sigma_axiom,
    "theorem": theorem,
    "formula-code": formula_code,
}


def construct_primitives(data: dict[str, dict[str, Any]]) -> dict[str, Primitive]:
    """Construct Primitive objects from JSON data."""
    return {name: Primitive(**entry) for name, entry in data.items()}


PRIMITIVES: dict[str, Primitive] = construct_primitives(_primitive_data["primitives"])

_PRIMITIVES_BY_ID = {p.id: p for p in PRIMITIVES.values()}


def primitive(name: str) -> Primitive:
    """Look up a primitive by name.

    Raises:
        UnknownPrimitiveError: If the table has no such primitive.
    """
    if name not in PRIMITIVES:
        raise UnknownPrimitiveError(name, PRIMITIVES)

    return PRIMITIVES[name]


def primitive_by_id(primitive_id: int) -> Primitive:
    if primitive_id not in _PRIMITIVES_BY_ID:
        raise UnknownPrimitiveError(str(primitive_id))

    return _PRIMITIVES_BY_ID[primitive_id]
