import itertools

import pytest
from hypothesis import strategies as st

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
    Term,
    Var,
    map_binary,
    substitute_term,
    succ,
)
from knowing.knower import build


NAMES = ("x", "y", "z")

names = st.sampled_from(NAMES)

terms = st.recursive(
    st.one_of(names.map(Var), st.integers(0, 12).map(Num)),
    lambda children: st.one_of(
        children.map(succ),
        st.builds(Add, children, children),
        st.builds(Mul, children, children),
    ),
    max_leaves=4,
)

formulas = st.recursive(
    st.builds(Eq, terms, terms),
    lambda children: st.one_of(
        st.builds(Not, children),
        st.builds(Know, children),
        st.builds(Forall, names, children),
        st.builds(Exists, names, children),
        st.builds(Implies, children, children),
        st.builds(And, children, children),
        st.builds(Or, children, children),
        st.builds(Iff, children, children),
    ),
    max_leaves=4,
)

assignments = st.builds(
    Assignment, st.dictionaries(names, st.integers(0, 20)), st.integers(0, 3)
)


def rename_bound(formula: Formula, prefix: str = "u") -> Formula:
    """Return the alphabetic variant with binders renamed `u0, u1, ...`."""
    fresh = itertools.count()

    def walk(node: Formula, env: dict[str, Term]) -> Formula:
        match node:
            case Eq(left, right):
                return Eq(substitute_term(left, env), substitute_term(right, env))
            case Not(body):
                return Not(walk(body, env))
            case Know(body):
                return Know(walk(body, env))
            case Forall(var, body) | Exists(var, body):
                renamed = f"{prefix}{next(fresh)}"
                return type(node)(renamed, walk(body, env | {var: Var(renamed)}))

        return map_binary(node, lambda part: walk(part, env))

    return walk(formula, {})


@pytest.fixture(scope="session")
def machine():
    return build()
