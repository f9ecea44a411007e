"""Membership formulas: W-membership written in the language of arithmetic.

`In(x, e)` is `exists _t Emit(e, x, _t)` where `Emit` says that `_t` pairs a step
count `_b` with `_w = <x, e>`. Both pairings are written as the polynomial equation
`p+p = (a+b)*S(a+b)+(b+b)`, which holds exactly when p = <a, b>.

The trace check itself is not arithmetized: proof search treats the template as one
opaque predicate and the evaluator gives it meaning by running the interpreter. Both
read the template with `read_membership`, which accepts every alphabetic variant, so
In(m, e) is true under any choice of bound names exactly when m is in W_e. The exact
matchers serve the schema recognizers, which accept only what their generators emit.
"""

from knowing.formula import (
    Add,
    And,
    Eq,
    Exists,
    Formula,
    Mul,
    Num,
    PatternAtom,
    Term,
    Var,
    succ,
    variant_eq,
)


# Reserved binders of the templates
STEP_VAR = "_b"
TRACE_VAR = "_t"
WITNESS_VAR = "_w"
PAIR_VAR = "_p"


def pairing_equation(code: Term, first: Term, second: Term) -> Formula:
    """Return the equation stating code = <first, second>."""
    total = Add(first, second)

    return Eq(Add(code, code), Add(Mul(total, succ(total)), Add(second, second)))


def membership_formula_for(element: Term, index: Term) -> Formula:
    """Return In(element, index)."""
    emit = Exists(
        STEP_VAR,
        Exists(
            WITNESS_VAR,
            And(
                pairing_equation(Var(TRACE_VAR), Var(STEP_VAR), Var(WITNESS_VAR)),
                pairing_equation(Var(WITNESS_VAR), element, index),
            ),
        ),
    )

    return Exists(TRACE_VAR, emit)


def membership_formula(index: int) -> Formula:
    """Return In(x, e) for the numeral of `index`; its only free variable is x."""
    return membership_formula_for(Var("x"), Num(index))


def pair_membership_for(first: Term, second: Term, index: Term) -> Formula:
    """Return <first, second> in W_index as exists _p (_p = <first, second> & In)."""
    return Exists(
        PAIR_VAR,
        And(
            pairing_equation(Var(PAIR_VAR), first, second),
            membership_formula_for(Var(PAIR_VAR), index),
        ),
    )


def _membership_parts(formula: Formula) -> tuple[Term, Term] | None:
    try:
        pairing = formula.body.body.body.right  # type: ignore[union-attr]
        return pairing.right.left.left.left, pairing.right.right.left

    except AttributeError:
        return None


def _pair_parts(formula: Formula) -> tuple[Term, Term, Term] | None:
    try:
        pairing = formula.body.left  # type: ignore[union-attr]
        first = pairing.right.left.left.left
        second = pairing.right.right.left
        inner = _membership_parts(formula.body.right)  # type: ignore[union-attr]

    except AttributeError:
        return None

    return None if inner is None else (first, second, inner[1])


def match_membership(formula: Formula) -> tuple[Term, Term] | None:
    """Return (element, index) when `formula` is exactly an In template."""
    found = _membership_parts(formula)

    if found is not None and membership_formula_for(*found) == formula:
        return found

    return None


def match_pair_membership(formula: Formula) -> tuple[Term, Term, Term] | None:
    """Return (first, second, index) when `formula` is exactly a pair template."""
    found = _pair_parts(formula)

    if found is not None and pair_membership_for(*found) == formula:
        return found

    return None


def read_membership(formula: Formula) -> tuple[Term, Term] | None:
    """Return (element, index) when `formula` is an In template up to bound names.

    Meaning is given to every alphabetic variant of the template, so evaluation and
    translation read it with this rather than `match_membership`.
    """
    found = _membership_parts(formula)

    if found is not None and variant_eq(membership_formula_for(*found), formula):
        return found

    return None


def read_pair_membership(formula: Formula) -> tuple[Term, Term, Term] | None:
    """Return (first, second, index) for a pair template up to bound names."""
    found = _pair_parts(formula)

    if found is not None and variant_eq(pair_membership_for(*found), formula):
        return found

    return None


# The opaque predicate proof search uses for In(_1, _2)
MEMBERSHIP_ATOM = PatternAtom(membership_formula_for(Var("_1"), Var("_2")), 2)
