import pytest
from conftest import assignments, formulas, names, rename_bound
from hypothesis import assume, given
from hypothesis import strategies as st

from knowing.exceptions import CaptureError, NotPurelyModalError
from knowing.formula import (
    Assignment,
    Eq,
    Know,
    Num,
    Var,
    free_vars,
    ground,
    is_sentence,
    pattern,
    show,
    size,
    subst,
    succ,
    universal_closure,
    variant_eq,
    weight,
)
from knowing.parser import parse


def test_ground():
    """Grounding replaces free variables by numerals."""
    grounded = ground(parse("x=y"), Assignment({"x": 0, "y": 2}))

    assert show(grounded) == "0=S(S(0))"
    assert show(ground(parse("K(x=0)"), Assignment({"x": 1}))) == "K(S(0)=0)"
    assert ground(parse("forall x x=x"), Assignment({"x": 5})) == parse(
        "forall x x=x"
    )


def test_free_vars():
    assert free_vars(parse("forall x x=y")) == {"y"}
    assert free_vars(parse("K(x=y)")) == {"x", "y"}
    assert free_vars(parse("exists z K(z=0)")) == frozenset()


def test_subst():
    assert subst(parse("x=y"), "x", Num(3)) == parse("S(S(S(0)))=y")
    assert subst(parse("forall x x=y"), "x", Num(3)) == parse("forall x x=y")

    with pytest.raises(CaptureError):
        subst(parse("forall y x=y"), "x", Var("y"))


def test_variant_eq():
    assert variant_eq(parse("forall x x=z"), parse("forall y y=z"))
    assert variant_eq(parse("K(exists x x=0)"), parse("K(exists y y=0)"))
    assert not variant_eq(parse("forall x x=y"), parse("forall y y=y"))
    assert not variant_eq(parse("x=z"), parse("y=z"))


def test_pattern_shares_atoms():
    """Formulas differing only in their free occurrences share one pattern atom."""
    first, first_args = pattern(parse("K(x=y)"))
    second, second_args = pattern(parse("K(z=z)"))

    assert first == second
    assert first.arity == 2
    assert first_args == ["x", "y"]
    assert second_args == ["z", "z"]

    bound, _ = pattern(parse("K(forall x x=y)"))
    renamed, _ = pattern(parse("K(forall z z=y)"))
    assert bound == renamed


def test_pattern_separates_ground_formulas():
    open_atom, _ = pattern(parse("K(x=x)"))
    ground_atom, args = pattern(parse("K(S(0)=S(0))"))

    assert open_atom != ground_atom
    assert ground_atom.arity == 0
    assert args == []


def test_pattern_needs_knowledge():
    with pytest.raises(NotPurelyModalError):
        pattern(parse("x=y"))


def test_universal_closure_order():
    assert universal_closure(parse("y=x")) == parse("forall y forall x y=x")


def test_numerals_fold():
    assert succ(Num(2)) == Num(3)
    assert parse("9=S(S(S(S(S(S(S(S(S(0)))))))))") == Eq(Num(9), Num(9))
    assert show(Eq(Num(9), Num(8))) == "9=S(S(S(S(S(S(S(S(0))))))))"


def test_size_and_weight():
    assert size(parse("0=S(S(0))")) == 5
    assert size(Know(Eq(Var("x"), Num(3)))) == 7

    # Large numerals are charged by their bit length
    assert weight(Eq(Num(1 << 70), Num(0))) == 4
    assert weight(parse("0=S(S(0))")) == 3


@given(formulas, assignments)
def test_ground_is_sentence(formula, assignment):
    assert is_sentence(ground(formula, assignment))


@given(formulas, assignments, st.dictionaries(names, st.integers(0, 20)))
def test_ground_depends_on_free_vars_only(formula, assignment, others):
    bindings = {name: assignment(name) for name in free_vars(formula)}
    other = Assignment({**others, **bindings}, default=7)

    assert ground(formula, assignment) == ground(formula, other)


@given(formulas, names, names, assignments)
def test_ground_after_variable_substitution(formula, var, term_var, assignment):
    try:
        substituted = subst(formula, var, Var(term_var))
    except CaptureError:
        assume(False)

    expected = ground(formula, assignment.override(var, assignment(term_var)))
    assert ground(substituted, assignment) == expected


@given(formulas, names, assignments, st.integers(0, 20))
def test_ground_after_numeral_substitution(formula, var, assignment, m):
    zero = ground(subst(formula, var, Num(0)), assignment)
    assert zero == ground(formula, assignment.override(var, 0))

    shifted = ground(subst(formula, var, succ(Var(var))), assignment.override(var, m))
    assert shifted == ground(formula, assignment.override(var, m + 1))


@given(formulas)
def test_variants_share_patterns(formula):
    variant = rename_bound(formula)

    assert variant_eq(formula, variant)
    assert pattern(Know(formula)) == pattern(Know(variant))


@given(formulas, names, names)
def test_weak_substitution_keeps_patterns(formula, var, other):
    kappa = Know(formula)

    try:
        substituted = subst(kappa, var, Var(other))
    except CaptureError:
        assume(False)

    atom, args = pattern(kappa)
    renamed_atom, renamed_args = pattern(substituted)

    assert renamed_atom == atom
    assert renamed_args == [other if name == var else name for name in args]
