from conftest import assignments, formulas, names, rename_bound, terms
from hypothesis import given, settings
from hypothesis import strategies as st

from knowing.compmodel.arith import (
    membership_formula,
    membership_formula_for,
    pair_membership_for,
)
from knowing.compmodel.blueprint import encode_blueprint, parse_blueprint
from knowing.formula import (
    And,
    Assignment,
    Exists,
    Num,
    Pred,
    Var,
    pattern,
    variant_eq,
)
from knowing.logic.semantics import (
    ThreeValued,
    constrained_structure,
    evaluate,
    random_pattern_structure,
    standard_structure,
)
from knowing.logic.translate import AtomTable, translate
from knowing.parser import parse


TRUE, FALSE, UNKNOWN = ThreeValued.TRUE, ThreeValued.FALSE, ThreeValued.UNKNOWN


def test_bounded_quantifiers():
    standard = standard_structure()

    assert evaluate(standard, parse("0=0"), Assignment({"x": 4})) is TRUE
    assert evaluate(standard, parse("exists x x=S(0)")) is TRUE
    assert evaluate(standard, parse("forall x x=x")) is UNKNOWN
    assert evaluate(standard, parse("forall x x=0")) is FALSE
    assert evaluate(standard, parse("exists x S(x)=0")) is UNKNOWN
    assert evaluate(standard, parse("exists x x=S(S(S(0)))"), bound=2) is UNKNOWN


def test_strong_kleene_connectives():
    assert (UNKNOWN & FALSE) is FALSE
    assert (UNKNOWN | TRUE) is TRUE
    assert UNKNOWN.implies(TRUE) is TRUE
    assert (~UNKNOWN) is UNKNOWN
    assert TRUE.iff(UNKNOWN) is UNKNOWN


def test_standard_structure_knows_nothing():
    assert evaluate(standard_structure(), parse("K(0=0)")) is UNKNOWN
    assert evaluate(standard_structure(), parse("K(0=0) -> 0=0")) is TRUE


def test_translation_to_predicates():
    table = AtomTable()

    assert translate(parse("x=y"), table) == parse("x=y")
    assert translate(parse("K(x=x)"), table) == Pred(0, (Var("x"), Var("x")))
    assert translate(parse("forall x K(z=y)"), table) == parse(
        "forall x P0(z, y)", internal=True
    )
    assert translate(parse("K(0=0)"), table) == Pred(1, ())
    assert len(table) == 2


@given(st.integers(0, 2**32))
def test_pattern_structures_are_deterministic(seed):
    first, second = random_pattern_structure(seed), random_pattern_structure(seed)
    queries = [("K(x=y)", {"x": 3, "y": 4}), ("K(exists z z=x)", {"x": 1})]

    for text, bindings in queries:
        formula, assignment = parse(text), Assignment(bindings)
        assert evaluate(first, formula, assignment) is evaluate(
            second, formula, assignment
        )


@given(st.integers(0, 2**32))
def test_pattern_structures_respect_patterns(seed):
    structure = random_pattern_structure(seed)
    pair = evaluate(structure, parse("K(x=y)"), Assignment({"x": 3, "y": 3}))
    single = evaluate(structure, parse("K(z=z)"), Assignment({"z": 3}))

    assert pair is single
    assert pair.definite


def test_countermodel_for_ground_instances():
    general, _ = pattern(parse("K(x=x)"))
    instance, _ = pattern(parse("K(S(0)=S(0))"))
    structure = constrained_structure(3, {general: True, instance: False})

    assert all(
        evaluate(structure, parse("K(x=x)"), Assignment({"x": m})) is TRUE
        for m in range(25)
    )
    assert evaluate(structure, parse("K(S(0)=S(0))")) is FALSE
    assert evaluate(structure, parse("forall x K(x=x)")) is UNKNOWN


def test_membership_formulas_run_the_interpreter():
    emitter = encode_blueprint(parse_blueprint("(emit (const 3))"))
    standard = standard_structure()
    member = membership_formula(emitter)

    assert evaluate(standard, member, Assignment({"x": 3})) is TRUE
    assert evaluate(standard, member, Assignment({"x": 4})) is UNKNOWN
    assert evaluate(standard, membership_formula(0), Assignment({"x": 3})) is FALSE


EMITTER = encode_blueprint(parse_blueprint("(seq (emit (const 3)) (emit (const 0)))"))

indices = st.sampled_from([Num(EMITTER), Num(0)])

memberships = st.one_of(
    st.builds(membership_formula_for, terms, indices),
    st.builds(pair_membership_for, terms, terms, indices),
)

mixed = st.one_of(
    formulas,
    st.builds(And, formulas, memberships),
    st.builds(Exists, names, memberships),
)


def test_renamed_membership_keeps_its_verdict():
    standard = standard_structure()
    member = membership_formula(EMITTER)
    renamed = rename_bound(member)
    nowhere = membership_formula_for(Num(0), Num(0))

    assert variant_eq(member, renamed)
    assert evaluate(standard, renamed, Assignment({"x": 3})) is TRUE
    assert evaluate(standard, renamed, Assignment({"x": 4})) is UNKNOWN
    assert evaluate(standard, rename_bound(nowhere)) is FALSE
    assert evaluate(standard, nowhere) is FALSE


def test_renamed_membership_translates_alike():
    table = AtomTable()
    member = membership_formula(EMITTER)

    assert translate(rename_bound(member), table) == translate(member, table)
    assert len(table) == 1


@settings(max_examples=1_000, deadline=None)
@given(mixed, assignments, st.integers(0, 2**32))
def test_variants_share_verdicts(formula, assignment, seed):
    variant = rename_bound(formula)

    assert variant_eq(formula, variant)

    for structure in (standard_structure(), random_pattern_structure(seed)):
        assert evaluate(structure, formula, assignment, bound=4) is evaluate(
            structure, variant, assignment, bound=4
        )
