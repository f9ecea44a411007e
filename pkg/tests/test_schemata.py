import pytest

from knowing.compmodel.arith import membership_formula_for
from knowing.exceptions import FreeVariableError, UnknownSchemaError
from knowing.formula import Exists, Forall, Iff, Implies, Know, Var, is_sentence
from knowing.logic.semantics import ThreeValued
from knowing.parser import parse
from knowing.schemata import (
    PEANO_AXIOMS,
    SchemaId,
    e2_instance,
    e3_instance,
    entails_sigma,
    enumerate_schema,
    induction_instance,
    is_instance,
    reinhardt_instance,
    schema,
    sigma_line3,
)


TRUE, FALSE = ThreeValued.TRUE, ThreeValued.FALSE


def test_distribution_instances_are_enumerated():
    zero = parse("0=0")

    assert e2_instance(zero, zero) in enumerate_schema(SchemaId.E2, 50_000)


def test_enumeration_is_a_prefix_in_the_budget():
    small = enumerate_schema(SchemaId.E4, 2_000)
    large = enumerate_schema(SchemaId.E4, 5_000)

    assert small
    assert large[: len(small)] == small


def test_recognizers():
    assert is_instance(SchemaId.E1, parse("K(0=0 -> 0=0)"), 10_000) is TRUE
    assert is_instance(SchemaId.E3, parse("forall x (K(x=x) -> x=x)"), 1_000) is TRUE
    assert is_instance(SchemaId.E4, parse("K(0=0) -> K(K(0=0))"), 1_000) is TRUE
    assert is_instance(SchemaId.E3, parse("K(x=x) -> x=x"), 1_000) is FALSE


@pytest.mark.parametrize("schema_id", list(SchemaId))
def test_bare_equation_is_an_axiom_of_assigned_validity_only(schema_id):
    verdict = is_instance(schema_id, parse("0=0"), 10_000)
    expected = schema_id in (SchemaId.ASSIGNED_VALIDITY, SchemaId.SIGMA)

    assert verdict is (TRUE if expected else FALSE)


def test_exhausted_budget_is_unknown():
    sentence = parse("K(forall x (x=x -> x=x))")

    assert is_instance(SchemaId.E1, sentence, 3) is ThreeValued.UNKNOWN


def test_peano_arithmetic():
    assert PEANO_AXIOMS[2] == parse("forall x x+0=x")
    assert is_instance(SchemaId.PA_L, PEANO_AXIOMS[2], 1_000) is TRUE

    induction = induction_instance(parse("x+0=x"), "x")
    assert is_sentence(induction)
    assert is_instance(SchemaId.PA_L, induction, 1_000) is TRUE
    assert is_instance(SchemaId.PA_L, parse("forall x x+x=x"), 1_000) is FALSE


def test_curried_induction():
    conjunctive = induction_instance(parse("x+0=x"), "x")
    curried = induction_instance(parse("x+0=x"), "x", curried=True)
    base, step = conjunctive.left.left, conjunctive.left.right

    assert curried == Implies(base, Implies(step, conjunctive.right))
    assert is_instance(SchemaId.PA_L, curried, 1_000) is TRUE


def test_self_reference_lines():
    line = sigma_line3(7, parse("x=x"))

    assert is_instance(SchemaId.SIGMA_LINE3, line, 10_000, n=7) is TRUE
    assert is_instance(SchemaId.SIGMA_LINE3, line, 10_000, n=8) is FALSE
    assert is_instance(SchemaId.SIGMA, line, 10_000, n=7) is TRUE
    assert is_instance(SchemaId.SIGMA, Know(line), 10_000, n=7) is TRUE

    with pytest.raises(FreeVariableError):
        sigma_line3(7, parse("x=y"))


def test_own_line_entails_itself():
    line = sigma_line3(7, parse("x=0"))
    found = entails_sigma(7, line, 100_000)

    assert found is not None
    assert found.support == (line,)


def test_strong_self_knowledge_schema():
    x, e = Var("x"), Var("e")
    instance = reinhardt_instance(parse("x=x"))

    assert instance == Exists(
        "e", Know(Forall("x", Iff(parse("K(x=x)"), membership_formula_for(x, e))))
    )
    assert reinhardt_instance(parse("x=x"), known=True) == Know(instance)
    assert is_sentence(reinhardt_instance(parse("0=0")))
    assert is_instance(SchemaId.REINHARDT_SCHEMA, instance, 1_000) is TRUE

    with pytest.raises(FreeVariableError):
        reinhardt_instance(parse("x=y"))


def test_factivity_stays_out_of_the_closure():
    known_e3 = Know(e3_instance(parse("x=x")))

    assert is_instance(SchemaId.KNOWLEDGE_AXIOMS, known_e3, 10_000) is TRUE
    assert is_instance(SchemaId.KNOWLEDGE_MOD_FACTIVITY, known_e3, 10_000) is not TRUE
    assert is_instance(SchemaId.K_CLOSURE, known_e3, 10_000) is not TRUE
    assert is_instance(SchemaId.K_CLOSURE, Know(PEANO_AXIOMS[0]), 1_000) is TRUE
    assert is_instance(SchemaId.K_CLOSURE, PEANO_AXIOMS[0], 1_000) is FALSE


def test_generators_agree_with_recognizers():
    for schema_id in (SchemaId.E2, SchemaId.E3, SchemaId.E4, SchemaId.PA_L):
        emitted = enumerate_schema(schema_id, 5_000)[:20]

        assert emitted
        assert all(is_instance(schema_id, s, 10_000) is TRUE for s in emitted)


def test_unknown_schema():
    with pytest.raises(UnknownSchemaError, match="did you mean"):
        schema("E5")
