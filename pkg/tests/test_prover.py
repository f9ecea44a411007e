from dataclasses import replace

import pytest
from conftest import assignments, formulas
from hypothesis import given, settings
from hypothesis import strategies as st

from knowing.exceptions import ProofFormatError
from knowing.formula import Know, ground
from knowing.logic.proof import Proof, check_proof, deserialize, serialize
from knowing.logic.prover import entails, enumerate_theorems, prove_valid
from knowing.parser import parse
from knowing.schemata import AxiomSet, e2_instance


def test_tautology_has_a_proof():
    formula = parse("x=0 -> x=0")
    proof = prove_valid(formula, 10_000)

    assert proof is not None
    assert check_proof(proof, formula)


@pytest.mark.slow
def test_equality_congruence_under_knowledge():
    formula = parse("x=y -> (K(z=x) <-> K(z=y))")
    proof = prove_valid(formula, 1_000_000)

    assert proof is not None
    assert check_proof(proof, formula)


def test_ground_instance_is_not_valid():
    assert prove_valid(parse("forall x K(x=x) -> K(S(0)=S(0))"), 10_000) is None


def test_checker_rejects_other_formulas():
    proof = prove_valid(parse("x=0 -> x=0"), 10_000)
    result = check_proof(proof, parse("y=0 -> y=0"))

    assert not result
    assert result.reason


def test_checker_rejects_forward_references():
    proof = prove_valid(parse("x=0 -> x=0"), 10_000)
    last = len(proof.steps) - 1
    steps = proof.steps[:-1] + [replace(proof.steps[-1], premises=(last,))]
    result = check_proof(Proof(steps, proof.atoms), parse("x=0 -> x=0"))

    assert not result
    assert result.bad_step == last


def test_serialized_proofs_check():
    formula = parse("K(x=0) -> K(x=0) | x=S(0)")
    proof = prove_valid(formula, 10_000)
    text = serialize(proof)

    assert text.startswith("# knowing-proof v1 godel-v1\n")
    assert check_proof(deserialize(text), formula)


def test_malformed_proof_text():
    with pytest.raises(ProofFormatError):
        deserialize("not a proof\n")


def test_axioms_entail_themselves():
    axiom = parse("K(0=0)")
    result = entails(AxiomSet.finite(0, "single", [axiom]), axiom, 10_000)

    assert result is not None
    assert result.support == (axiom,)
    assert check_proof(result.proof, result.chain)


def test_distribution_detaches_knowledge():
    first, second = parse("0=0"), parse("S(0)=S(0)")
    premises = [parse("K(0=0 -> S(0)=S(0))"), Know(first)]
    axioms = AxiomSet.finite(1, "e2", [*premises, e2_instance(first, second)])
    result = entails(axioms, Know(second), 100_000)

    assert result is not None
    assert set(result.support) <= {*premises, e2_instance(first, second)}
    assert check_proof(result.proof, result.chain)

    # Without distribution the premises say nothing about K(S(0)=S(0))
    assert entails(AxiomSet.finite(2, "bare", premises), Know(second), 10_000) is None


def test_theorems_include_modus_ponens_conclusions():
    axioms = AxiomSet.finite(3, "mp", [parse("0=0 -> K(0=0)"), parse("0=0")])

    assert parse("K(0=0)") in enumerate_theorems(axioms, 200_000)


def test_theorems_of_logic_are_valid():
    theorems = enumerate_theorems(None, 20_000)

    assert parse("0=0") in theorems
    assert parse("0=S(0)") not in theorems


SAMPLE = AxiomSet.finite(
    4, "sample", [parse("K(0=0)"), parse("0=0 -> K(S(0)=0)"), parse("S(0)=S(0)")]
)


@settings(max_examples=50, deadline=None)
@given(formulas, st.sampled_from([250, 1_000, 4_000]))
def test_proofs_survive_doubled_budgets(formula, budget):
    if prove_valid(formula, budget) is not None:
        assert prove_valid(formula, 2 * budget) is not None


@settings(max_examples=50, deadline=None)
@given(formulas, assignments, st.sampled_from([250, 1_000, 4_000]))
def test_entailments_survive_doubled_budgets(formula, assignment, budget):
    goal = ground(formula, assignment)

    if entails(SAMPLE, goal, budget) is not None:
        assert entails(SAMPLE, goal, 2 * budget) is not None


@pytest.mark.parametrize("budget", [2_000, 4_000, 8_000])
def test_theorems_grow_with_budget(budget):
    assert enumerate_theorems(SAMPLE, budget) <= enumerate_theorems(SAMPLE, 2 * budget)
