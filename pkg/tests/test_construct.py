import pytest

from knowing.compmodel.arith import match_membership, membership_formula_for
from knowing.compmodel.blueprint import (
    Input,
    decode_blueprint,
    encode_blueprint,
    parse_blueprint,
)
from knowing.compmodel.construct import (
    apply_transformer,
    compile_knowledge_enumerator,
    constant_transformer,
    first_slice,
    fixpoint,
    knowledge_transformer,
    overhead,
    quine_transformer,
    random_transformer,
    second_slice,
    slice_overhead,
    smn,
    smn_expr,
    transformer,
)
from knowing.compmodel.interpreter import run
from knowing.exceptions import NotABlueprintError
from knowing.formula import Num


def index_of(text: str) -> int:
    return encode_blueprint(parse_blueprint(text))


FIRST_ARGUMENT = index_of("(emit (left input))")


def test_smn_fixes_the_first_argument():
    fixed = smn(FIRST_ARGUMENT, 9)

    assert run(fixed, 100) == {9}
    assert fixed == smn(FIRST_ARGUMENT, 9)

    with pytest.raises(NotABlueprintError):
        smn(0, 9)


def test_smn_inside_blueprints():
    """A blueprint computes the same s-m-n indices arithmetically."""
    computes_smn = transformer(smn_expr(Input(), Input()))

    for value in (FIRST_ARGUMENT, index_of("(emit (const 123456789))")):
        assert apply_transformer(computes_smn, value) == smn(value, value)


def test_quine():
    n = fixpoint(quine_transformer())

    assert run(n, overhead(1_000)) == {n}


def test_constant_transformer():
    constant = index_of("(seq (emit (const 1)) (emit (const 2)))")
    n = fixpoint(constant_transformer(constant))

    assert run(n, overhead(100)) == run(constant, 100) == {1, 2}


@pytest.mark.parametrize("seed", range(6))
def test_random_transformers(seed):
    """The fixed point n and f(n) emit the same values, up to the overhead budget."""
    transformer_index = random_transformer(seed)
    n = fixpoint(transformer_index)
    image = apply_transformer(transformer_index, n)
    emitted = run(n, overhead(200))

    assert run(image, 200) <= emitted
    assert emitted <= run(image, overhead(200))
    assert emitted


@pytest.mark.parametrize("n", [0, 1, 10**6])
def test_knowledge_enumerator_is_total(n):
    enumerator = compile_knowledge_enumerator(n)

    assert decode_blueprint(enumerator) is not None
    assert apply_transformer(knowledge_transformer(), n) == enumerator


def test_slices():
    emitter = index_of(
        "(seq (emit (pair (const 0) (const 5)))"
        " (emit (pair (const 1) (const 6)))"
        " (emit (pair (const 0) (const 7))))"
    )

    assert run(first_slice(emitter, 0), slice_overhead(100)) == {5, 7}
    assert run(first_slice(emitter, 2), slice_overhead(100)) == set()
    assert run(second_slice(emitter, 6), slice_overhead(100)) == {1}


def test_membership_templates_match():
    formula = membership_formula_for(Num(3), Num(FIRST_ARGUMENT))

    assert match_membership(formula) == (Num(3), Num(FIRST_ARGUMENT))
