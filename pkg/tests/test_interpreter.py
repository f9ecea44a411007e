import pytest

from knowing.coding import encode
from knowing.compmodel.blueprint import (
    Const,
    Emit,
    decode_blueprint,
    encode_blueprint,
    parse_blueprint,
    show_blueprint,
)
from knowing.compmodel.construct import FIRST_SLICE, KNOW, SECOND_SLICE
from knowing.compmodel.interpreter import run, trace
from knowing.exceptions import (
    NotABlueprintError,
    ParseError,
    UnknownPrimitiveError,
    UnknownSymbolError,
)
from knowing.parser import parse


def index_of(text: str) -> int:
    return encode_blueprint(parse_blueprint(text))


def test_constant_emitter():
    assert run(index_of("(emit (const 3))"), 100) == {3}


def test_diagonal_pairs():
    program = index_of("(for 0 (const 5) (emit (pair (ref 0) (ref 0))))")

    assert run(program, 1_000) == {0, 4, 12, 24, 40}


def test_runs_grow_with_the_budget():
    counter = index_of("(loop 0 (emit (ref 0)))")
    small, large = run(counter, 100), run(counter, 1_000)

    assert small < large
    assert trace(counter, 1_000)[: len(small)] == trace(counter, 100)


def test_trace_records_steps():
    program = index_of("(seq (emit (const 1)) (emit (const 1)) (emit input))")
    steps = trace(program, 100, 9)

    assert [value for _, value in steps] == [1, 1, 9]
    assert [step for step, _ in steps] == sorted({step for step, _ in steps})


def test_subprograms():
    successor = index_of("(emit (add input (const 1)))")

    assert run(index_of(f"(emit (apply (const {successor}) (const 5)))"), 100) == {6}
    doubled = f"(each 0 (const {successor}) (const 5) (emit (mul (ref 0) (const 2))))"
    assert run(index_of(doubled), 100) == {12}
    assert run(index_of("(emit (quote (emit (const 1))))"), 100) == {
        encode_blueprint(Emit(Const(1)))
    }


def test_total_arithmetic():
    assert run(index_of("(emit (div (const 7) (const 0)))"), 100) == {0}
    assert run(index_of("(emit (monus (const 2) (const 7)))"), 100) == {0}
    assert run(index_of("(emit (log (const 1024) (const 2)))"), 100) == {10}


def test_primitives():
    first = index_of("(emit (prim formula-code (const 0)))")

    assert run(first, 1_000) == {encode(parse("x=x"))}


def test_unknown_primitive():
    with pytest.raises(UnknownPrimitiveError):
        parse_blueprint("(emit (prim oracle (const 0)))")


@pytest.mark.parametrize("program", [KNOW, FIRST_SLICE, SECOND_SLICE])
def test_text_form_reads_back(program):
    assert parse_blueprint(show_blueprint(program)) == program
    assert decode_blueprint(encode_blueprint(program)) == program


def test_malformed_blueprints():
    with pytest.raises(ParseError):
        parse_blueprint("(const 3)")

    with pytest.raises(UnknownSymbolError):
        parse_blueprint("(frobnicate 1)")

    with pytest.raises(NotABlueprintError):
        run(0, 10)
