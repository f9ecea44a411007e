import pytest
from conftest import formulas
from hypothesis import given

from knowing.exceptions import ParseError, UnknownSymbolError
from knowing.formula import (
    Eq,
    Forall,
    Implies,
    Know,
    Num,
    Pred,
    Var,
    show,
)
from knowing.parser import parse, parse_term


X = Var("x")


def test_numerals():
    assert parse("S(S(0)) = 0") == Eq(Num(2), Num(0))
    assert parse("2 = S(S(0))") == Eq(Num(2), Num(2))
    assert parse_term("S(x)+0*y") == parse_term("S(x) + (0 * y)")


def test_quantifier_bodies_are_unary():
    formula = parse("forall x K(x=x) -> K(S(0)=S(0))")

    assert formula == Implies(Forall("x", Know(Eq(X, X))), Know(Eq(Num(1), Num(1))))


def test_implication_is_right_associative():
    first, second, third = (parse(text) for text in ("x=0", "y=0", "z=0"))

    assert parse("x=0 -> y=0 -> z=0") == Implies(first, Implies(second, third))


def test_canonical_printing():
    assert show(parse("K( 0 = 0 )")) == "K(0=0)"
    assert show(parse("(x=0 -> y=0) -> z=0")) == "(x=0 -> y=0) -> z=0"
    assert show(parse("~(x=0 & y=0)")) == "~(x=0 & y=0)"


@given(formulas)
def test_printing_parses_back(formula):
    assert parse(show(formula)) == formula


def test_reserved_names():
    with pytest.raises(UnknownSymbolError):
        parse("_1=0")

    assert parse("_1=0", internal=True) == Eq(Var("_1"), Num(0))
    assert parse("P0(x, 0)", internal=True) == Pred(0, (X, Num(0)))


def test_malformed_text():
    with pytest.raises(ParseError):
        parse("x = ")

    with pytest.raises(ParseError):
        parse("x=0 <-> y=0 <-> z=0")

    with pytest.raises(UnknownSymbolError):
        parse("x # y")
