import pytest
from conftest import formulas
from hypothesis import given
from hypothesis import strategies as st

from knowing.coding import (
    decode,
    encode,
    name_index,
    name_of_index,
    pack,
    pair,
    unpack,
    unpair,
)
from knowing.exceptions import NotACodeError
from knowing.parser import parse


def test_pair_values():
    assert pair(1, 2) == 8
    assert pair(2, 1) == 7
    assert [pair(i, i) for i in range(5)] == [0, 4, 12, 24, 40]


def test_pair_is_a_bijection_on_a_prefix():
    pairs = [unpair(k) for k in range(1000)]

    assert len(set(pairs)) == 1000
    assert all(pair(a, b) == k for k, (a, b) in enumerate(pairs))


@given(st.integers(0, 10**30), st.integers(0, 10**30))
def test_unpair_inverts_pair(a, b):
    assert unpair(pair(a, b)) == (a, b)


def test_godel_number_of_zero_equals_zero():
    assert encode(parse("0=0")) == 14984
    assert encode(parse("0=0")) != encode(parse("K(0=0)"))


@given(formulas)
def test_decode_inverts_encode(formula):
    assert decode(encode(formula)) == formula


def test_word_packing():
    assert unpack(pack([])) == []
    assert unpack(pack([5, 0, 1, 1000])) == [5, 0, 1, 1000]


def test_names():
    assert [name_of_index(name_index(n)) for n in ("x", "x0", "_b1")] == [
        "x",
        "x0",
        "_b1",
    ]


@pytest.mark.parametrize("code", [0, 1, 2, encode(parse("0=0")) * 2])
def test_not_a_code(code):
    with pytest.raises(NotACodeError):
        decode(code)
