"""Numeric codings: the pairing function and Godel numbers.

`pair` is Cantor's diagonal bijection N x N -> N. Godel numbers are built in two
stages: a formula is flattened in preorder into a list of naturals ("words"), and the
word list is packed into one natural. A word w is written as L ones, a zero, and the
low L bits of w+1, where L is one less than the bit length of w+1; the chunks are
concatenated behind a leading 1 bit. The packed size is linear in the size of the
formula, which keeps codes of formulas that mention other codes manageable.

Attributes:
    CODING_VERSION (str): Version pin written into certificates.
    FORMULA_TAGS (dict[type, int]): Constructor tag of each syntax node.
    FIRST_LETTERS (str): Alphabet of the first character of a variable name.
    NEXT_LETTERS (str): Alphabet of the remaining characters.
"""

from math import isqrt
from typing import Iterable, Iterator

from knowing.exceptions import NotACodeError
from knowing.formula import (
    Add,
    And,
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
    Succ,
    Term,
    Var,
)


#######################################################################################
# CODING TABLES


CODING_VERSION = "godel-v1"


FORMULA_TAGS: dict[type, int] = {
    Var: 0,
    Num: 1,
    Succ: 2,
    Add: 3,
    Mul: 4,
    Eq: 5,
    Not: 6,
    Implies: 7,
    And: 8,
    Or: 9,
    Iff: 10,
    Forall: 11,
    Exists: 12,
    Know: 13,
}


_TAG_TYPES = {tag: node_type for node_type, tag in FORMULA_TAGS.items()}


FIRST_LETTERS = "_abcdefghijklmnopqrstuvwxyz"
NEXT_LETTERS = "_0123456789abcdefghijklmnopqrstuvwxyz"


#######################################################################################
# PAIRING


def pair(a: int, b: int) -> int:
    """Return <a, b> = (a+b)(a+b+1)/2 + b."""
    if a < 0 or b < 0:
        raise ValueError(f"pair takes naturals, got ({a}, {b})")

    total = a + b
    return total * (total + 1) // 2 + b


def unpair(n: int) -> tuple[int, int]:
    """Invert `pair`."""
    if n < 0:
        raise ValueError(f"unpair takes a natural, got {n}")

    diagonal = (isqrt(8 * n + 1) - 1) // 2
    b = n - diagonal * (diagonal + 1) // 2
    return diagonal - b, b


#######################################################################################
# WORD PACKING


def chunk(word: int) -> tuple[int, int]:
    """Return the self-delimiting chunk of `word` as (value, bit length)."""
    shifted = word + 1
    length = shifted.bit_length() - 1
    ones = (1 << length) - 1

    return (ones << (length + 1)) | (shifted - (1 << length)), 2 * length + 1


def pack(words: Iterable[int]) -> int:
    """Pack a word list into one natural."""
    code = 1

    for word in words:
        if word < 0:
            raise ValueError(f"words are naturals, got {word}")

        value, length = chunk(word)
        code = (code << length) | value

    return code


def unpack(code: int) -> list[int]:
    """Invert `pack`.

    Raises:
        NotACodeError: If `code` is not the packing of a word list.
    """
    if code < 1:
        raise NotACodeError(code, "packed codes are positive")

    bits = bin(code)[3:]
    words = []
    position = 0

    while position < len(bits):
        length = 0

        while position < len(bits) and bits[position] == "1":
            length += 1
            position += 1

        if position + length >= len(bits):
            raise NotACodeError(code, "truncated word")

        position += 1
        low = bits[position : position + length]
        words.append((1 << length) + (int(low, 2) if low else 0) - 1)
        position += length

    return words


#######################################################################################
# VARIABLE NAMES


def name_index(name: str) -> int:
    """Return the position of `name` in the shortlex order of variable names."""
    if not name or name[0] not in FIRST_LETTERS:
        raise ValueError(f"'{name}' is not a variable name")

    offset = 0
    block = len(FIRST_LETTERS)

    for _ in range(len(name) - 1):
        offset += block
        block *= len(NEXT_LETTERS)

    value = FIRST_LETTERS.index(name[0])

    for character in name[1:]:
        if character not in NEXT_LETTERS:
            raise ValueError(f"'{name}' is not a variable name")

        value = value * len(NEXT_LETTERS) + NEXT_LETTERS.index(character)

    return offset + value


def name_of_index(index: int) -> str:
    """Invert `name_index`."""
    length = 1
    block = len(FIRST_LETTERS)

    while index >= block:
        index -= block
        block *= len(NEXT_LETTERS)
        length += 1

    characters = []

    for _ in range(length - 1):
        index, digit = divmod(index, len(NEXT_LETTERS))
        characters.append(NEXT_LETTERS[digit])

    characters.append(FIRST_LETTERS[index])

    return "".join(reversed(characters))


#######################################################################################
# GODEL NUMBERS


def _words(node: Formula | Term) -> Iterator[int]:
    tag = FORMULA_TAGS.get(type(node))

    if tag is None:
        raise TypeError(f"{type(node).__name__} nodes have no Godel number")

    yield tag

    match node:
        case Var(name):
            yield name_index(name)
        case Num(value):
            yield value
        case Succ(arg):
            yield from _words(arg)
        case Forall(var, body) | Exists(var, body):
            yield name_index(var)
            yield from _words(body)
        case Not(body) | Know(body):
            yield from _words(body)
        case _:
            yield from _words(node.left)  # type: ignore[union-attr]
            yield from _words(node.right)  # type: ignore[union-attr]


def encode(formula: Formula) -> int:
    """Return the Godel number of a formula of the language."""
    return pack(_words(formula))


def encode_term(term: Term) -> int:
    return pack(_words(term))


_TERM_TAGS = frozenset(FORMULA_TAGS[t] for t in (Var, Num, Succ, Add, Mul))


def _read(words: list[int], position: int, code: int, want_term: bool):
    if position >= len(words):
        raise NotACodeError(code, "word list ends inside a node")

    tag = words[position]
    node_type = _TAG_TYPES.get(tag)

    if node_type is None:
        raise NotACodeError(code, f"unknown tag {tag}")

    if (tag in _TERM_TAGS) != want_term:
        expected = "term" if want_term else "formula"
        raise NotACodeError(code, f"tag {tag} where a {expected} was expected")

    position += 1

    if node_type in (Var, Num, Forall, Exists) and position >= len(words):
        raise NotACodeError(code, "word list ends inside a node")

    if node_type is Var:
        return Var(name_of_index(words[position])), position + 1

    if node_type is Num:
        return Num(words[position]), position + 1

    if node_type is Succ:
        arg, position = _read(words, position, code, True)

        if isinstance(arg, Num):
            raise NotACodeError(code, "successor of a numeral is not canonical")

        return Succ(arg), position

    if node_type in (Forall, Exists):
        var = name_of_index(words[position])
        body, position = _read(words, position + 1, code, False)
        return node_type(var, body), position

    if node_type in (Not, Know):
        body, position = _read(words, position, code, False)
        return node_type(body), position

    operands_are_terms = node_type in (Add, Mul, Eq)
    left, position = _read(words, position, code, operands_are_terms)
    right, position = _read(words, position, code, operands_are_terms)

    return node_type(left, right), position


def decode(code: int) -> Formula:
    """Invert `encode`.

    Raises:
        NotACodeError: If `code` is not the Godel number of a formula.
    """
    words = unpack(code)
    formula, position = _read(words, 0, code, False)

    if position != len(words):
        raise NotACodeError(code, "trailing words after the formula")

    return formula
