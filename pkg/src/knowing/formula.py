"""Abstract syntax for the language of arithmetic with a knowledge operator.

Terms are built from variables, numerals, successor, sum and product. Formulas are
built from equalities with the usual connectives, the two quantifiers and the modal
operator K. `Pred` atoms never come out of the parser's user grammar; they are the
predicate symbols of first-order translations.

Every node is an immutable, hashable dataclass. A numeral is a single `Num` node:
wrapping a numeral in `S(...)` through `succ` folds it, so the k-fold successor of zero
and `Num(k)` are the same tree.

Attributes:
    SUGAR_LIMIT (int): Largest numeral printed as an `S(...)` chain.
    SLOT_PREFIX (str): Prefix of the slot variables in pattern skeletons.
    BOUND_PREFIX (str): Prefix of canonical bound variables in pattern skeletons.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping

from knowing.exceptions import CaptureError, NotPurelyModalError


#######################################################################################
# CONSTANTS


# Numerals up to this value print as S-chains, larger ones as decimals
SUGAR_LIMIT = 8

# Reserved name prefixes; the user grammar never produces a name starting with "_"
SLOT_PREFIX = "_"
BOUND_PREFIX = "_b"


#######################################################################################
# TERMS


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Succ:
    arg: Term


@dataclass(frozen=True)
class Add:
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul:
    left: Term
    right: Term


Term = Var | Num | Succ | Add | Mul


ZERO = Num(0)


def numeral(value: int) -> Num:
    """Return the numeral denoting `value`."""
    if value < 0:
        raise ValueError(f"numerals denote naturals, got {value}")

    return Num(value)


def succ(term: Term) -> Term:
    """Return S(term), folding numerals."""
    if isinstance(term, Num):
        return Num(term.value + 1)

    return Succ(term)


#######################################################################################
# FORMULAS


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Pred:
    atom: int
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Not:
    body: Formula


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall:
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula


@dataclass(frozen=True)
class Know:
    body: Formula


Formula = Eq | Pred | Not | Implies | And | Or | Iff | Forall | Exists | Know

Binary = Implies | And | Or | Iff
Quantifier = Forall | Exists

BINARY_TYPES: tuple[type, ...] = (Implies, And, Or, Iff)
QUANTIFIER_TYPES: tuple[type, ...] = (Forall, Exists)


@dataclass(frozen=True)
class PatternAtom:
    """A purely modal formula with its free occurrences abstracted into slots.

    Attributes:
        skeleton (Formula): The formula with bound variables renamed `_b0, _b1, ...` in
            binder order and the i-th free occurrence replaced by the slot `_i`.
        arity (int): Number of free occurrences, which is the number of slots.
    """

    skeleton: Formula
    arity: int


#######################################################################################
# ASSIGNMENTS


@dataclass(frozen=True)
class Assignment:
    """A total map from variables to naturals.

    Attributes:
        bindings (Mapping[str, int]): Explicitly assigned variables.
        default (int): Value of every variable not in `bindings`.
    """

    bindings: Mapping[str, int] = field(default_factory=dict)
    default: int = 0

    def __call__(self, name: str) -> int:
        return self.bindings.get(name, self.default)

    def override(self, name: str, value: int) -> Assignment:
        """Return s(name|value)."""
        return Assignment({**self.bindings, name: value}, self.default)


#######################################################################################
# TRAVERSAL


def term_vars(term: Term) -> frozenset[str]:
    match term:
        case Var(name):
            return frozenset((name,))
        case Num():
            return frozenset()
        case Succ(arg):
            return term_vars(arg)
        case Add(left, right) | Mul(left, right):
            return term_vars(left) | term_vars(right)

    raise TypeError(f"not a term: {term!r}")


@lru_cache(maxsize=1 << 16)
def free_vars(formula: Formula) -> frozenset[str]:
    """Return FV(formula). K binds nothing."""
    match formula:
        case Eq(left, right):
            return term_vars(left) | term_vars(right)
        case Pred(_, args):
            return frozenset().union(*(term_vars(arg) for arg in args))
        case Not(body) | Know(body):
            return free_vars(body)
        case Implies(left, right) | And(left, right) | Or(left, right) | Iff(
            left, right
        ):
            return free_vars(left) | free_vars(right)
        case Forall(var, body) | Exists(var, body):
            return free_vars(body) - {var}

    raise TypeError(f"not a formula: {formula!r}")


def is_sentence(formula: Formula) -> bool:
    return not free_vars(formula)


def _term_occurrences(term: Term, bound: frozenset[str]) -> Iterator[str]:
    match term:
        case Var(name):
            if name not in bound:
                yield name
        case Succ(arg):
            yield from _term_occurrences(arg, bound)
        case Add(left, right) | Mul(left, right):
            yield from _term_occurrences(left, bound)
            yield from _term_occurrences(right, bound)


def _occurrences(formula: Formula, bound: frozenset[str]) -> Iterator[str]:
    match formula:
        case Eq(left, right):
            yield from _term_occurrences(left, bound)
            yield from _term_occurrences(right, bound)
        case Pred(_, args):
            for arg in args:
                yield from _term_occurrences(arg, bound)
        case Not(body) | Know(body):
            yield from _occurrences(body, bound)
        case Implies(left, right) | And(left, right) | Or(left, right) | Iff(
            left, right
        ):
            yield from _occurrences(left, bound)
            yield from _occurrences(right, bound)
        case Forall(var, body) | Exists(var, body):
            yield from _occurrences(body, bound | {var})


def free_occurrences(formula: Formula) -> list[str]:
    """Return the free variable occurrences of `formula`, left to right."""
    return list(_occurrences(formula, frozenset()))


def first_occurrence_order(formula: Formula) -> list[str]:
    """Return FV(formula) ordered by first free occurrence."""
    return list(dict.fromkeys(free_occurrences(formula)))


def closed_subterms(formula: Formula) -> set[Term]:
    """Return every subterm of `formula` that contains no variables."""
    found: set[Term] = set()

    def visit_term(term: Term) -> None:
        if not term_vars(term):
            found.add(term)

        match term:
            case Succ(arg):
                visit_term(arg)
            case Add(left, right) | Mul(left, right):
                visit_term(left)
                visit_term(right)

    for term in terms_of(formula):
        visit_term(term)

    return found


def terms_of(formula: Formula) -> Iterator[Term]:
    """Yield the maximal terms of `formula` (arguments of its atoms), left to right."""
    match formula:
        case Eq(left, right):
            yield left
            yield right
        case Pred(_, args):
            yield from args
        case Not(body) | Know(body) | Forall(_, body) | Exists(_, body):
            yield from terms_of(body)
        case Implies(left, right) | And(left, right) | Or(left, right) | Iff(
            left, right
        ):
            yield from terms_of(left)
            yield from terms_of(right)


def term_size(term: Term) -> int:
    match term:
        case Var():
            return 1
        case Num(value):
            return value + 1
        case Succ(arg):
            return 1 + term_size(arg)
        case Add(left, right) | Mul(left, right):
            return 1 + term_size(left) + term_size(right)

    raise TypeError(f"not a term: {term!r}")


def size(formula: Formula) -> int:
    """Return the node count of `formula`, counting `Num(k)` as k+1 nodes."""
    match formula:
        case Eq(left, right):
            return 1 + term_size(left) + term_size(right)
        case Pred(_, args):
            return 1 + sum(term_size(arg) for arg in args)
        case Not(body) | Know(body) | Forall(_, body) | Exists(_, body):
            return 1 + size(body)
        case Implies(left, right) | And(left, right) | Or(left, right) | Iff(
            left, right
        ):
            return 1 + size(left) + size(right)

    raise TypeError(f"not a formula: {formula!r}")


def _term_weight(term: Term) -> int:
    match term:
        case Num(value):
            return 1 + value.bit_length() // 64
        case Succ(arg):
            return 1 + _term_weight(arg)
        case Add(left, right) | Mul(left, right):
            return 1 + _term_weight(left) + _term_weight(right)

    return 1


def weight(formula: Formula) -> int:
    """Return `size` with each numeral charged one node per 64 bits.

    Budgets charge sentences by weight.
    """
    match formula:
        case Eq(left, right):
            return 1 + _term_weight(left) + _term_weight(right)
        case Pred(_, args):
            return 1 + sum(_term_weight(arg) for arg in args)
        case Not(body) | Know(body) | Forall(_, body) | Exists(_, body):
            return 1 + weight(body)
        case Implies(left, right) | And(left, right) | Or(left, right) | Iff(
            left, right
        ):
            return 1 + weight(left) + weight(right)

    raise TypeError(f"not a formula: {formula!r}")


def map_binary(formula: Formula, function: Callable[[Formula], Formula]) -> Formula:
    """Rebuild a binary or unary connective with `function` applied to its parts."""
    match formula:
        case Not(body):
            return Not(function(body))
        case Know(body):
            return Know(function(body))
        case Implies(left, right):
            return Implies(function(left), function(right))
        case And(left, right):
            return And(function(left), function(right))
        case Or(left, right):
            return Or(function(left), function(right))
        case Iff(left, right):
            return Iff(function(left), function(right))

    raise TypeError(f"not a connective: {formula!r}")


#######################################################################################
# SUBSTITUTION AND GROUNDING


def substitute_term(term: Term, mapping: Mapping[str, Term]) -> Term:
    match term:
        case Var(name):
            return mapping.get(name, term)
        case Num():
            return term
        case Succ(arg):
            return succ(substitute_term(arg, mapping))
        case Add(left, right):
            return Add(substitute_term(left, mapping), substitute_term(right, mapping))
        case Mul(left, right):
            return Mul(substitute_term(left, mapping), substitute_term(right, mapping))

    raise TypeError(f"not a term: {term!r}")


def instantiate(formula: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneously replace free variables by terms.

    Raises:
        CaptureError: If a binder would capture a variable of a substituted term.
    """
    live = {var: term for var, term in mapping.items() if var in free_vars(formula)}

    if not live:
        return formula

    match formula:
        case Eq(left, right):
            return Eq(substitute_term(left, live), substitute_term(right, live))
        case Pred(atom, args):
            return Pred(atom, tuple(substitute_term(arg, live) for arg in args))
        case Forall(var, body) | Exists(var, body):
            for name, term in live.items():
                if var in term_vars(term):
                    raise CaptureError(name, var, show_term(term))

            return type(formula)(var, instantiate(body, live))

    return map_binary(formula, lambda part: instantiate(part, live))


def subst(formula: Formula, var: str, term: Term) -> Formula:
    """Return formula(var|term).

    Raises:
        CaptureError: If `term` is not substitutable for `var` in `formula`.
    """
    return instantiate(formula, {var: term})


def ground(formula: Formula, assignment: Assignment) -> Formula:
    """Replace each free variable by the numeral of its value under `assignment`."""
    return instantiate(
        formula, {var: Num(assignment(var)) for var in free_vars(formula)}
    )


def universal_closure(formula: Formula) -> Formula:
    """Bind the free variables of `formula`, first occurrence outermost."""
    for var in reversed(first_occurrence_order(formula)):
        formula = Forall(var, formula)

    return formula


def closure_bodies(sentence: Formula) -> list[Formula]:
    """Return every body whose universal closure is `sentence`, most peeled first.

    A body may itself start with a universal quantifier, so one sentence can be the
    closure of several bodies.
    """
    bodies = []
    peeled: list[str] = []
    candidate = sentence

    while True:
        if first_occurrence_order(candidate) == peeled:
            bodies.append(candidate)

        if not isinstance(candidate, Forall):
            break

        peeled.append(candidate.var)
        candidate = candidate.body

    return bodies[::-1]


def k_power(formula: Formula, depth: int) -> Formula:
    for _ in range(depth):
        formula = Know(formula)

    return formula


def peel_know(formula: Formula) -> tuple[int, Formula]:
    """Return the number of leading K's and the formula beneath them."""
    depth = 0

    while isinstance(formula, Know):
        depth += 1
        formula = formula.body

    return depth, formula


def implication_chain(premises: Iterable[Formula], conclusion: Formula) -> Formula:
    """Return p1 -> (p2 -> ... -> conclusion)."""
    for premise in reversed(list(premises)):
        conclusion = Implies(premise, conclusion)

    return conclusion


#######################################################################################
# ALPHABETIC VARIANCE AND PATTERNS


def _alpha_term(a: Term, b: Term, env_a: dict, env_b: dict) -> bool:
    match a, b:
        case Var(x), Var(y):
            bound_x, bound_y = env_a.get(x), env_b.get(y)

            if bound_x is None and bound_y is None:
                return x == y

            return bound_x == bound_y
        case Num(x), Num(y):
            return x == y
        case Succ(x), Succ(y):
            return _alpha_term(x, y, env_a, env_b)
        case (Add(l1, r1), Add(l2, r2)) | (Mul(l1, r1), Mul(l2, r2)):
            return _alpha_term(l1, l2, env_a, env_b) and _alpha_term(
                r1, r2, env_a, env_b
            )

    return False


def _alpha(a: Formula, b: Formula, env_a: dict, env_b: dict, depth: int) -> bool:
    if type(a) is not type(b):
        return False

    match a, b:
        case Eq(l1, r1), Eq(l2, r2):
            return _alpha_term(l1, l2, env_a, env_b) and _alpha_term(
                r1, r2, env_a, env_b
            )
        case Pred(p1, args1), Pred(p2, args2):
            return (
                p1 == p2
                and len(args1) == len(args2)
                and all(
                    _alpha_term(x, y, env_a, env_b) for x, y in zip(args1, args2)
                )
            )
        case (Not(x), Not(y)) | (Know(x), Know(y)):
            return _alpha(x, y, env_a, env_b, depth)
        case (Forall(v1, x), Forall(v2, y)) | (Exists(v1, x), Exists(v2, y)):
            return _alpha(x, y, env_a | {v1: depth}, env_b | {v2: depth}, depth + 1)

    return _alpha(a.left, b.left, env_a, env_b, depth) and _alpha(  # type: ignore
        a.right, b.right, env_a, env_b, depth  # type: ignore
    )


def variant_eq(first: Formula, second: Formula) -> bool:
    """Whether `second` is an alphabetic variant of `first`."""
    return _alpha(first, second, {}, {}, 0)


def pattern(kappa: Formula) -> tuple[PatternAtom, list[str]]:
    """Canonicalize a purely modal formula.

    Bound variables are renamed `_b0, _b1, ...` in the order their binders appear and
    the free occurrences are replaced, left to right, by the slots `_1, _2, ...`.

    Args:
        kappa (Formula): A formula of the form K(...).

    Raises:
        NotPurelyModalError: If `kappa` is not a knowledge formula.

    Returns:
        tuple[PatternAtom, list[str]]: The pattern atom and the argument list, one
            variable per free occurrence.
    """
    if not isinstance(kappa, Know):
        raise NotPurelyModalError(show(kappa))

    args: list[str] = []
    binders = itertools.count()

    def term(node: Term, env: dict[str, str]) -> Term:
        match node:
            case Var(name):
                if name in env:
                    return Var(env[name])

                args.append(name)
                return Var(f"{SLOT_PREFIX}{len(args)}")
            case Num():
                return node
            case Succ(arg):
                return Succ(term(arg, env))
            case Add(left, right):
                left_part = term(left, env)
                return Add(left_part, term(right, env))
            case Mul(left, right):
                left_part = term(left, env)
                return Mul(left_part, term(right, env))

        raise TypeError(f"not a term: {node!r}")

    def formula(node: Formula, env: dict[str, str]) -> Formula:
        match node:
            case Eq(left, right):
                left_part = term(left, env)
                return Eq(left_part, term(right, env))
            case Forall(var, body) | Exists(var, body):
                renamed = f"{BOUND_PREFIX}{next(binders)}"
                return type(node)(renamed, formula(body, env | {var: renamed}))
            case Not(body):
                return Not(formula(body, env))
            case Know(body):
                return Know(formula(body, env))
            case Implies(left, right) | And(left, right) | Or(left, right) | Iff(
                left, right
            ):
                left_part = formula(left, env)
                return type(node)(left_part, formula(right, env))

        raise TypeError(f"cannot canonicalize {node!r}")

    skeleton = formula(kappa, {})

    return PatternAtom(skeleton, len(args)), args  # type: ignore[arg-type]


def fill_slots(atom: PatternAtom, values: Iterable[Term]) -> Formula:
    """Replace the slots of a skeleton by terms, in slot order."""
    mapping = {f"{SLOT_PREFIX}{i}": term for i, term in enumerate(values, start=1)}

    return instantiate(atom.skeleton, mapping)


#######################################################################################
# PRINTING


_FORMULA_LEVELS = {Iff: 1, Implies: 2, Or: 3, And: 4}
_TERM_LEVELS = {Add: 1, Mul: 2}


def _term_level(term: Term) -> int:
    return _TERM_LEVELS.get(type(term), 3)  # type: ignore[call-overload]


def _wrap_term(term: Term, level: int) -> str:
    text = show_term(term)
    return f"({text})" if _term_level(term) < level else text


@lru_cache(maxsize=1 << 16)
def show_term(term: Term) -> str:
    """Render a term in canonical text."""
    match term:
        case Var(name):
            return name
        case Num(value):
            if value <= SUGAR_LIMIT:
                return "S(" * value + "0" + ")" * value

            return str(value)
        case Succ(arg):
            return f"S({show_term(arg)})"
        case Add(left, right):
            return f"{_wrap_term(left, 1)}+{_wrap_term(right, 2)}"
        case Mul(left, right):
            return f"{_wrap_term(left, 2)}*{_wrap_term(right, 3)}"

    raise TypeError(f"not a term: {term!r}")


def _level(formula: Formula) -> int:
    return _FORMULA_LEVELS.get(type(formula), 5)  # type: ignore[call-overload]


def _wrap(formula: Formula, level: int) -> str:
    text = show(formula)
    return f"({text})" if _level(formula) < level else text


@lru_cache(maxsize=1 << 16)
def show(formula: Formula) -> str:
    """Render a formula in canonical text; `parse(show(f)) == f`."""
    match formula:
        case Eq(left, right):
            return f"{show_term(left)}={show_term(right)}"
        case Pred(atom, args):
            return f"P{atom}({','.join(show_term(arg) for arg in args)})"
        case Not(body):
            return f"~{_wrap(body, 5)}"
        case Know(body):
            return f"K({show(body)})"
        case Forall(var, body):
            return f"forall {var} {_wrap(body, 5)}"
        case Exists(var, body):
            return f"exists {var} {_wrap(body, 5)}"
        case And(left, right):
            return f"{_wrap(left, 4)} & {_wrap(right, 5)}"
        case Or(left, right):
            return f"{_wrap(left, 3)} | {_wrap(right, 4)}"
        case Implies(left, right):
            return f"{_wrap(left, 3)} -> {_wrap(right, 2)}"
        case Iff(left, right):
            return f"{_wrap(left, 2)} <-> {_wrap(right, 2)}"

    raise TypeError(f"not a formula: {formula!r}")
