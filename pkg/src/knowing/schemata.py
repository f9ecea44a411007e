"""Axiom families of epistemic arithmetic and the self-referential family sigma(n).

Each family is an `AxiomSet`: a cursor that enumerates its sentences fairly under a
budget, and a recognizer that answers membership in three values. Syntactic families
are recognized exactly. The families built on validity, E1 and assigned validity, are
only semidecidable: their recognizers answer TRUE once a validity proof turns up and
UNKNOWN otherwise, never FALSE for a sentence of the right shape.

Universal closures bind free variables in first-occurrence order, so a recognizer can
peel a closure back to the body it was built from.

sigma(n) consists of E1, E2, E4, the axioms of arithmetic, the self-reference lines
`forall x (K phi <-> <x, code(phi)> in W_n)` for FV(phi) within {x}, assigned
validity, and K of anything in sigma(n).

Attributes:
    VALIDITY_CAP (int): Most steps a recognizer spends on one validity proof.
    PEANO_AXIOMS (tuple[Formula, ...]): The axioms of arithmetic besides induction.
    REINHARDT_VAR (str): Name of the index variable of the strong schema.
"""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from knowing.budget import Budget, BudgetExhausted, as_budget
from knowing.coding import encode, pair, unpair
from knowing.compmodel.arith import (
    match_membership,
    match_pair_membership,
    membership_formula_for,
    pair_membership_for,
)
from knowing.exceptions import CaptureError, FreeVariableError, UnknownSchemaError
from knowing.formula import (
    ZERO,
    Add,
    And,
    Assignment,
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
    Var,
    closure_bodies,
    implication_chain,
    first_occurrence_order,
    free_vars,
    ground,
    is_sentence,
    k_power,
    peel_know,
    show,
    weight,
    subst,
    succ,
    universal_closure,
)
from knowing.logic.prover import (
    DOVETAIL_K,
    THEOREM_BASE,
    Entailment,
    entails,
    prove_valid,
)
from knowing.logic.semantics import ThreeValued
from knowing.streams import StreamIndex, formula_index


log = logging.getLogger(__name__)


VALIDITY_CAP = 1 << 17

REINHARDT_VAR = "e"

_X_ONLY = frozenset({"x"})

_X, _Y = Var("x"), Var("y")

PEANO_AXIOMS: tuple[Formula, ...] = (
    Forall("x", Not(Eq(succ(_X), ZERO))),
    Forall("x", Forall("y", Implies(Eq(succ(_X), succ(_Y)), Eq(_X, _Y)))),
    Forall("x", Eq(Add(_X, ZERO), _X)),
    Forall("x", Forall("y", Eq(Add(_X, succ(_Y)), succ(Add(_X, _Y))))),
    Forall("x", Eq(Mul(_X, ZERO), ZERO)),
    Forall("x", Forall("y", Eq(Mul(_X, succ(_Y)), Add(Mul(_X, _Y), _X)))),
)


class SchemaId(str, enum.Enum):
    """Names of the axiom families."""

    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E4 = "E4"
    PA_L = "PA"
    ASSIGNED_VALIDITY = "assigned-validity"
    PRE_CLOSURE = "pre-closure"
    KNOWLEDGE_AXIOMS = "knowledge"
    KNOWLEDGE_MOD_FACTIVITY = "knowledge-mod-factivity"
    EPISTEMIC_ARITHMETIC = "epistemic-arithmetic"
    EPISTEMIC_ARITHMETIC_MOD_FACTIVITY = "epistemic-arithmetic-mod-factivity"
    REINHARDT_SCHEMA = "reinhardt"
    SIGMA_LINE3 = "sigma-line3"
    K_CLOSURE = "k-closure"
    SIGMA = "sigma"

    @property
    def ordinal(self) -> int:
        return list(SchemaId).index(self)


Generator = Callable[[Budget], Iterator[Formula]]
Recognizer = Callable[[Formula, Budget], ThreeValued]


@dataclass(frozen=True)
class AxiomSet:
    """A family of sentences given by a budgeted generator and recognizer.

    Attributes:
        identity (int): <ordinal of the schema, parameter>.
        name (str): Schema name, with its parameter if it has one.
        generator (Generator): Fair, deterministic stream of the family's sentences.
        recognizer (Recognizer): Membership test; TRUE only for members.
        exact (bool): Whether the recognizer never answers UNKNOWN.
    """

    identity: int
    name: str
    generator: Generator = field(repr=False)
    recognizer: Recognizer = field(repr=False)
    exact: bool = True

    def cursor(self, budget: Budget) -> Iterator[Formula]:
        """Yield each sentence of the family once, charging `budget` per sentence."""
        seen: set[Formula] = set()

        for sentence in self.generator(budget):
            budget.tick(weight(sentence))

            if sentence not in seen:
                seen.add(sentence)
                yield sentence

    def recognize(self, sentence: Formula, budget: Budget) -> ThreeValued:
        budget.tick(weight(sentence))

        if not is_sentence(sentence):
            return ThreeValued.FALSE

        return self.recognizer(sentence, budget)

    @classmethod
    def finite(cls, identity: int, name: str, sentences: Iterable[Formula]) -> AxiomSet:
        members = tuple(sentences)
        lookup = frozenset(members)

        return cls(
            identity,
            name,
            lambda budget: iter(members),
            lambda sentence, budget: ThreeValued.of(sentence in lookup),
        )


#######################################################################################
# HELPERS


def check_x_only(formula: Formula) -> None:
    """Raise FreeVariableError unless FV(formula) lies within {x}."""
    free = free_vars(formula)

    if not free <= _X_ONLY:
        raise FreeVariableError(show(formula), free, _X_ONLY)


def _any(verdicts: Iterable[ThreeValued]) -> ThreeValued:
    result = ThreeValued.FALSE

    for verdict in verdicts:
        if verdict is ThreeValued.TRUE:
            return verdict
        result = result | verdict

    return result


def _validity(formula: Formula, budget: Budget) -> ThreeValued:
    # At most half of what is left
    cap = min(VALIDITY_CAP, max(budget.remaining // 2, 1))

    if prove_valid(formula, budget.child(cap)) is not None:
        return ThreeValued.TRUE

    return ThreeValued.UNKNOWN


def _valid_formulas(budget: Budget) -> Iterator[Formula]:
    """Yield every valid formula once, in order of discovery.

    Stage t gives formula j an attempt of `THEOREM_BASE * (t - j + 1)` steps.
    """
    formulas = formula_index()
    found: set[int] = set()

    for stage in itertools.count():
        for position in range(stage + 1):
            if position in found:
                continue

            attempt = budget.child(THEOREM_BASE * (stage - position + 1))

            if prove_valid(formulas[position], attempt) is not None:
                found.add(position)
                yield formulas[position]


def _assignment(formula: Formula, index: int) -> Assignment:
    """Decode `index` into values for FV(formula) in first-occurrence order."""
    names = first_occurrence_order(formula)
    values = {}

    for name in names[:-1]:
        values[name], index = unpair(index)

    if names:
        values[names[-1]] = index

    return Assignment(values)


def _formula_pairs(budget: Budget) -> Iterator[tuple[Formula, Formula]]:
    formulas = formula_index()

    for t in itertools.count():
        budget.tick()
        first, second = unpair(t)
        yield formulas[first], formulas[second]


#######################################################################################
# PRE-CLOSURE AXIOMS OF KNOWLEDGE


def e1_instance(formula: Formula) -> Formula:
    return universal_closure(Know(formula))


def e2_instance(first: Formula, second: Formula) -> Formula:
    return universal_closure(
        Implies(Know(Implies(first, second)), Implies(Know(first), Know(second)))
    )


def e3_instance(formula: Formula) -> Formula:
    return universal_closure(Implies(Know(formula), formula))


def e4_instance(formula: Formula) -> Formula:
    return universal_closure(Implies(Know(formula), Know(Know(formula))))


def _generate_e1(budget: Budget) -> Iterator[Formula]:
    return (e1_instance(formula) for formula in _valid_formulas(budget))


def _generate_e2(budget: Budget) -> Iterator[Formula]:
    return (e2_instance(first, second) for first, second in _formula_pairs(budget))


def _generate_single(instance: Callable[[Formula], Formula]) -> Generator:
    def generate(budget: Budget) -> Iterator[Formula]:
        for formula in formula_index():
            budget.tick()
            yield instance(formula)

    return generate


def _recognize_e1(sentence: Formula, budget: Budget) -> ThreeValued:
    for body in closure_bodies(sentence):
        if isinstance(body, Know):
            return _validity(body.body, budget)

    return ThreeValued.FALSE


def _recognize_e2(sentence: Formula, budget: Budget) -> ThreeValued:
    for body in closure_bodies(sentence):
        match body:
            case Implies(Know(Implies(a, b)), Implies(Know(c), Know(d))) if (
                a == c and b == d
            ):
                return ThreeValued.TRUE

    return ThreeValued.FALSE


def _recognize_e3(sentence: Formula, budget: Budget) -> ThreeValued:
    for body in closure_bodies(sentence):
        match body:
            case Implies(Know(a), b) if a == b:
                return ThreeValued.TRUE

    return ThreeValued.FALSE


def _recognize_e4(sentence: Formula, budget: Budget) -> ThreeValued:
    for body in closure_bodies(sentence):
        match body:
            case Implies(Know(a), Know(Know(b))) if a == b:
                return ThreeValued.TRUE

    return ThreeValued.FALSE


#######################################################################################
# ARITHMETIC AND ASSIGNED VALIDITY


def induction_instance(formula: Formula, var: str, curried: bool = False) -> Formula:
    """Return the closed induction axiom for `formula` on `var`.

    The axiom reads (phi(0) & step) -> forall var phi, or with `curried`,
    phi(0) -> (step -> forall var phi).

    Raises:
        CaptureError: If S(var) is not substitutable for `var` in `formula`.
    """
    base = subst(formula, var, ZERO)
    step = Forall(var, Implies(formula, subst(formula, var, succ(Var(var)))))
    whole = Forall(var, formula)

    if curried:
        return universal_closure(Implies(base, Implies(step, whole)))

    return universal_closure(Implies(And(base, step), whole))


def _generate_pa(budget: Budget) -> Iterator[Formula]:
    yield from PEANO_AXIOMS

    for formula in formula_index():
        budget.tick()

        for var in first_occurrence_order(formula):
            try:
                yield induction_instance(formula, var)
                yield induction_instance(formula, var, curried=True)
            except CaptureError:
                continue


def _recognize_pa(sentence: Formula, budget: Budget) -> ThreeValued:
    if sentence in PEANO_AXIOMS:
        return ThreeValued.TRUE

    for body in closure_bodies(sentence):
        match body:
            case Implies(
                And(_, Forall(var, Implies(formula, _))), Forall(other, whole)
            ):
                curried = False
            case Implies(
                _, Implies(Forall(var, Implies(formula, _)), Forall(other, whole))
            ):
                curried = True
            case _:
                continue

        if var != other or formula != whole or var not in free_vars(formula):
            continue

        try:
            if induction_instance(formula, var, curried) == sentence:
                return ThreeValued.TRUE
        except CaptureError:
            continue

    return ThreeValued.FALSE


def _generate_assigned_validity(budget: Budget) -> Iterator[Formula]:
    valid = StreamIndex(_valid_formulas(budget))

    for t in itertools.count():
        position, index = unpair(t)
        formula = valid[position]
        yield ground(formula, _assignment(formula, index))


def _recognize_assigned_validity(sentence: Formula, budget: Budget) -> ThreeValued:
    # A sentence is its own grounding, and groundings of valid formulas are valid
    return _validity(sentence, budget)


#######################################################################################
# SELF-REFERENCE


def sigma_line3(n: int, formula: Formula) -> Formula:
    """Return forall x (K formula <-> <x, code(formula)> in W_n).

    Raises:
        FreeVariableError: If FV(formula) does not lie within {x}.
    """
    check_x_only(formula)
    membership = pair_membership_for(_X, Num(encode(formula)), Num(n))

    return Forall("x", Iff(Know(formula), membership))


def match_sigma_line3(sentence: Formula) -> tuple[Formula, int] | None:
    """Return (formula, n) when `sentence` is a line of the self-reference schema."""
    match sentence:
        case Forall("x", Iff(Know(formula), membership)):
            found = match_pair_membership(membership)

            if found is None or not free_vars(formula) <= _X_ONLY:
                return None

            first, second, index = found

            if first == _X and second == Num(encode(formula)):
                if isinstance(index, Num):
                    return formula, index.value

    return None


def reinhardt_instance(formula: Formula, known: bool = False) -> Formula:
    """Return exists e K forall x (K formula <-> In(x, e)).

    With `known`, return K of that sentence, the strong form of the schema.

    Raises:
        FreeVariableError: If FV(formula) does not lie within {x}.
    """
    check_x_only(formula)
    inner = Iff(Know(formula), membership_formula_for(_X, Var(REINHARDT_VAR)))
    instance = Exists(REINHARDT_VAR, Know(Forall("x", inner)))

    return Know(instance) if known else instance


def _recognize_reinhardt(sentence: Formula, budget: Budget) -> ThreeValued:
    match sentence:
        case Exists(var, Know(Forall("x", Iff(Know(formula), membership)))) if (
            var == REINHARDT_VAR
        ):
            if match_membership(membership) is None:
                return ThreeValued.FALSE

            if free_vars(formula) <= _X_ONLY:
                return ThreeValued.of(reinhardt_instance(formula) == sentence)

    return ThreeValued.FALSE


def _line3_set(n: int) -> AxiomSet:
    def generate(budget: Budget) -> Iterator[Formula]:
        for formula in formula_index(_X_ONLY):
            yield sigma_line3(n, formula)

    def recognize(sentence: Formula, budget: Budget) -> ThreeValued:
        found = match_sigma_line3(sentence)
        return ThreeValued.of(found is not None and found[1] == n)

    return AxiomSet(
        pair(SchemaId.SIGMA_LINE3.ordinal, n), f"sigma-line3({n})", generate, recognize
    )


#######################################################################################
# COMBINATORS


def union(identity: int, name: str, parts: Sequence[AxiomSet]) -> AxiomSet:
    """Return the union of `parts`, enumerated round robin."""
    # Exact recognizers first
    ordered = sorted(parts, key=lambda part: not part.exact)

    def generate(budget: Budget) -> Iterator[Formula]:
        cursors = [part.cursor(budget) for part in parts]

        while cursors:
            for cursor in list(cursors):
                sentence = next(cursor, None)

                if sentence is None:
                    cursors.remove(cursor)
                else:
                    yield sentence

    def recognize(sentence: Formula, budget: Budget) -> ThreeValued:
        return _any(part.recognize(sentence, budget) for part in ordered)

    exact = all(part.exact for part in parts)

    return AxiomSet(identity, name, generate, recognize, exact)


def k_closure(identity: int, name: str, base: AxiomSet, min_depth: int = 1) -> AxiomSet:
    """Return K^d(s) for s in `base` and every d >= `min_depth`.

    Position t of the stream is base sentence i under d K's, for (i, d) = unpair(t).
    """

    def generate(budget: Budget) -> Iterator[Formula]:
        members = StreamIndex(base.cursor(budget))

        for t in itertools.count():
            budget.tick()
            position, depth = unpair(t)

            try:
                sentence = members[position]
            except StopIteration:
                continue

            yield k_power(sentence, depth + min_depth)

    def recognize(sentence: Formula, budget: Budget) -> ThreeValued:
        depth, core = peel_know(sentence)
        # Deepest peel first
        peeled = range(depth, min_depth - 1, -1)

        return _any(base.recognize(k_power(core, depth - k), budget) for k in peeled)

    return AxiomSet(identity, name, generate, recognize, base.exact)


#######################################################################################
# FAMILIES


def _identity(schema_id: SchemaId, n: int = 0) -> int:
    return pair(schema_id.ordinal, n)


_E1 = AxiomSet(_identity(SchemaId.E1), "E1", _generate_e1, _recognize_e1, exact=False)
_E2 = AxiomSet(_identity(SchemaId.E2), "E2", _generate_e2, _recognize_e2)
_E3 = AxiomSet(
    _identity(SchemaId.E3), "E3", _generate_single(e3_instance), _recognize_e3
)
_E4 = AxiomSet(
    _identity(SchemaId.E4), "E4", _generate_single(e4_instance), _recognize_e4
)
_PA = AxiomSet(_identity(SchemaId.PA_L), "PA", _generate_pa, _recognize_pa)
_ASSIGNED_VALIDITY = AxiomSet(
    _identity(SchemaId.ASSIGNED_VALIDITY),
    "assigned-validity",
    _generate_assigned_validity,
    _recognize_assigned_validity,
    exact=False,
)
_REINHARDT = AxiomSet(
    _identity(SchemaId.REINHARDT_SCHEMA),
    "reinhardt",
    lambda budget: (reinhardt_instance(f) for f in formula_index(_X_ONLY)),
    _recognize_reinhardt,
)


def know_each(identity: int, name: str, base: AxiomSet) -> AxiomSet:
    """Return { K s : s in base }."""

    def generate(budget: Budget) -> Iterator[Formula]:
        return (Know(sentence) for sentence in base.cursor(budget))

    def recognize(sentence: Formula, budget: Budget) -> ThreeValued:
        if isinstance(sentence, Know):
            return base.recognize(sentence.body, budget)

        return ThreeValued.FALSE

    return AxiomSet(identity, name, generate, recognize, base.exact)


def _system(schema_id: SchemaId, known: list[AxiomSet]) -> AxiomSet:
    """Return the pre-closure axioms together with K s for s in `known`."""
    identity = _identity(schema_id)
    known_set = union(identity, f"{schema_id.value}-known", known)
    layer = know_each(identity, f"K({schema_id.value})", known_set)

    return union(identity, schema_id.value, [_E1, _E2, _E3, _E4, layer])


@lru_cache(maxsize=None)
def sigma(n: int) -> AxiomSet:
    """Return sigma(n): lines 1 to 4 and their closure under K."""
    identity = _identity(SchemaId.SIGMA, n)
    lines = union(
        identity,
        f"sigma-lines({n})",
        [_PA, _E2, _E4, _line3_set(n), _E1, _ASSIGNED_VALIDITY],
    )

    return k_closure(identity, f"sigma({n})", lines, min_depth=0)


@lru_cache(maxsize=None)
def schema(schema_id: SchemaId | str, n: int = 0) -> AxiomSet:
    """Return the axiom family named `schema_id`.

    Args:
        schema_id (SchemaId | str): Family, by member or by value.
        n (int, optional): Index of the self-reference lines and of sigma.

    Raises:
        UnknownSchemaError: If no family has that name.
    """
    try:
        schema_id = SchemaId(schema_id)
    except ValueError as exc:
        raise UnknownSchemaError(str(schema_id), [s.value for s in SchemaId]) from exc

    pre_closure = [_E1, _E2, _E3, _E4]
    mod_factivity = [_E1, _E2, _E4]
    identity = _identity(schema_id, n)

    match schema_id:
        case SchemaId.E1:
            return _E1
        case SchemaId.E2:
            return _E2
        case SchemaId.E3:
            return _E3
        case SchemaId.E4:
            return _E4
        case SchemaId.PA_L:
            return _PA
        case SchemaId.ASSIGNED_VALIDITY:
            return _ASSIGNED_VALIDITY
        case SchemaId.REINHARDT_SCHEMA:
            return _REINHARDT
        case SchemaId.SIGMA_LINE3:
            return _line3_set(n)
        case SchemaId.SIGMA:
            return sigma(n)
        case SchemaId.PRE_CLOSURE:
            return union(identity, schema_id.value, pre_closure)
        case SchemaId.KNOWLEDGE_AXIOMS:
            return _system(schema_id, pre_closure)
        case SchemaId.KNOWLEDGE_MOD_FACTIVITY:
            return _system(schema_id, mod_factivity)
        case SchemaId.EPISTEMIC_ARITHMETIC:
            return _system(schema_id, [*pre_closure, _PA])
        case SchemaId.EPISTEMIC_ARITHMETIC_MOD_FACTIVITY:
            return _system(schema_id, [*mod_factivity, _PA])

    # K_CLOSURE: every K^d s, d >= 1, for s in the n-free lines of sigma
    base = union(identity, "k-closure-base", [_PA, _E2, _E4, _E1, _ASSIGNED_VALIDITY])
    return k_closure(identity, schema_id.value, base, min_depth=1)


#######################################################################################
# OPERATIONS


def enumerate_schema(
    schema_id: SchemaId | str, budget: Budget | int, n: int = 0
) -> list[Formula]:
    """Return the sentences of a family emitted within `budget`, in emission order."""
    budget = as_budget(budget)
    found: list[Formula] = []

    try:
        for sentence in schema(schema_id, n).cursor(budget):
            found.append(sentence)

    except BudgetExhausted as exc:
        if not budget.owns(exc):
            raise

    log.debug("%s: %d sentences within %d steps", schema_id, len(found), budget.limit)

    return found


def is_instance(
    schema_id: SchemaId | str, sentence: Formula, budget: Budget | int, n: int = 0
) -> ThreeValued:
    """Decide membership of `sentence` in a family; UNKNOWN when the budget runs out."""
    budget = as_budget(budget)

    try:
        return schema(schema_id, n).recognize(sentence, budget)

    except BudgetExhausted as exc:
        if not budget.owns(exc):
            raise

        return ThreeValued.UNKNOWN


def lifting_hints(entailment: Entailment) -> list[Formula]:
    """Return sigma sentences from which K(goal) follows propositionally.

    For support s1, ..., sk of the goal these are K(s1 -> ... -> sk -> goal) from E1,
    the E2 instances that detach each si under K, and K si from closure under K.
    """
    support, goal = entailment.support, entailment.goal
    hints = [e1_instance(entailment.chain)]

    for position, premise in enumerate(support):
        rest = implication_chain(support[position + 1 :], goal)
        hints.append(e2_instance(premise, rest))

    hints.extend(Know(premise) for premise in entailment.support)

    return hints


def entails_sigma(
    n: int, goal: Formula, budget: Budget | int, dovetail_k: int = DOVETAIL_K
) -> Entailment | None:
    """Semidecide sigma(n) |= goal.

    Half of the budget goes to a direct search with the axioms of arithmetic as
    hints. For a goal K phi that is not reached directly, half of the rest looks for
    phi, and the remainder searches for K phi with the lifting hints of that result.
    """
    budget = as_budget(budget)
    axioms = sigma(n)

    try:
        direct = budget.child(budget.remaining // 2)
        found = entails(axioms, goal, direct, PEANO_AXIOMS, dovetail_k)

        if found is not None or not isinstance(goal, Know):
            return found

        lifted = budget.child(budget.remaining // 2)
        inner = entails(axioms, goal.body, lifted, PEANO_AXIOMS, dovetail_k)

        if inner is None:
            return None

        log.debug("lifting %s over %d support axioms", show(goal), len(inner.support))

        return entails(axioms, goal, budget, lifting_hints(inner), dovetail_k)

    except BudgetExhausted as exc:
        if not budget.owns(exc):
            raise

        return None
