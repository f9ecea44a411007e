"""Budgeted proof search, entailment and theorem enumeration.

Search runs on translated sequents, depth first over an explicit stack, without
backtracking: every rule keeps its principal formula, so no branch ever needs to be
revisited. At each node the search tries, in order, closing the branch, inserting the
next support axiom, the non-branching rules, the eigenvariable rules, the branching
rules and finally one quantifier instance. The instance formula with the fewest
instances goes first, and its instance terms alternate between terms already on the
branch and closed terms in size order, which keeps the search fair.

`entails` feeds axioms into the search: the goal and the caller's hints first, each
admitted only if the axiom set recognizes it, then the axiom set's own stream. One
axiom is fetched every `dovetail_k` steps. A finished search is rewritten into a
validity proof of `s1 -> ... -> sn -> goal` for the support axioms it used.

Attributes:
    DOVETAIL_K (int): Default number of search steps between two axiom fetches.
    THEOREM_BASE (int): Steps granted per stage to each candidate theorem.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Protocol

from knowing.budget import Budget, BudgetExhausted, as_budget
from knowing.formula import (
    And,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Term,
    Var,
    closed_subterms,
    implication_chain,
    is_sentence,
    show,
    show_term,
    term_size,
)
from knowing.logic.proof import (
    Proof,
    RuleError,
    Sequent,
    Step,
    closes,
    premises_for,
)
from knowing.logic.semantics import ThreeValued
from knowing.logic.translate import AtomTable, translate
from knowing.streams import closed_term_index, formula_index


log = logging.getLogger(__name__)


DOVETAIL_K = 8

THEOREM_BASE = 256

EIGEN_PREFIX = "_a"


class SentenceSource(Protocol):
    """What the prover needs from an axiom set."""

    def cursor(self, budget: Budget) -> Iterator[Formula]:
        ...

    def recognize(self, sentence: Formula, budget: Budget) -> ThreeValued:
        ...


@dataclass(frozen=True)
class Entailment:
    """A successful `entails` call.

    Attributes:
        goal (Formula): The entailed formula.
        support (tuple[Formula, ...]): Axioms used, in the order they were fetched.
        proof (Proof): Validity proof of `implication_chain(support, goal)`.
    """

    goal: Formula
    support: tuple[Formula, ...]
    proof: Proof

    @property
    def chain(self) -> Formula:
        return implication_chain(self.support, self.goal)


class _Saturated(Exception):
    """An open branch to which no rule applies and no axiom can be added."""


#######################################################################################
# AXIOM FEED


class _Feed:
    def __init__(
        self,
        axioms: SentenceSource,
        hints: Iterable[Formula],
        table: AtomTable,
        every: int,
    ):
        self.axioms = axioms
        self.hints = deque(hints)
        self.table = table
        self.every = every
        self.pool: list[tuple[Formula, Formula]] = []
        self.exhausted = False
        self._seen: set[Formula] = set()
        self._cursor: Iterator[Formula] | None = None
        self._steps = 0

    def step(self, budget: Budget) -> None:
        if self._steps % self.every == 0:
            self.fetch(budget)

        self._steps += 1

    def fetch(self, budget: Budget) -> bool:
        """Admit one more axiom; return whether the pool grew."""
        while self.hints:
            hint = self.hints.popleft()

            if hint in self._seen or not is_sentence(hint):
                continue

            if self.axioms.recognize(hint, budget) is ThreeValued.TRUE:
                log.debug("admitted hint %s", show(hint))
                return self._admit(hint)

        if self.exhausted:
            return False

        if self._cursor is None:
            self._cursor = self.axioms.cursor(budget)

        for sentence in self._cursor:
            if sentence not in self._seen:
                return self._admit(sentence)

        self.exhausted = True
        return False

    def _admit(self, sentence: Formula) -> bool:
        self._seen.add(sentence)
        self.pool.append((sentence, translate(sentence, self.table)))
        return True


#######################################################################################
# SEARCH


@dataclass
class _Node:
    sequent: Sequent
    used: frozenset[tuple[str, Formula]]
    instances: dict[tuple[str, Formula], tuple[Term, ...]]
    pooled: int
    rule: str = ""
    principal: Formula | None = None
    term: Term | None = None
    children: list[_Node] = field(default_factory=list)


def _ordered(formulas: Iterable[Formula]) -> list[Formula]:
    return sorted(formulas, key=show)


_ALPHA = {
    (Not, "L"): "notL",
    (And, "L"): "andL",
    (Not, "R"): "notR",
    (Or, "R"): "orR",
    (Implies, "R"): "impR",
}
_DELTA = {(Exists, "L"): "exL", (Forall, "R"): "allR"}
_BETA = {
    (Or, "L"): "orL",
    (Implies, "L"): "impL",
    (Iff, "L"): "iffL",
    (And, "R"): "andR",
    (Iff, "R"): "iffR",
}
_GAMMA = {(Forall, "L"): "allL", (Exists, "R"): "exR"}


class _Search:
    def __init__(self, budget: Budget, feed: _Feed | None):
        self.budget = budget
        self.feed = feed
        self._eigen = itertools.count()

    def run(self, root: Sequent) -> _Node:
        top = _Node(root, frozenset(), {}, 0)
        stack = [top]

        while stack:
            node = stack.pop()
            self.budget.tick(1 + node.sequent.size)

            if closes(node.sequent):
                node.rule = "close"
                continue

            if self.feed is not None:
                self.feed.step(self.budget)

            self._expand(node)
            stack.extend(reversed(node.children))

        return top

    def _expand(self, node: _Node) -> None:
        if self.feed is not None and node.pooled < len(self.feed.pool):
            self._apply(node, "sup", self.feed.pool[node.pooled][1])
            return

        for table in (_ALPHA, _DELTA, _BETA):
            if self._rule_from(node, table):
                return

        if self._instantiate(node):
            return

        if self.feed is not None and self.feed.fetch(self.budget):
            self._apply(node, "sup", self.feed.pool[node.pooled][1])
            return

        raise _Saturated()

    def _candidates(self, node: _Node, table: dict) -> Iterator[tuple]:
        for side, formulas in (("L", node.sequent.ante), ("R", node.sequent.succ)):
            for formula in _ordered(formulas):
                rule = table.get((type(formula), side))

                if rule is not None:
                    yield rule, (side, formula)

    def _rule_from(self, node: _Node, table: dict) -> bool:
        for rule, key in self._candidates(node, table):
            if key in node.used:
                continue

            term = self._eigenvariable(node) if table is _DELTA else None
            self._apply(node, rule, key[1], term, used=key)
            return True

        return False

    def _eigenvariable(self, node: _Node) -> Var:
        taken = node.sequent.free_vars()

        while (name := f"{EIGEN_PREFIX}{next(self._eigen)}") in taken:
            pass

        return Var(name)

    def _instantiate(self, node: _Node) -> bool:
        candidates = list(self._candidates(node, _GAMMA))

        if not candidates:
            return False

        rule, key = min(
            candidates,
            key=lambda item: (len(node.instances.get(item[1], ())), show(item[1][1])),
        )
        tried = node.instances.get(key, ())
        branch = _branch_terms(node.sequent)

        while True:
            term = _next_term(tried, branch)
            tried = tried + (term,)

            try:
                premises = premises_for(node.sequent, rule, key[1], term)
            except RuleError:
                continue

            instances = {**node.instances, key: tried}
            self._attach(node, rule, key[1], term, premises, node.used, instances)
            return True

    def _apply(
        self,
        node: _Node,
        rule: str,
        principal: Formula,
        term: Term | None = None,
        used: tuple[str, Formula] | None = None,
    ) -> None:
        premises = premises_for(node.sequent, rule, principal, term)
        marked = node.used | {used} if used is not None else node.used
        self._attach(node, rule, principal, term, premises, marked, node.instances)

        if rule == "sup":
            node.children[0].pooled = node.pooled + 1

    @staticmethod
    def _attach(node, rule, principal, term, premises, used, instances) -> None:
        node.rule, node.principal, node.term = rule, principal, term
        node.children = [
            _Node(premise, used, instances, node.pooled) for premise in premises
        ]


def _branch_terms(sequent: Sequent) -> list[Term]:
    terms: set[Term] = set()

    for formula in sequent.ante | sequent.succ:
        terms |= closed_subterms(formula)

    terms |= {Var(name) for name in sequent.free_vars()}

    return sorted(terms, key=lambda term: (term_size(term), show_term(term)))


def _next_term(tried: tuple[Term, ...], branch: list[Term]) -> Term:
    """Alternate between unused branch terms and unused closed terms."""
    used = set(tried)

    if len(tried) % 2 == 0:
        for term in branch:
            if term not in used:
                return term

    for position in itertools.count():
        term = closed_term_index()[position]

        if term not in used:
            return term

    raise AssertionError("unreachable")


#######################################################################################
# PROOF EXTRACTION


def _linearize(top: _Node, support_fo: frozenset[Formula]) -> list[Step]:
    steps: list[Step] = []
    index_of: dict[int, int] = {}
    stack: list[tuple[_Node, bool]] = [(top, False)]

    while stack:
        node, ready = stack.pop()

        if not ready:
            stack.append((node, True))
            stack.extend((child, False) for child in reversed(node.children))
            continue

        if node.rule == "sup":
            index_of[id(node)] = index_of[id(node.children[0])]
            continue

        steps.append(
            Step(
                node.sequent.add(ante=support_fo),
                node.rule,
                tuple(index_of[id(child)] for child in node.children),
                node.principal,
                node.term,
            )
        )
        index_of[id(node)] = len(steps) - 1

    return steps


def _support_indices(top: _Node) -> list[int]:
    found = set()
    stack = [top]

    while stack:
        node = stack.pop()

        if node.rule == "sup":
            found.add(node.pooled)

        stack.extend(node.children)

    return sorted(found)


def _discharge(steps: list[Step], support_fo: list[Formula], target: Formula) -> None:
    """Append impR/weak steps turning `S ==> goal` into `==> s1 -> ... -> goal`."""
    consequents = [target]

    for premise in reversed(support_fo):
        consequents.append(Implies(premise, consequents[-1]))

    consequents.reverse()

    for position in reversed(range(len(support_fo))):
        before = frozenset(support_fo[:position])
        with_premise = before | {support_fo[position]}
        conclusion = Sequent(before, frozenset((consequents[position],)))
        widened = Sequent(
            with_premise,
            frozenset((consequents[position], consequents[position + 1])),
        )

        steps.append(Step(widened, "weak", (len(steps) - 1,)))
        steps.append(
            Step(conclusion, "impR", (len(steps) - 1,), consequents[position])
        )


def _finish(
    top: _Node, feed: _Feed | None, table: AtomTable, goal: Formula, target: Formula
) -> Entailment:
    pool = feed.pool if feed is not None else []
    chosen = _support_indices(top)
    support = tuple(pool[i][0] for i in chosen)
    support_fo = [pool[i][1] for i in chosen]

    steps = _linearize(top, frozenset(support_fo))
    _discharge(steps, support_fo, target)

    return Entailment(goal, support, Proof(steps, table))


#######################################################################################
# PUBLIC ENTRY POINTS


def entails(
    axioms: SentenceSource | None,
    goal: Formula,
    budget: Budget | int,
    hints: Iterable[Formula] = (),
    dovetail_k: int = DOVETAIL_K,
) -> Entailment | None:
    """Semidecide whether `axioms` entail `goal`.

    Args:
        axioms (SentenceSource, optional): Axiom set, or None for plain validity.
        goal (Formula): Formula to derive.
        budget (Budget | int): Step budget.
        hints (Iterable[Formula], optional): Sentences tried as axioms right after
            the goal itself; each is admitted only if `axioms` recognizes it.
        dovetail_k (int, optional): Search steps between two axiom fetches.

    Returns:
        Entailment | None: The support and proof, or None when the budget ran out or
            the search saturated without a proof.
    """
    budget = as_budget(budget)
    table = AtomTable()
    target = translate(goal, table)
    feed = None

    if axioms is not None:
        feed = _Feed(axioms, [goal, *hints], table, dovetail_k)

    try:
        top = _Search(budget, feed).run(Sequent(frozenset(), frozenset((target,))))

    except BudgetExhausted as exc:
        if not budget.owns(exc):
            raise

        log.debug("entails %s: budget of %d exhausted", show(goal), budget.limit)
        return None

    except _Saturated:
        log.debug("entails %s: saturated after %d steps", show(goal), budget.used)
        return None

    result = _finish(top, feed, table, goal, target)
    log.debug(
        "entails %s: %d steps, support of %d",
        show(goal),
        len(result.proof),
        len(result.support),
    )

    return result


def prove_valid(formula: Formula, budget: Budget | int) -> Proof | None:
    """Search for a proof that `formula` is valid; None means Unknown."""
    result = entails(None, formula, budget)

    return None if result is None else result.proof


def enumerate_theorems(
    axioms: SentenceSource | None,
    budget: Budget | int,
    dovetail_k: int = DOVETAIL_K,
) -> set[Formula]:
    """Return the consequences of `axioms` found within `budget`.

    Stage t fetches one more axiom and gives sentence j of the sentence stream, for
    every j up to t, an attempt of `THEOREM_BASE * (t - j + 1)` steps. The result is
    a prefix of the same run at any larger budget.
    """
    budget = as_budget(budget)
    sentences = formula_index(frozenset())
    found: set[Formula] = set()
    cursor = axioms.cursor(budget) if axioms is not None else None

    try:
        for stage in itertools.count():
            if cursor is not None and (axiom := next(cursor, None)) is not None:
                found.add(axiom)

            for position in range(stage + 1):
                candidate = sentences[position]

                if candidate in found:
                    continue

                attempt = budget.child(THEOREM_BASE * (stage - position + 1))

                if entails(axioms, candidate, attempt, dovetail_k=dovetail_k):
                    found.add(candidate)

    except BudgetExhausted as exc:
        if not budget.owns(exc):
            raise

    log.info("enumerated %d theorems within %d steps", len(found), budget.limit)

    return found
