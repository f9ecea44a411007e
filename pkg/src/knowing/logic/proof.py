"""Proof objects of the sequent calculus, their local checker and text form.

Sequents are pairs of finite sets of first-order formulas. Every rule keeps its
principal formula, so each premise is the conclusion plus the new formulas; `weak`
drops formulas, and `close` ends a branch whose sequent shares a formula between its
sides or whose succedent follows from the antecedent equalities by congruence
closure.

Proof text starts with a header line, lists the atom table as `id TAB skeleton`
records and then one `index TAB rule TAB premises TAB sequent TAB side` record per
step. Sequents print as `a; b ==> c; d`, side data as `principal @ term`.

Attributes:
    PROOF_HEADER (str): First line of every proof file.
    RULES (tuple[str, ...]): Rule tags the checker accepts.
    UNFOLD_LIMIT (int): Largest numeral that congruence closure unfolds into an
        S-application.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from knowing.coding import CODING_VERSION
from knowing.compmodel.arith import MEMBERSHIP_ATOM
from knowing.exceptions import CaptureError, ProofFormatError
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
    PatternAtom,
    Pred,
    Succ,
    Term,
    Var,
    free_vars,
    pattern,
    show,
    show_term,
    subst,
    terms_of,
)
from knowing.logic.translate import AtomTable, translate
from knowing.parser import parse, parse_term


PROOF_HEADER = f"# knowing-proof v1 {CODING_VERSION}"

RULES = (
    "close",
    "weak",
    "notL",
    "notR",
    "andL",
    "andR",
    "orL",
    "orR",
    "impL",
    "impR",
    "iffL",
    "iffR",
    "allL",
    "allR",
    "exL",
    "exR",
    "sup",
)

UNFOLD_LIMIT = 64


class RuleError(ValueError):
    """A rule does not apply to the given conclusion."""


#######################################################################################
# SEQUENTS AND STEPS


@dataclass(frozen=True)
class Sequent:
    ante: frozenset[Formula] = frozenset()
    succ: frozenset[Formula] = frozenset()

    def add(
        self, ante: Iterable[Formula] = (), succ: Iterable[Formula] = ()
    ) -> Sequent:
        return Sequent(self.ante | frozenset(ante), self.succ | frozenset(succ))

    @property
    def size(self) -> int:
        return len(self.ante) + len(self.succ)

    def free_vars(self) -> frozenset[str]:
        return frozenset().union(*(free_vars(f) for f in self.ante | self.succ))

    def show(self) -> str:
        ante = "; ".join(sorted(show(f) for f in self.ante))
        succ = "; ".join(sorted(show(f) for f in self.succ))
        return f"{ante} ==> {succ}".strip()


@dataclass(frozen=True)
class Step:
    """One rule application.

    Attributes:
        sequent (Sequent): Conclusion of the step.
        rule (str): Rule tag.
        premises (tuple[int, ...]): Indices of the steps proving the premises.
        principal (Formula, optional): Principal formula.
        term (Term, optional): Instance term of allL/exR, eigenvariable of allR/exL.
    """

    sequent: Sequent
    rule: str
    premises: tuple[int, ...] = ()
    principal: Formula | None = None
    term: Term | None = None


@dataclass
class Proof:
    """A numbered list of steps whose last step is the conclusion.

    Attributes:
        steps (list[Step]): The steps, premises before conclusions.
        atoms (AtomTable): Table of the predicate atoms the steps mention.
    """

    steps: list[Step]
    atoms: AtomTable = field(default_factory=AtomTable)

    @property
    def conclusion(self) -> Sequent:
        return self.steps[-1].sequent

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of `check_proof`; truthy when the proof checks.

    Attributes:
        ok (bool): Whether the proof checks.
        bad_step (int, optional): Index of the first incorrect step.
        reason (str): Diagnostic of the failure.
    """

    ok: bool
    bad_step: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


#######################################################################################
# RULES


def premises_for(
    conclusion: Sequent, rule: str, principal: Formula | None, term: Term | None
) -> list[Sequent]:
    """Return the premises of a rule application.

    Raises:
        RuleError: If the rule does not apply to `conclusion` as described.
    """
    ante, succ = conclusion.ante, conclusion.succ

    if rule == "sup":
        if principal is None or free_vars(principal):
            raise RuleError("sup inserts a sentence")
        return [conclusion.add(ante=[principal])]

    if principal is None:
        raise RuleError(f"{rule} needs a principal formula")

    on_left = rule.endswith("L")

    if principal not in (ante if on_left else succ):
        side = "antecedent" if on_left else "succedent"
        raise RuleError(f"principal {show(principal)} is not in the {side}")

    match rule, principal:
        case "notL", Not(body):
            return [conclusion.add(succ=[body])]
        case "notR", Not(body):
            return [conclusion.add(ante=[body])]
        case "andL", And(left, right):
            return [conclusion.add(ante=[left, right])]
        case "andR", And(left, right):
            return [conclusion.add(succ=[left]), conclusion.add(succ=[right])]
        case "orL", Or(left, right):
            return [conclusion.add(ante=[left]), conclusion.add(ante=[right])]
        case "orR", Or(left, right):
            return [conclusion.add(succ=[left, right])]
        case "impL", Implies(left, right):
            return [conclusion.add(succ=[left]), conclusion.add(ante=[right])]
        case "impR", Implies(left, right):
            return [conclusion.add(ante=[left], succ=[right])]
        case "iffL", Iff(left, right):
            return [
                conclusion.add(ante=[left, right]),
                conclusion.add(succ=[left, right]),
            ]
        case "iffR", Iff(left, right):
            return [
                conclusion.add(ante=[left], succ=[right]),
                conclusion.add(ante=[right], succ=[left]),
            ]
        case ("allL", Forall(var, body)) | ("exR", Exists(var, body)):
            if term is None:
                raise RuleError(f"{rule} needs an instance term")
            instance = _instance(body, var, term)
            if rule == "allL":
                return [conclusion.add(ante=[instance])]
            return [conclusion.add(succ=[instance])]
        case ("allR", Forall(var, body)) | ("exL", Exists(var, body)):
            if not isinstance(term, Var):
                raise RuleError(f"{rule} needs an eigenvariable")
            if term.name in conclusion.free_vars():
                raise RuleError(f"eigenvariable {term.name} is free in the conclusion")
            instance = _instance(body, var, term)
            if rule == "allR":
                return [conclusion.add(succ=[instance])]
            return [conclusion.add(ante=[instance])]

    raise RuleError(f"{rule} does not apply to {show(principal)}")


def _instance(body: Formula, var: str, term: Term) -> Formula:
    try:
        return subst(body, var, term)
    except CaptureError as exc:
        raise RuleError(str(exc)) from exc


#######################################################################################
# CLOSURE


class Congruence:
    """Congruence closure over ground and open terms of one sequent."""

    def __init__(self):
        self._parent: dict[Term, Term] = {}
        self._nodes: list[Term] = []

    def add(self, term: Term) -> None:
        if term in self._parent:
            return

        match term:
            case Succ(arg):
                self.add(arg)
            case Add(left, right) | Mul(left, right):
                self.add(left)
                self.add(right)
            case Num(number) if 0 < number <= UNFOLD_LIMIT:
                self.add(Num(number - 1))

        self._parent[term] = term
        self._nodes.append(term)

    def find(self, term: Term) -> Term:
        self.add(term)
        root = term

        while self._parent[root] != root:
            root = self._parent[root]

        while self._parent[term] != root:
            self._parent[term], term = root, self._parent[term]

        return root

    def union(self, first: Term, second: Term) -> bool:
        first, second = self.find(first), self.find(second)

        if first == second:
            return False

        self._parent[first] = second
        return True

    def _signature(self, term: Term) -> tuple:
        match term:
            case Succ(arg):
                return ("S", self.find(arg))
            case Num(number) if 0 < number <= UNFOLD_LIMIT:
                return ("S", self.find(Num(number - 1)))
            case Add(left, right):
                return ("+", self.find(left), self.find(right))
            case Mul(left, right):
                return ("*", self.find(left), self.find(right))

        return ("leaf", term)

    def close(self) -> None:
        """Merge classes until congruence holds."""
        changed = True

        while changed:
            changed = False
            table: dict[tuple, Term] = {}
            numerals: dict[Term, int] = {}

            for term in self._nodes:
                if isinstance(term, Num):
                    numerals[self.find(term)] = term.value

            for term in list(self._nodes):
                signature = self._signature(term)

                if signature in table:
                    changed |= self.union(table[signature], term)
                else:
                    table[signature] = term

                # Successors of large numerals, which are not unfolded
                if isinstance(term, Succ):
                    number = numerals.get(self.find(term.arg))
                    if number is not None and number >= UNFOLD_LIMIT:
                        if Num(number + 1) in self._parent:
                            changed |= self.union(term, Num(number + 1))

    def same(self, first: Term, second: Term) -> bool:
        return self.find(first) == self.find(second)


def closes(sequent: Sequent) -> bool:
    """Whether `sequent` is an axiom of the calculus."""
    if sequent.ante & sequent.succ:
        return True

    if any(isinstance(f, Eq) and f.left == f.right for f in sequent.succ):
        return True

    equations = [f for f in sequent.ante if isinstance(f, Eq)]

    if not equations:
        return False

    goals = [f for f in sequent.succ if isinstance(f, (Eq, Pred))]

    if not goals:
        return False

    congruence = Congruence()
    facts = [f for f in sequent.ante if isinstance(f, Pred)]

    for formula in equations + facts + goals:
        for term in terms_of(formula):
            congruence.add(term)

    for equation in equations:
        congruence.union(equation.left, equation.right)

    congruence.close()

    for goal in goals:
        if isinstance(goal, Eq) and congruence.same(goal.left, goal.right):
            return True

        if isinstance(goal, Pred) and any(
            fact.atom == goal.atom
            and len(fact.args) == len(goal.args)
            and all(congruence.same(a, b) for a, b in zip(fact.args, goal.args))
            for fact in facts
        ):
            return True

    return False


#######################################################################################
# CHECKING


def _check_table(table: AtomTable) -> str | None:
    seen = set()

    for atom_id, atom in table.items():
        if atom_id in seen:
            return f"atom id {atom_id} appears twice"
        seen.add(atom_id)

        if atom == MEMBERSHIP_ATOM:
            continue

        if not isinstance(atom.skeleton, Know):
            return f"atom {atom_id} is not a knowledge pattern"

        if pattern(atom.skeleton)[0] != atom:
            return f"atom {atom_id} is not in canonical form"

    if seen != set(range(len(seen))):
        return "atom ids are not consecutive"

    return None


def _check_step(index: int, step: Step, steps: list[Step]) -> str | None:
    if step.rule not in RULES:
        return f"unknown rule {step.rule}"

    if any(p >= index or p < 0 for p in step.premises):
        return "premise reference does not precede the step"

    premises = [steps[p].sequent for p in step.premises]

    if step.rule == "close":
        if premises:
            return "close takes no premises"
        return None if closes(step.sequent) else "sequent does not close"

    if step.rule == "weak":
        if len(premises) != 1:
            return "weak takes one premise"
        inner = premises[0]
        if inner.ante <= step.sequent.ante and inner.succ <= step.sequent.succ:
            return None
        return "premise is not a subsequent of the conclusion"

    if step.rule == "sup":
        return "support steps do not occur in validity proofs"

    try:
        expected = premises_for(step.sequent, step.rule, step.principal, step.term)
    except RuleError as exc:
        return str(exc)

    if expected != premises:
        return f"premises do not match {step.rule}"

    return None


def check_proof(proof: Proof, formula: Formula) -> CheckResult:
    """Check every step of `proof` and that it concludes `formula`.

    The check is local and does not trust how the proof was produced: each step is
    re-derived from its conclusion, and the conclusion must be `==> translate(formula)`
    under the proof's own atom table.
    """
    if not proof.steps:
        return CheckResult(False, None, "empty proof")

    if (problem := _check_table(proof.atoms)) is not None:
        return CheckResult(False, None, problem)

    for index, step in enumerate(proof.steps):
        if (problem := _check_step(index, step, proof.steps)) is not None:
            return CheckResult(False, index, problem)

    table = proof.atoms.copy()
    target = translate(formula, table)

    if len(table) != len(proof.atoms):
        return CheckResult(False, None, "formula mentions atoms outside the table")

    if proof.conclusion != Sequent(frozenset(), frozenset((target,))):
        last = len(proof.steps) - 1
        return CheckResult(False, last, f"conclusion is not ==> {show(target)}")

    return CheckResult(True)


#######################################################################################
# SERIALIZATION


def _side(step: Step) -> str:
    if step.principal is None:
        return ""

    if step.term is None:
        return show(step.principal)

    return f"{show(step.principal)} @ {show_term(step.term)}"


def serialize_lines(proof: Proof) -> Iterator[str]:
    yield PROOF_HEADER

    for atom_id, atom in proof.atoms.items():
        yield f"{atom_id}\t{show(atom.skeleton)}"

    for index, step in enumerate(proof.steps):
        premises = ",".join(str(p) for p in step.premises)
        yield f"{index}\t{step.rule}\t{premises}\t{step.sequent.show()}\t{_side(step)}"


def serialize(proof: Proof) -> str:
    """Render a proof in its line-oriented text form."""
    return "\n".join(serialize_lines(proof)) + "\n"


def _formulas(text: str) -> frozenset[Formula]:
    if not text.strip():
        return frozenset()

    return frozenset(parse(part, internal=True) for part in text.split("; "))


def _sequent(text: str) -> Sequent:
    ante, arrow, succ = text.partition("==>")

    if not arrow:
        raise ValueError("sequent has no '==>'")

    return Sequent(_formulas(ante), _formulas(succ))


def _atom(text: str) -> PatternAtom:
    skeleton = parse(text, internal=True)

    if skeleton == MEMBERSHIP_ATOM.skeleton:
        return MEMBERSHIP_ATOM

    if not isinstance(skeleton, Know):
        return PatternAtom(skeleton, 0)

    return PatternAtom(skeleton, pattern(skeleton)[0].arity)


def deserialize(text: str) -> Proof:
    """Read a proof back from its text form.

    Raises:
        ProofFormatError: If a line is not a header, atom or step record.
    """
    lines = [line for line in text.splitlines() if line.strip()]

    if not lines or lines[0] != PROOF_HEADER:
        raise ProofFormatError(1, f"expected header '{PROOF_HEADER}'")

    table = AtomTable()
    steps: list[Step] = []

    for number, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")

        try:
            if len(fields) == 2:
                table.atoms[_atom(fields[1])] = int(fields[0])
                continue

            if len(fields) != 5:
                raise ValueError(f"expected 2 or 5 fields, got {len(fields)}")

            index, rule, premises, sequent, side = fields

            if int(index) != len(steps):
                raise ValueError(f"step {index} out of order")

            principal, term = None, None

            if side:
                formula_text, _, term_text = side.partition(" @ ")
                principal = parse(formula_text, internal=True)
                term = parse_term(term_text, internal=True) if term_text else None

            steps.append(
                Step(
                    _sequent(sequent),
                    rule,
                    tuple(int(p) for p in premises.split(",") if p),
                    principal,
                    term,
                )
            )
        except ValueError as exc:
            raise ProofFormatError(number, str(exc)) from exc

    return Proof(steps, table)
