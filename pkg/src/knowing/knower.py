"""The knowing machine that knows its own index.

`build` takes the fixed point n of the transformer n -> f(n), where f(n) enumerates
the pairs <m, code(phi)> with sigma(n) |= phi(x|m). The machine knows a sentence when
sigma(n) entails it, and since line 3 of sigma(n) names n itself, the machine knows
that its knowledge is exactly what index n enumerates.

Knowledge queries only ever answer Yes or Unknown. Yes comes with a `Certificate`
that `check_certificate` re-checks from the proof checker and the schema recognizers
alone.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np
import polars as pl

from knowing.budget import Budget, as_budget
from knowing.coding import CODING_VERSION, decode, encode, pair, unpair
from knowing.compmodel.arith import membership_formula_for
from knowing.compmodel.construct import (
    compile_knowledge_enumerator,
    first_slice,
    fixpoint,
    knowledge_program,
    knowledge_transformer,
    overhead,
    second_slice,
    slice_overhead,
)
from knowing.compmodel.interpreter import run, trace
from knowing.compmodel.primitives import FETCH_INTERVAL, PRIMITIVE_VERSION, schedule
from knowing.config import Config
from knowing.exceptions import CertificateFormatError, NotASentenceError
from knowing.formula import (
    Assignment,
    Formula,
    Iff,
    Know,
    Num,
    PatternAtom,
    fill_slots,
    free_vars,
    ground,
    implication_chain,
    is_sentence,
    show,
    size,
    subst,
)
from knowing.logic.proof import (
    PROOF_HEADER,
    CheckResult,
    Proof,
    check_proof,
    deserialize,
    serialize,
)
from knowing.logic.prover import DOVETAIL_K
from knowing.logic.semantics import (
    BaseStructure,
    ThreeValued,
    evaluate,
    standard_structure,
)
from knowing.parser import parse
from knowing.schemata import (
    PEANO_AXIOMS,
    SchemaId,
    check_x_only,
    e2_instance,
    e3_instance,
    enumerate_schema,
    entails_sigma,
    induction_instance,
    is_instance,
    match_sigma_line3,
    sigma,
    sigma_line3,
)
from knowing.streams import formula_index


log = logging.getLogger(__name__)


CERTIFICATE_HEADER = "# knowing-certificate v1"

CACHE_COLUMNS = ("budget", "code", "sentence")

# Cache line recording the budget a run covered
COVERAGE_MARK = "-"

MEMBERSHIP = "schema-membership"
ENTAILMENT = "entailment"

_X_ONLY = frozenset({"x"})


def _frame(rows: list[dict], columns: list[str]) -> pl.DataFrame:
    return pl.DataFrame({name: [row[name] for row in rows] for name in columns})


#######################################################################################
# MACHINE


@dataclass(frozen=True)
class KnowerMachine:
    """The fixed-point machine.

    Attributes:
        n (int): Index with W_n = W_f(n).
        transformer (int): Index of the transformer n -> f(n).
        knowledge_program (int): Index of the enumerator f(n) is an s-m-n instance of.
        coding_version (str): Godel coding the machine's codes are read with.
        primitive_version (str): Primitive table its blueprints run against.
    """

    n: int
    transformer: int
    knowledge_program: int
    coding_version: str = CODING_VERSION
    primitive_version: str = PRIMITIVE_VERSION

    @property
    def sigma(self):
        return sigma(self.n)

    @property
    def enumerator(self) -> int:
        return compile_knowledge_enumerator(self.n)

    def digest(self) -> str:
        """Return a short hex digest of the index and its version pins."""
        text = f"{self.n}:{self.coding_version}:{self.primitive_version}"
        return hashlib.sha256(text.encode()).hexdigest()[:16]


@lru_cache(maxsize=1)
def build() -> KnowerMachine:
    """Return the knowing machine; deterministic for fixed version pins."""
    transformer = knowledge_transformer()
    machine = KnowerMachine(fixpoint(transformer), transformer, knowledge_program())
    bits = machine.n.bit_length()
    log.info("built machine %s, index of %d bits", machine.digest(), bits)

    return machine


def self_axiom(machine: KnowerMachine, formula: Formula) -> Formula:
    """Return forall x (K formula <-> <x, code(formula)> in W_n) for this machine's n.

    Raises:
        FreeVariableError: If FV(formula) does not lie within {x}.
    """
    return sigma_line3(machine.n, formula)


def embedded_index(sentence: Formula) -> int | None:
    """Return the index a self-reference axiom names, if `sentence` is one."""
    found = match_sigma_line3(sentence)

    return None if found is None else found[1]


#######################################################################################
# CERTIFICATES


@dataclass
class Certificate:
    """Checkable evidence that the machine knows `subject`.

    A membership certificate says `subject` is a line of sigma(n) and carries the
    recognizer's transcript. An entailment certificate carries a validity proof of
    `support -> subject` together with the support sentences, and optionally a budget
    at which the machine emits the subject's pair.

    Attributes:
        kind (str): Either "schema-membership" or "entailment".
        subject (Formula): The sentence known.
        n (int): Index of the machine.
        schema (str): Schema line, for membership certificates.
        transcript (list[str]): Recognizer transcript, for membership certificates.
        support (tuple[Formula, ...]): Axioms of sigma(n) the proof uses.
        proof (Proof, optional): Proof of the chain of support into subject.
        witness (tuple[int, int], optional): (budget, emitted code).
        coding_version (str): Godel coding pin.
        primitive_version (str): Primitive table pin.
    """

    kind: str
    subject: Formula
    n: int
    schema: str = ""
    transcript: list[str] = field(default_factory=list)
    support: tuple[Formula, ...] = ()
    proof: Proof | None = None
    witness: tuple[int, int] | None = None
    coding_version: str = CODING_VERSION
    primitive_version: str = PRIMITIVE_VERSION

    @property
    def chain(self) -> Formula:
        return implication_chain(self.support, self.subject)


def write_certificate(certificate: Certificate, config: Config | None = None) -> str:
    """Render a certificate as header records followed by its proof, if any."""
    config = Config() if config is None else config
    lines = [
        CERTIFICATE_HEADER,
        f"kind\t{certificate.kind}",
        f"n\t{certificate.n}",
        f"coding\t{certificate.coding_version}",
        f"primitives\t{certificate.primitive_version}",
        f"config\t{config.describe()}",
        f"subject\t{show(certificate.subject)}",
    ]

    if certificate.schema:
        lines.append(f"schema\t{certificate.schema}")

    lines += [f"transcript\t{entry}" for entry in certificate.transcript]
    lines += [f"support\t{show(sentence)}" for sentence in certificate.support]

    if certificate.witness is not None:
        lines.append(f"witness\t{certificate.witness[0]}\t{certificate.witness[1]}")

    text = "\n".join(lines) + "\n"

    if certificate.proof is not None:
        text += serialize(certificate.proof)

    return text


def read_certificate(text: str) -> Certificate:
    """Read a certificate back from `write_certificate` output.

    Raises:
        CertificateFormatError: If a header record is missing or malformed, or the
            proof part does not parse.
    """
    head, marker, rest = text.partition("\n" + PROOF_HEADER)
    lines = [line for line in head.splitlines() if line.strip()]

    if not lines or lines[0] != CERTIFICATE_HEADER:
        raise CertificateFormatError(f"expected header '{CERTIFICATE_HEADER}'")

    records: dict[str, list[str]] = {}

    for line in lines[1:]:
        key, tab, value = line.partition("\t")

        if not tab:
            raise CertificateFormatError(f"record without a value: '{line}'")

        records.setdefault(key, []).append(value)

    def one(key: str) -> str:
        if len(values := records.get(key, [])) != 1:
            raise CertificateFormatError(f"expected one '{key}' record")
        return values[0]

    try:
        n = int(one("n"))
        subject = parse(one("subject"), internal=True)
        support = tuple(parse(s, internal=True) for s in records.get("support", []))
        witness = None

        if "witness" in records:
            budget, code = one("witness").split("\t")
            witness = (int(budget), int(code))

        proof = deserialize(PROOF_HEADER + rest) if marker else None

    except CertificateFormatError:
        raise
    except ValueError as exc:
        raise CertificateFormatError(str(exc)) from exc

    kind = one("kind")

    if kind not in (MEMBERSHIP, ENTAILMENT):
        raise CertificateFormatError(f"unknown kind '{kind}'")

    return Certificate(
        kind,
        subject,
        n,
        schema=records.get("schema", [""])[0],
        transcript=records.get("transcript", []),
        support=support,
        proof=proof,
        witness=witness,
        coding_version=one("coding"),
        primitive_version=one("primitives"),
    )


def check_certificate(
    certificate: Certificate, machine: KnowerMachine, budget: Budget | int = 1 << 20
) -> CheckResult:
    """Re-check a certificate against `machine` without trusting its producer."""
    if certificate.n != machine.n:
        return CheckResult(False, None, "certificate names another index")

    pins = (certificate.coding_version, certificate.primitive_version)

    if pins != (machine.coding_version, machine.primitive_version):
        return CheckResult(False, None, f"version pins {pins} do not match")

    if not is_sentence(certificate.subject):
        return CheckResult(False, None, "subject is not a sentence")

    budget = as_budget(budget)

    if certificate.kind == MEMBERSHIP:
        if embedded_index(certificate.subject) != machine.n:
            return CheckResult(False, None, "subject does not name the machine")

        subject = certificate.subject
        verdict = is_instance(SchemaId.SIGMA_LINE3, subject, budget, machine.n)

        if verdict is not ThreeValued.TRUE:
            return CheckResult(False, None, f"recognizer says {verdict.value}")

        return CheckResult(True)

    if certificate.proof is None:
        return CheckResult(False, None, "entailment certificate without a proof")

    if not (result := check_proof(certificate.proof, certificate.chain)):
        return result

    share = budget.remaining // max(len(certificate.support), 1)

    for sentence in certificate.support:
        verdict = is_instance(SchemaId.SIGMA, sentence, budget.child(share), machine.n)

        if verdict is not ThreeValued.TRUE:
            return CheckResult(False, None, f"'{show(sentence)}' not recognized")

    if certificate.witness is not None:
        steps, code = certificate.witness

        if code not in run(machine.n, steps):
            return CheckResult(False, None, f"no emission of the witness in {steps}")

    return CheckResult(True)


#######################################################################################
# QUERIES


def knows(
    machine: KnowerMachine,
    sentence: Formula,
    budget: Budget | int,
    dovetail_k: int = DOVETAIL_K,
) -> Certificate | None:
    """Return a certificate that the machine knows `sentence`, or None for Unknown.

    Raises:
        NotASentenceError: If `sentence` has free variables.
    """
    if not is_sentence(sentence):
        raise NotASentenceError(show(sentence), free_vars(sentence))

    found = entails_sigma(machine.n, sentence, budget, dovetail_k)

    if found is None:
        log.debug("knows %s: unknown", show(sentence))
        return None

    log.info("knows %s with %d support axioms", show(sentence), len(found.support))

    return Certificate(
        ENTAILMENT, sentence, machine.n, support=found.support, proof=found.proof
    )


def attach_witness(
    certificate: Certificate, machine: KnowerMachine, budget: int
) -> Certificate:
    """Add the first emission of n within `budget` that instantiates the subject."""
    for record in knowledge_records(machine, budget):
        if record.instance == certificate.subject:
            certificate.witness = (record.step, record.code)
            break

    return certificate


def certify_self_knowledge(
    machine: KnowerMachine, formula: Formula, budget: Budget | int
) -> tuple[Certificate | None, Certificate | None]:
    """Return the certificates that the machine knows its own code for `formula`.

    The first says self_axiom(formula) is a line of sigma(n); the second that the
    machine knows K of it. Either is None when the budget runs out before it is
    established.

    Raises:
        FreeVariableError: If FV(formula) does not lie within {x}.
    """
    budget = as_budget(budget)
    axiom = self_axiom(machine, formula)
    probe = budget.child(budget.remaining // 4)
    verdict = is_instance(SchemaId.SIGMA_LINE3, axiom, probe, machine.n)
    transcript = [
        f"line 3 of sigma({machine.digest()})",
        f"formula {show(formula)}",
        f"code {encode(formula)}",
        f"index {embedded_index(axiom) == machine.n}",
        f"verdict {verdict.value}",
    ]
    known = knows(machine, Know(axiom), budget)

    if verdict is not ThreeValued.TRUE:
        log.info("line 3 for %s unconfirmed: %s", show(formula), verdict.value)
        return None, known

    membership = Certificate(
        MEMBERSHIP,
        axiom,
        machine.n,
        schema=SchemaId.SIGMA_LINE3.value,
        transcript=transcript,
    )

    return membership, known


#######################################################################################
# ENUMERATION


@dataclass(frozen=True)
class KnowledgeRecord:
    """One emission of the machine.

    Attributes:
        step (int): Interpreter step of the emission.
        code (int): The emitted value <m, code(formula)>.
        m (int): The instantiating numeral.
        formula (Formula): The formula, FV within {x}.
    """

    step: int
    code: int
    m: int
    formula: Formula

    @property
    def instance(self) -> Formula:
        return subst(self.formula, "x", Num(self.m))


def _record(step: int, code: int) -> KnowledgeRecord:
    m, formula_code = unpair(code)

    return KnowledgeRecord(step, code, m, decode(formula_code))


def knowledge_records(machine: KnowerMachine, budget: int) -> list[KnowledgeRecord]:
    """Return the emissions of n within `budget`, in emission order."""
    return [_record(step, code) for step, code in trace(machine.n, budget)]


def enumerate_knowledge(
    machine: KnowerMachine, budget: int, cache: Path | None = None
) -> set[tuple[int, Formula]]:
    """Return the pairs (m, phi) the machine emits within `budget`.

    With a `cache`, a run the cache already covers is replayed from it and any new run
    is appended to it.
    """
    if cache is not None and (covered := cache_coverage(cache)) >= budget:
        log.info("replaying %s (covers %d steps)", cache, covered)
        records = [r for r in read_cache(cache) if r.step <= budget]
    else:
        records = knowledge_records(machine, budget)

        if cache is not None:
            append_cache(cache, records, budget)

    return {(record.m, record.formula) for record in records}


def confirm(
    machine: KnowerMachine, m: int, formula: Formula, budget: Budget | int
) -> bool:
    """Return whether sigma(n) entails formula(x|m) within `budget`."""
    return entails_sigma(machine.n, subst(formula, "x", Num(m)), budget) is not None


def _attempts(last: int) -> Iterator[tuple[int, int, int]]:
    # Mirrors the loop of the knowledge enumerator: attempt i is <j, r>
    for attempt in range(last + 1):
        position, round_number = unpair(attempt)
        m, index = unpair(position)
        yield m, index, round_number


def _attempt_cost(index: int, round_number: int) -> int:
    formula = formula_index(_X_ONLY)[index]

    return 32 + 1 + index + size(formula) + schedule(round_number)


def knowledge_agreement(
    machine: KnowerMachine,
    run_budget: int,
    confirm_budget: int,
    candidates: int = 8,
) -> pl.DataFrame:
    """Compare the machine's emissions with direct entailment checks.

    Every pair in run(n, run_budget) must be confirmed at `confirm_budget`. Every pair
    that entails_sigma confirms on one of the enumerator's attempts up to
    <candidates - 1, 0>, at the budget of that attempt's round, must appear in run(n)
    at the overhead of those attempts.
    """
    rows = []

    for m, formula in sorted(enumerate_knowledge(machine, run_budget), key=repr):
        confirmed = confirm(machine, m, formula, confirm_budget)
        rows.append(_agreement_row("emitted", m, formula, confirmed))

    last = pair(candidates - 1, 0)
    reach = overhead(sum(_attempt_cost(j, r) for _, j, r in _attempts(last)))
    emitted = run(machine.n, reach)

    for m, index, round_number in _attempts(last):
        formula = formula_index(_X_ONLY)[index]
        goal = subst(formula, "x", Num(m))
        attempt = schedule(round_number)

        if entails_sigma(machine.n, goal, attempt, FETCH_INTERVAL) is not None:
            present = pair(m, encode(formula)) in emitted
            rows.append(_agreement_row("confirmed", m, formula, present))

    frame = _frame(rows, ["direction", "m", "formula", "agrees"])
    log.info("knowledge agreement: %d rows", frame.height)

    return frame


def _agreement_row(direction: str, m: int, formula: Formula, agrees: bool):
    return {"direction": direction, "m": m, "formula": show(formula), "agrees": agrees}


#######################################################################################
# KNOWLEDGE CACHE


def _cache_lines(records: Iterable[KnowledgeRecord]) -> Iterator[str]:
    for record in records:
        yield f"{record.step}\t{record.code}\t{show(record.instance)}"


def append_cache(path: Path, records: Sequence[KnowledgeRecord], covered: int) -> None:
    """Append records newer than the cache's coverage, then mark `covered`.

    The cache is single-writer: concurrent appends are not guarded.
    """
    already = cache_coverage(path)
    new = [r for r in records if r.step > already]

    with open(path, "a", encoding="utf8") as stream:
        if stream.tell() == 0:
            stream.write("\t".join(CACHE_COLUMNS) + "\n")

        for line in _cache_lines(new):
            stream.write(line + "\n")

        stream.write(f"{covered}\t{COVERAGE_MARK}\t{COVERAGE_MARK}\n")

    log.info("cached %d records in %s", len(new), path)


def _cache_frame(path: Path) -> pl.DataFrame:
    return pl.read_csv(
        path,
        sep="\t",
        quote_char=None,
        dtypes={"budget": pl.Int64, "code": pl.Utf8, "sentence": pl.Utf8},
    )


def cache_coverage(path: Path) -> int:
    """Return the largest budget a cached run covered, 0 for no cache."""
    if not Path(path).exists():
        return 0

    marks = _cache_frame(path).filter(pl.col("code") == COVERAGE_MARK)

    return int(marks["budget"].max()) if marks.height else 0


def read_cache(path: Path) -> list[KnowledgeRecord]:
    """Replay the records of a knowledge cache in emission order.

    Raises:
        NotACodeError: If a cached code does not decode.
    """
    frame = _cache_frame(path).filter(pl.col("code") != COVERAGE_MARK).sort("budget")

    return [
        _record(step, int(code))
        for step, code in zip(frame["budget"].to_list(), frame["code"].to_list())
    ]


#######################################################################################
# SLICES


def _slice_report(
    machine: KnowerMachine,
    index: int,
    expected_of: Callable[[frozenset[int]], set[int]],
    budgets: Iterable[int],
) -> pl.DataFrame:
    rows = []

    for budget in budgets:
        extended = slice_overhead(budget)
        expected = expected_of(run(machine.n, budget))
        emitted = run(index, budget)
        rows.append(
            {
                "budget": budget,
                "slice": len(expected),
                "witness": len(emitted),
                "missing": len(expected - run(index, extended)),
                "extra": len(emitted - expected_of(run(machine.n, extended))),
            }
        )

    return _frame(rows, ["budget", "slice", "witness", "missing", "extra"])


def reinhardt_witness(
    machine: KnowerMachine, formula: Formula, budgets: Iterable[int] = (1_000, 10_000)
) -> tuple[int, pl.DataFrame]:
    """Return e with W_e = { m : <m, code(formula)> in W_n } and a staged report.

    The report compares run(e, b) with the slice of run(n, b) at each budget b, each
    side against the other side at `slice_overhead(b)`; a `missing` or `extra` count
    above zero is a mismatch.

    Raises:
        FreeVariableError: If FV(formula) does not lie within {x}.
    """
    check_x_only(formula)
    code = encode(formula)
    index = second_slice(machine.n, code)

    def expected(emitted: frozenset[int]) -> set[int]:
        return {m for m, c in map(unpair, emitted) if c == code}

    report = _slice_report(machine, index, expected, budgets)
    log.info("witness for %s: %d mismatches", show(formula), mismatches(report))

    return index, report


def sentence_slice(
    machine: KnowerMachine, budgets: Iterable[int] = (1_000, 10_000)
) -> tuple[int, pl.DataFrame]:
    """Return m with W_m = { code(phi) : <0, code(phi)> in W_n } and a staged report."""
    index = first_slice(machine.n, 0)

    def expected(emitted: frozenset[int]) -> set[int]:
        return {c for m, c in map(unpair, emitted) if m == 0}

    return index, _slice_report(machine, index, expected, budgets)


def sentence_slice_instance(formula: Formula, index: int) -> Formula:
    """Return K(K formula <-> code(formula) in W_index) for a sentence `formula`.

    Raises:
        NotASentenceError: If `formula` has free variables.
    """
    if not is_sentence(formula):
        raise NotASentenceError(show(formula), free_vars(formula))

    membership = membership_formula_for(Num(encode(formula)), Num(index))

    return Know(Iff(Know(formula), membership))


def mismatches(report: pl.DataFrame) -> int:
    """Return the total of the missing and extra counts of a slice report."""
    return int((report["missing"].sum() or 0) + (report["extra"].sum() or 0))


#######################################################################################
# AUDITS


def knowledge_structure(
    machine: KnowerMachine, budget: int, run_budget: int = 10_000
) -> BaseStructure:
    """Return the standard model with K decided by budgeted entailment from sigma(n).

    A K-formula is True when sigma(n) entails its grounded body within `budget` and
    Unknown otherwise.
    """
    verdicts: dict[tuple[PatternAtom, tuple[int, ...]], ThreeValued] = {}

    def oracle(atom: PatternAtom, values: tuple[int, ...]) -> ThreeValued:
        key = (atom, values)

        if key not in verdicts:
            known = fill_slots(atom, [Num(v) for v in values])
            assert isinstance(known, Know)
            found = entails_sigma(machine.n, known.body, budget)
            verdicts[key] = ThreeValued.TRUE if found else ThreeValued.UNKNOWN

        return verdicts[key]

    return BaseStructure(oracle, f"knowledge-{machine.digest()}", run_budget=run_budget)


def factivity_audit(
    machine: KnowerMachine,
    sample: int,
    budget: int,
    run_budget: int = 10_000,
    bound: int = 25,
    probes: int = 3,
) -> tuple[pl.DataFrame, pl.DataFrame]:
    """Evaluate known sentences in the standard model and probe knowledge of E3.

    Returns:
        tuple[pl.DataFrame, pl.DataFrame]: One row per known sentence with its
            bounded verdict, where a False is a factivity violation; and one row per
            K-closed E3 instance over a false sentence, with whether the machine
            came to know it within `budget`. An unknown E3 instance is an
            observation, not a disproof.
    """
    structure = knowledge_structure(machine, budget)
    records = knowledge_records(machine, run_budget)[:sample]
    known = [
        {
            "sentence": show(record.instance),
            "verdict": evaluate(structure, record.instance, bound=bound).value,
        }
        for record in records
    ]
    verdicts = _frame(known, ["sentence", "verdict"])

    standard = standard_structure()
    false_sentences = (
        sentence
        for sentence in formula_index(frozenset())
        if evaluate(standard, sentence, bound=bound) is ThreeValued.FALSE
    )
    e3 = []

    for sentence in itertools.islice(false_sentences, probes):
        probe = Know(e3_instance(sentence))
        found = knows(machine, probe, budget)
        e3.append({"sentence": show(probe), "known": found is not None})

    observations = _frame(e3, ["sentence", "known"])

    violations = verdicts.filter(pl.col("verdict") == ThreeValued.FALSE.value).height
    log.info(
        "factivity audit: %d sentences, %d violations, %d E3 instances known",
        verdicts.height,
        violations,
        sum(row["known"] for row in e3),
    )

    return verdicts, observations


def e4_echo(
    machine: KnowerMachine,
    sentences: Iterable[Formula],
    budget: int,
    factor: int = 100,
) -> pl.DataFrame:
    """Check that sentences known at `budget` are known under K within factor * budget.

    K phi is tried at doubling budgets from `budget` up to `factor * budget`; the
    `lifted_at` column holds the first budget that worked, or null.
    """
    rows = []

    for sentence in sentences:
        if knows(machine, sentence, budget) is None:
            continue

        lifted_at = None
        attempt = budget

        while attempt <= factor * budget:
            if knows(machine, Know(sentence), attempt) is not None:
                lifted_at = attempt
                break
            attempt *= 2

        rows.append({"sentence": show(sentence), "lifted_at": lifted_at})

    return _frame(rows, ["sentence", "lifted_at"])


def _lemma_row(lemma: str, sample: Formula, verdict: ThreeValued, failed: bool):
    outcome = "fail" if failed else ("pass" if verdict.definite else "unknown")
    return {
        "lemma": lemma,
        "sample": show(sample),
        "verdict": verdict.value,
        "outcome": outcome,
    }


def lemma_checks(
    machine: KnowerMachine,
    samples: int = 20,
    budget: int = 10_000,
    bound: int = 10,
    seed: int = 0,
) -> pl.DataFrame:
    """Sample the facts the model construction rests on.

    Grounding agreement compares phi at s with ground(phi, s) under the knowledge
    oracle. E2 closure and the axioms of arithmetic must not be False in that
    structure, nor in the standard model. Assigned-validity emissions must not be
    False. A row fails only on a definite contradiction.
    """
    rng = np.random.default_rng(seed)
    structure = knowledge_structure(machine, budget)
    standard = standard_structure()
    rows = []

    for position in rng.integers(0, 64, size=samples):
        formula = formula_index()[int(position)]
        names = sorted(free_vars(formula))
        values = [int(v) for v in rng.integers(0, 3, size=len(names))]
        assignment = Assignment(dict(zip(names, values)))
        at_s = evaluate(structure, formula, assignment, bound)
        grounded = evaluate(structure, ground(formula, assignment), bound=bound)
        failed = at_s.definite and grounded.definite and at_s is not grounded
        rows.append(_lemma_row("grounding", formula, at_s, failed))

    sentences = formula_index(frozenset())

    for first, second in rng.integers(0, 32, size=(max(samples // 4, 1), 2)):
        instance = e2_instance(sentences[int(first)], sentences[int(second)])
        verdict = evaluate(structure, instance, bound=bound)
        rows.append(
            _lemma_row("e2-closure", instance, verdict, verdict is ThreeValued.FALSE)
        )

    arithmetic = list(PEANO_AXIOMS) + [
        induction_instance(formula_index(frozenset({"x"}))[i], "x") for i in range(4)
    ]

    for axiom in arithmetic:
        verdict = evaluate(standard, axiom, bound=bound)
        rows.append(_lemma_row("pa", axiom, verdict, verdict is ThreeValued.FALSE))

    validity = enumerate_schema(SchemaId.ASSIGNED_VALIDITY, budget)[:samples]

    for sentence in validity:
        verdict = evaluate(standard, sentence, bound=bound)
        rows.append(
            _lemma_row(
                "assigned-validity", sentence, verdict, verdict is ThreeValued.FALSE
            )
        )

    frame = _frame(rows, ["lemma", "sample", "verdict", "outcome"])
    log.info(
        "lemma checks: %d rows, %d failures",
        frame.height,
        frame.filter(pl.col("outcome") == "fail").height,
    )

    return frame
