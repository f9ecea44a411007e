from dataclasses import replace

import polars as pl
import pytest

from knowing.coding import encode
from knowing.compmodel.arith import pair_membership_for
from knowing.compmodel.construct import fixpoint, knowledge_transformer, overhead
from knowing.exceptions import (
    CertificateFormatError,
    FreeVariableError,
    NotASentenceError,
)
from knowing.formula import Forall, Iff, Know, Num, Var, is_sentence
from knowing.knower import (
    attach_witness,
    build,
    cache_coverage,
    certify_self_knowledge,
    check_certificate,
    e4_echo,
    embedded_index,
    enumerate_knowledge,
    factivity_audit,
    knowledge_agreement,
    knowledge_records,
    knows,
    lemma_checks,
    mismatches,
    read_cache,
    read_certificate,
    reinhardt_witness,
    self_axiom,
    sentence_slice,
    sentence_slice_instance,
    write_certificate,
)
from knowing.logic.semantics import ThreeValued
from knowing.parser import parse
from knowing.schemata import sigma_line3


X_EQUALS_X = parse("x=x")

# The fixed point spends its first steps computing f(n)
REACH = overhead(1_000)


def test_build_is_deterministic(machine):
    build.cache_clear()

    assert build().n == machine.n
    assert machine.n == fixpoint(knowledge_transformer())
    assert build().digest() == machine.digest()


def test_self_axiom(machine):
    axiom = self_axiom(machine, X_EQUALS_X)
    membership = pair_membership_for(Var("x"), Num(encode(X_EQUALS_X)), Num(machine.n))

    assert axiom == Forall("x", Iff(Know(X_EQUALS_X), membership))
    assert embedded_index(axiom) == machine.n
    assert embedded_index(X_EQUALS_X) is None

    with pytest.raises(FreeVariableError):
        self_axiom(machine, parse("x=y"))


def test_knows_its_own_lines(machine):
    axiom = self_axiom(machine, X_EQUALS_X)
    known = knows(machine, axiom, 10_000)

    assert known is not None
    assert known.support == (axiom,)
    assert knows(machine, Know(axiom), 10_000) is not None


def test_false_equation_stays_unknown(machine):
    assert knows(machine, parse("0=S(0)"), 10_000) is None


def test_knowledge_needs_a_sentence(machine):
    with pytest.raises(NotASentenceError):
        knows(machine, parse("x=0"), 10_000)


def test_certificates_check(machine):
    membership, known = certify_self_knowledge(machine, X_EQUALS_X, 100_000)

    assert known is not None
    assert known.subject == Know(membership.subject)
    assert check_certificate(membership, machine)
    assert check_certificate(known, machine)
    assert membership.transcript[-1] == f"verdict {ThreeValued.TRUE.value}"


def test_unconfirmed_lines_get_no_certificate(machine, monkeypatch):
    monkeypatch.setattr("knowing.knower.is_instance", lambda *args: ThreeValued.UNKNOWN)
    membership, _ = certify_self_knowledge(machine, X_EQUALS_X, 100_000)

    assert membership is None


def test_tampered_certificates_fail(machine):
    membership, known = certify_self_knowledge(machine, X_EQUALS_X, 100_000)
    other = sigma_line3(machine.n + 1, X_EQUALS_X)

    assert not check_certificate(replace(membership, n=machine.n + 1), machine)
    assert not check_certificate(replace(membership, subject=other), machine)
    assert not check_certificate(replace(known, subject=Know(other)), machine)
    assert not check_certificate(replace(known, coding_version="godel-v0"), machine)


def test_certificates_read_back(machine):
    membership, known = certify_self_knowledge(machine, X_EQUALS_X, 100_000)

    for certificate in (membership, known):
        text = write_certificate(certificate)
        restored = read_certificate(text)

        assert text.startswith("# knowing-certificate v1\n")
        assert restored.subject == certificate.subject
        assert restored.support == certificate.support
        assert check_certificate(restored, machine)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "not a certificate\n",
        "# knowing-certificate v1\nkind\tentailment\nsubject\t0=0\n",
        "# knowing-certificate v1\nkind\tguess\nn\t1\ncoding\tgodel-v1\n"
        "primitives\tprim-v1\nsubject\t0=0\n",
    ],
)
def test_malformed_certificates(text):
    with pytest.raises(CertificateFormatError):
        read_certificate(text)


def test_lifting_echo(machine):
    axiom = self_axiom(machine, X_EQUALS_X)
    report = e4_echo(machine, [axiom], 10_000)

    assert report.height == 1
    assert report["lifted_at"].to_list() == [10_000]


def test_sentence_slice_instance():
    instance = sentence_slice_instance(parse("0=0"), 5)

    assert is_sentence(instance)
    assert isinstance(instance, Know)

    with pytest.raises(NotASentenceError):
        sentence_slice_instance(X_EQUALS_X, 5)


@pytest.mark.slow
def test_enumerates_reflexivity(machine):
    assert (0, X_EQUALS_X) in enumerate_knowledge(machine, REACH)


@pytest.mark.slow
def test_emissions_are_confirmed(machine):
    report = knowledge_agreement(machine, REACH, 1_000_000)

    assert set(report["direction"].to_list()) == {"emitted", "confirmed"}
    assert report.filter(~pl.col("agrees")).height == 0


@pytest.mark.slow
def test_witnessed_certificates(machine):
    record = knowledge_records(machine, REACH)[0]
    certificate = knows(machine, record.instance, 10_000)
    certificate = attach_witness(certificate, machine, REACH)

    assert certificate.witness == (record.step, record.code)
    assert check_certificate(certificate, machine)
    assert check_certificate(read_certificate(write_certificate(certificate)), machine)


@pytest.mark.slow
def test_cache_replays_runs(machine, tmp_path):
    cache = tmp_path / "knowledge.tsv"

    assert cache_coverage(cache) == 0

    fresh = enumerate_knowledge(machine, REACH, cache=cache)

    assert cache_coverage(cache) == REACH
    assert enumerate_knowledge(machine, REACH, cache=cache) == fresh
    assert [r.code for r in read_cache(cache)] == [
        r.code for r in knowledge_records(machine, REACH)
    ]


@pytest.mark.slow
def test_slices_agree_with_the_machine(machine):
    witness, report = reinhardt_witness(machine, X_EQUALS_X, budgets=(20_000,))
    sentences, sentence_report = sentence_slice(machine, budgets=(20_000,))

    assert witness != sentences
    assert mismatches(report) == 0
    assert mismatches(sentence_report) == 0


@pytest.mark.slow
def test_known_sentences_are_true(machine):
    verdicts, observations = factivity_audit(machine, 10, 10_000, REACH, bound=10)

    assert verdicts.height > 0
    assert verdicts.filter(pl.col("verdict") == ThreeValued.FALSE.value).height == 0
    assert observations.height == 3


@pytest.mark.slow
def test_lemma_samples_hold(machine):
    report = lemma_checks(machine, samples=4, budget=2_000, bound=5)

    assert set(report["lemma"].to_list()) >= {"grounding", "e2-closure", "pa"}
    assert report.filter(pl.col("outcome") == "fail").height == 0
