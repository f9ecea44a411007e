import pytest

from knowing.cli import EXIT_ERROR, EXIT_UNKNOWN, EXIT_YES, main
from knowing.coding import encode
from knowing.parser import parse


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for key in ("RK_FORMAT", "RK_CACHE", "RK_RUN_BUDGET", "RK_PROVE_BUDGET"):
        monkeypatch.delenv(key, raising=False)


def test_parse_prints_canonical_form(capsys):
    assert main(["parse", "K(0=0)"]) == EXIT_YES
    assert capsys.readouterr().out.strip() == "K(0=0)"


def test_parse_records_carry_the_code(capsys):
    assert main(["parse", "0=0", "--format", "records"]) == EXIT_YES
    assert capsys.readouterr().out == f"0=0\t{encode(parse('0=0'))}\n"


def test_malformed_formula_is_an_error():
    assert main(["parse", "K(0="]) == EXIT_ERROR


def test_ground_instance_is_unknown():
    argv = ["prove", "--budget", "1000", "forall x K(x=x) -> K(S(0)=S(0))"]

    assert main(argv) == EXIT_UNKNOWN


def test_prove_writes_a_checkable_proof(tmp_path):
    proof = tmp_path / "proof.txt"

    assert main(["prove", "x=0 -> x=0", "--budget", "10000", "-o", str(proof)]) == 0
    assert main(["check", str(proof), "x=0 -> x=0"]) == EXIT_YES
    assert main(["check", str(proof), "y=0 -> y=0"]) == EXIT_ERROR


def test_run_and_trace(capsys):
    program = "(seq (emit (const 3)) (emit (const 1)))"

    assert main(["run", program, "--format", "records"]) == EXIT_YES
    assert capsys.readouterr().out == "1\n3\n"

    assert main(["trace", program, "--format", "records"]) == EXIT_YES
    lines = capsys.readouterr().out.splitlines()
    assert [line.split("\t")[1] for line in lines] == ["3", "1"]


def test_schema_membership():
    assert main(["schema", "E4", "--member", "K(0=0) -> K(K(0=0))"]) == EXIT_YES
    assert main(["schema", "E5"]) == EXIT_ERROR
