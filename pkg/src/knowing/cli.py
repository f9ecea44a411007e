"""Command-line interface.

Every command reads a `Config` built from the environment and the global flags, and
exits 0 on success or Yes, 2 on Unknown and 1 on error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Iterable, Sequence

import polars as pl
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from knowing.coding import decode, encode, pair, unpair
from knowing.compmodel.blueprint import (
    Const,
    Emit,
    Seq,
    encode_blueprint,
    parse_blueprint,
)
from knowing.compmodel.construct import (
    apply_transformer,
    constant_transformer,
    fixpoint,
    overhead,
    quine_transformer,
    random_transformer,
)
from knowing.compmodel.interpreter import run, trace
from knowing.config import OUTPUT_FORMATS, Config
from knowing.formula import Assignment, ground, is_sentence, pattern, peel_know, show
from knowing.knower import (
    CERTIFICATE_HEADER,
    build,
    certify_self_knowledge,
    check_certificate,
    e4_echo,
    embedded_index,
    enumerate_knowledge,
    factivity_audit,
    knowledge_agreement,
    knowledge_records,
    knows,
    read_certificate,
    write_certificate,
)
from knowing.logic.proof import check_proof, deserialize, serialize
from knowing.logic.prover import entails, enumerate_theorems, prove_valid
from knowing.logic.semantics import (
    ThreeValued,
    constrained_structure,
    evaluate,
    random_pattern_structure,
)
from knowing.parser import parse
from knowing.schemata import AxiomSet, SchemaId, enumerate_schema, is_instance, schema
from knowing.streams import formula_index


log = logging.getLogger(__name__)


#######################################################################################
# CONSOLE


CONSOLE = Console()

ERROR_CONSOLE = Console(stderr=True)

EXIT_YES = 0
EXIT_ERROR = 1
EXIT_UNKNOWN = 2

# Budget setting each command's --budget overrides
_BUDGET_FIELDS = {
    "prove": "prove_budget",
    "entails": "entails_budget",
    "knows": "knows_budget",
    "certify": "knows_budget",
    "run": "run_budget",
    "trace": "run_budget",
    "enumerate": "run_budget",
    "schema": "theorem_budget",
}


def _configure_logging(verbosity: int) -> None:
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(verbosity, 2)]
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=ERROR_CONSOLE, show_path=False)],
    )


def _emit(lines: Iterable[str], args: argparse.Namespace, config: Config) -> None:
    """Write lines to --output, or to the terminal."""
    text = "".join(f"{line}\n" for line in lines)

    if args.output:
        Path(args.output).write_text(text, encoding="utf8")
        log.info("wrote %s", args.output)
    elif config.output_format == "records":
        sys.stdout.write(text)
    else:
        CONSOLE.print(text, end="", markup=False, highlight=False)


def _unknown(what: str) -> int:
    CONSOLE.print(f"[bold yellow]Unknown[/]: {what}")
    return EXIT_UNKNOWN


#######################################################################################
# COMMANDS


def command_parse(args: argparse.Namespace, config: Config) -> int:
    formula = parse(args.formula)

    if config.output_format == "records":
        _emit([f"{show(formula)}\t{encode(formula)}"], args, config)
    else:
        _emit([show(formula)], args, config)

    return EXIT_YES


def command_prove(args: argparse.Namespace, config: Config) -> int:
    formula = parse(_strip_label(args.formula))
    proof = prove_valid(formula, config.prove_budget)

    if proof is None:
        return _unknown(f"no proof within {config.prove_budget} steps")

    _emit(serialize(proof).splitlines(), args, config)

    return EXIT_YES


def command_entails(args: argparse.Namespace, config: Config) -> int:
    axioms = AxiomSet.finite(0, "given", [parse(text) for text in args.axiom])
    goal = parse(args.goal)
    found = entails(axioms, goal, config.entails_budget, dovetail_k=config.dovetail_k)

    if found is None:
        return _unknown(f"no derivation within {config.entails_budget} steps")

    lines = [f"support\t{show(s)}" for s in found.support]
    _emit(lines + serialize(found.proof).splitlines(), args, config)

    return EXIT_YES


def command_check(args: argparse.Namespace, config: Config) -> int:
    text = Path(args.file).read_text(encoding="utf8")

    if text.startswith(CERTIFICATE_HEADER):
        result = check_certificate(read_certificate(text), build(), config.knows_budget)
    else:
        if args.formula is None:
            ERROR_CONSOLE.print("check: a proof file needs the formula it proves")
            return EXIT_ERROR

        result = check_proof(deserialize(text), parse(args.formula, internal=True))

    if not result:
        step = result.bad_step
        ERROR_CONSOLE.print(f"[bold red]Rejected[/] at step {step}: ", end="")
        ERROR_CONSOLE.print(result.reason, markup=False)
        return EXIT_ERROR

    CONSOLE.print("[bold green]Checks[/]")

    return EXIT_YES


def command_schema(args: argparse.Namespace, config: Config) -> int:
    family = schema(args.schema, args.index)

    if args.member is not None:
        member = parse(args.member)
        verdict = is_instance(args.schema, member, config.theorem_budget, args.index)
        CONSOLE.print(f"{family.name}: {verdict.value}")
        return EXIT_YES if verdict is ThreeValued.TRUE else EXIT_UNKNOWN

    sentences = enumerate_schema(args.schema, config.theorem_budget, args.index)
    _emit((f"{family.name}\t{show(s)}" for s in sentences), args, config)

    return EXIT_YES


def _blueprint_index(text: str) -> int:
    if text.strip().isdigit():
        return int(text)

    return encode_blueprint(parse_blueprint(text))


def command_run(args: argparse.Namespace, config: Config) -> int:
    values = run(_blueprint_index(args.blueprint), config.run_budget, args.input)
    _emit((str(v) for v in sorted(values)), args, config)

    return EXIT_YES


def command_trace(args: argparse.Namespace, config: Config) -> int:
    records = trace(_blueprint_index(args.blueprint), config.run_budget, args.input)
    _emit((f"{step}\t{value}" for step, value in records), args, config)

    return EXIT_YES


def command_build(args: argparse.Namespace, config: Config) -> int:
    machine = build()
    _emit([f"n\t{machine.n}", f"digest\t{machine.digest()}"], args, config)

    return EXIT_YES


def command_knows(args: argparse.Namespace, config: Config) -> int:
    machine = build()
    certificate = knows(
        machine, parse(args.sentence), config.knows_budget, config.dovetail_k
    )

    if certificate is None:
        return _unknown(f"not known within {config.knows_budget} steps")

    CONSOLE.print("[bold green]Yes[/]")
    _emit(write_certificate(certificate, config).splitlines(), args, config)

    return EXIT_YES


def command_enumerate(args: argparse.Namespace, config: Config) -> int:
    machine = build()
    budget = _reach(config, args.quick)

    if config.cache_path is not None:
        enumerate_knowledge(machine, budget, config.cache_path)
        lines = Path(config.cache_path).read_text(encoding="utf8").splitlines()
    else:
        records = knowledge_records(machine, budget)
        lines = [f"{r.step}\t{r.code}\t{show(r.instance)}" for r in records]

    _emit(lines, args, config)

    return EXIT_YES


def command_certify(args: argparse.Namespace, config: Config) -> int:
    machine = build()
    membership, known = certify_self_knowledge(
        machine, parse(args.formula), config.knows_budget
    )
    prefix = args.output or "certificate"

    for number, certificate in enumerate((membership, known), start=1):
        if certificate is None:
            return _unknown(f"certificate {number} not found within budget")

        path = Path(f"{prefix}-{number}.txt")
        path.write_text(write_certificate(certificate, config), encoding="utf8")
        CONSOLE.print(f"certificate {number}: {path}")

    return EXIT_YES


def _strip_label(text: str) -> str:
    # "name: formula" labels a formula on the command line
    label, colon, rest = text.partition(":")
    return rest if colon and label.strip().isidentifier() else text


#######################################################################################
# SELFTEST


Check = Callable[[Config, bool], tuple[bool, str]]


def _check_grounding(config: Config, quick: bool) -> tuple[bool, str]:
    shown = show(ground(parse("x=y"), Assignment({"x": 0, "y": 2})))
    return shown == "0=S(S(0))", shown


def _check_coding(config: Config, quick: bool) -> tuple[bool, str]:
    side, span, formulas = (50, 2_000, 500) if quick else (200, 40_000, 10_000)
    pairs = all(unpair(pair(a, b)) == (a, b) for a in range(side) for b in range(side))
    onto = all(pair(*unpair(k)) == k for k in range(span))
    stream = formula_index()
    codec = all(decode(encode(stream[i])) == stream[i] for i in range(formulas))

    return pairs and onto and codec, f"pairs {pairs}, onto {onto}, codec {codec}"


def _check_validity_pair(config: Config, quick: bool) -> tuple[bool, str]:
    budget = 10_000 if quick else config.prove_budget
    positive = prove_valid(parse("x=y -> (K(z=x) <-> K(z=y))"), config.prove_budget)
    negative = parse("forall x K(x=x) -> K(S(0)=S(0))")
    unknown = prove_valid(negative, budget) is None

    general, _ = pattern(parse("K(x=x)"))
    instance, _ = pattern(parse("K(S(0)=S(0))"))
    countermodel = constrained_structure(config.seed, {general: True, instance: False})
    refuted = evaluate(countermodel, parse("K(S(0)=S(0))")) is ThreeValued.FALSE
    holds = evaluate(countermodel, parse("forall x K(x=x)"), bound=config.eval_bound)

    found = positive is not None
    ok = found and unknown and refuted and not holds.definite
    return ok, f"proof {found}, unknown {unknown}, countermodel {refuted}"


def _check_soundness(config: Config, quick: bool) -> tuple[bool, str]:
    budget, structures, bound = (10_000, 5, 10) if quick else (100_000, 50, 25)
    theorems = enumerate_theorems(None, budget)
    false = [
        theorem
        for seed in range(structures)
        for theorem in theorems
        if evaluate(random_pattern_structure(config.seed + seed), theorem, bound=bound)
        is ThreeValued.FALSE
    ]

    return not false, f"{len(theorems)} theorems, {len(false)} definite False"


def _check_sigma(config: Config, quick: bool) -> tuple[bool, str]:
    machine = build()
    budget, coherence = (20_000, 20) if quick else (config.theorem_budget * 10, 200)
    emitted = enumerate_schema(SchemaId.SIGMA, budget, machine.n)
    sentences = all(is_sentence(s) for s in emitted)
    incoherent = [
        s
        for s in emitted[:coherence]
        if is_instance(SchemaId.SIGMA, s, 100_000, machine.n) is ThreeValued.FALSE
    ]
    e3_only = [
        s
        for s in emitted
        if peel_know(s)[0] >= 1
        and is_instance(SchemaId.E3, peel_know(s)[1], 1_000) is ThreeValued.TRUE
        and is_instance(SchemaId.K_CLOSURE, s, 100_000) is not ThreeValued.TRUE
    ]

    ok = sentences and not incoherent and not e3_only
    counts = f"{len(emitted)} emissions, {len(incoherent)} incoherent"
    return ok, f"{counts}, {len(e3_only)} E3 only"


def _check_recursion(config: Config, quick: bool) -> tuple[bool, str]:
    budget, transformers = (1_000, 3) if quick else (1_000, 10)
    quine = fixpoint(quine_transformer())
    quine_ok = run(quine, overhead(budget)) == {quine}

    emitter = encode_blueprint(Seq((Emit(Const(1)), Emit(Const(2)))))
    constant = fixpoint(constant_transformer(emitter))
    constant_ok = run(constant, overhead(budget)) == {1, 2}

    mismatches = 0

    for seed in range(transformers):
        transformer = random_transformer(config.seed + seed)
        n = fixpoint(transformer)
        image = apply_transformer(transformer, n)
        reach = overhead(budget)
        emitted = run(n, reach)
        mismatches += len(run(image, budget) - emitted)
        mismatches += len(emitted - run(image, reach))

    ok = quine_ok and constant_ok and not mismatches
    return ok, f"quine {quine_ok}, constant {constant_ok}, {mismatches} mismatches"


def _reach(config: Config, quick: bool) -> int:
    # n spends its first steps computing f(n)
    return overhead(1_000 if quick else config.run_budget)


def _check_machine(config: Config, quick: bool) -> tuple[bool, str]:
    machine = build()
    reach = _reach(config, quick)
    build.cache_clear()
    stable = build().n == machine.n
    confirm_budget = 10_000 if quick else config.prove_budget
    report = knowledge_agreement(machine, reach, confirm_budget)
    disagreements = report.filter(~pl.col("agrees")).height if report.height else 0
    found = (0, parse("x=x")) in enumerate_knowledge(machine, reach)

    ok = stable and found and not disagreements
    return ok, f"stable {stable}, (0, x=x) {found}, {disagreements} disagreements"


def _check_certificates(config: Config, quick: bool) -> tuple[bool, str]:
    machine = build()
    formulas = ["x=x"] if quick else ["x=x", "x=0", "K(x=x)", "0=0"]
    failures = []

    for text in formulas:
        membership, known = certify_self_knowledge(
            machine, parse(text), config.knows_budget
        )

        if membership is None or known is None:
            failures.append(text)
            continue

        checks = [
            embedded_index(membership.subject) == machine.n,
            bool(check_certificate(membership, machine)),
            bool(check_certificate(known, machine)),
        ]

        if not all(checks):
            failures.append(text)

    return not failures, f"{len(formulas)} formulas, failures {failures}"


def _check_e4(config: Config, quick: bool) -> tuple[bool, str]:
    machine = build()
    count = 2 if quick else 10
    records = knowledge_records(machine, _reach(config, quick))
    sentences = list(dict.fromkeys(r.instance for r in records))[:count]
    report = e4_echo(machine, sentences, 10_000)
    lifted = report["lifted_at"].is_not_null().sum() if report.height else 0

    return lifted == report.height, f"{lifted} of {report.height} lifted"


def _check_factivity(config: Config, quick: bool) -> tuple[bool, str]:
    sample, budget = (20, 10_000) if quick else (200, config.knows_budget)
    verdicts, observations = factivity_audit(
        build(), sample, budget, _reach(config, quick), config.eval_bound
    )
    false = verdicts.filter(pl.col("verdict") == ThreeValued.FALSE.value).height
    known = observations["known"].sum() if observations.height else 0

    return not false, f"{verdicts.height} sentences, {false} False, {known} E3 known"


SELFTESTS: dict[str, Check] = {
    "grounding": _check_grounding,
    "pairing and codec": _check_coding,
    "validity pair": _check_validity_pair,
    "soundness battery": _check_soundness,
    "sigma integrity": _check_sigma,
    "recursion theorem": _check_recursion,
    "fixed-point machine": _check_machine,
    "self-knowledge certificates": _check_certificates,
    "E4 echo": _check_e4,
    "factivity audit": _check_factivity,
}


def command_selftest(args: argparse.Namespace, config: Config) -> int:
    results: list[tuple[str, bool, str]] = []
    progress = Progress(
        TimeElapsedColumn(),
        BarColumn(),
        TextColumn("{task.description}"),
        console=ERROR_CONSOLE,
    )

    with progress:
        task = progress.add_task("selftest", total=len(SELFTESTS))

        for name, check in SELFTESTS.items():
            progress.update(task, description=name)
            ok, detail = check(config, args.quick)
            results.append((name, ok, detail))
            progress.advance(task)

    if config.output_format == "records":
        lines = (f"{n}\t{'pass' if ok else 'fail'}\t{d}" for n, ok, d in results)
        _emit(lines, args, config)
    else:
        table = Table(title="selftest")
        table.add_column("check")
        table.add_column("result")
        table.add_column("detail")

        for name, ok, detail in results:
            table.add_row(name, "[green]pass" if ok else "[red]fail", detail)

        CONSOLE.print(table)

    return EXIT_YES if all(ok for _, ok, _ in results) else EXIT_ERROR


#######################################################################################
# ENTRY POINT


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, help="Step budget of the command")
    common.add_argument("--seed", type=int, help="Seed of sampled structures")
    common.add_argument("--cache", type=Path, help="Knowledge cache file")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="Output format")
    common.add_argument("--quick", action="store_true", help="Desk-scale budgets")
    common.add_argument("-o", "--output", help="File location to save output")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(
        description="A knowing machine for epistemic arithmetic.", parents=[common]
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, *arguments: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text, parents=[common])

        for argument in arguments:
            sub.add_argument(argument)

        return sub

    add("parse", "Print a formula in canonical form", "formula")
    add("prove", "Search for a validity proof", "formula")
    add("entails", "Derive a goal from axioms", "goal").add_argument(
        "--axiom", action="append", default=[], help="An axiom; repeatable"
    )
    add("check", "Check a proof or certificate file", "file").add_argument(
        "formula", nargs="?"
    )
    schema_parser = add("schema", "Dump or query an axiom family", "schema")
    schema_parser.add_argument("--index", type=int, default=0, help="Parameter n")
    schema_parser.add_argument("--member", help="Sentence to recognize")
    add("run", "Run a blueprint", "blueprint").add_argument(
        "--input", type=int, default=0
    )
    add("trace", "Trace a blueprint's emissions", "blueprint").add_argument(
        "--input", type=int, default=0
    )
    add("build", "Build the knowing machine")
    add("knows", "Ask whether the machine knows a sentence", "sentence")
    add("enumerate", "Stream the machine's knowledge records")
    add("certify", "Certify self-knowledge for a formula", "formula")
    add("selftest", "Run the acceptance checks")

    return parser


COMMANDS: dict[str, Callable[[argparse.Namespace, Config], int]] = {
    "parse": command_parse,
    "prove": command_prove,
    "entails": command_entails,
    "check": command_check,
    "schema": command_schema,
    "run": command_run,
    "trace": command_trace,
    "build": command_build,
    "knows": command_knows,
    "enumerate": command_enumerate,
    "certify": command_certify,
    "selftest": command_selftest,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit status."""
    args = _parser().parse_args(argv)
    _configure_logging(args.verbose)

    try:
        config = Config.from_env().override(
            seed=args.seed, cache_path=args.cache, output_format=args.format
        )

        if args.budget is not None and args.command in _BUDGET_FIELDS:
            config = config.override(**{_BUDGET_FIELDS[args.command]: args.budget})

        return COMMANDS[args.command](args, config)

    except (ValueError, TypeError, OSError) as exc:
        ERROR_CONSOLE.print(f"[bold red]{type(exc).__name__}[/]: ", end="")
        ERROR_CONSOLE.print(str(exc), markup=False)
        return EXIT_ERROR


def cli():
    """Parse command line arguments and run a command."""
    sys.exit(main())


if __name__ == "__main__":
    cli()
