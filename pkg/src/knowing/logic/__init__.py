from knowing.logic.proof import (
    CheckResult,
    Proof,
    Sequent,
    Step,
    check_proof,
    deserialize,
    serialize,
)
from knowing.logic.prover import Entailment, entails, enumerate_theorems, prove_valid
from knowing.logic.semantics import (
    BaseStructure,
    ThreeValued,
    constrained_structure,
    evaluate,
    random_pattern_structure,
    standard_structure,
)
from knowing.logic.translate import AtomTable, translate
