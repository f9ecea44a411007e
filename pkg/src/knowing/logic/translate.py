"""Translation of modal formulas into first-order formulas.

Each purely modal subformula K(...) becomes a predicate atom `P<k>(args)`, where k is
the id of its pattern atom in an `AtomTable` and the arguments are its free
occurrences. The membership template In(t, e) becomes one more opaque predicate of
arity two. Ids are handed out in encounter order, so a table shared across several
translations keeps them consistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from knowing.compmodel.arith import MEMBERSHIP_ATOM, read_membership
from knowing.formula import (
    Eq,
    Exists,
    Forall,
    Formula,
    Know,
    PatternAtom,
    Pred,
    Var,
    map_binary,
    pattern,
)


@dataclass
class AtomTable:
    """Bijection between pattern atoms and predicate ids.

    Attributes:
        atoms (dict[PatternAtom, int]): Id of each atom seen so far.
    """

    atoms: dict[PatternAtom, int] = field(default_factory=dict)

    def id_of(self, atom: PatternAtom) -> int:
        """Return the id of `atom`, assigning the next free id on first sight."""
        if atom not in self.atoms:
            self.atoms[atom] = len(self.atoms)

        return self.atoms[atom]

    def atom(self, atom_id: int) -> PatternAtom:
        for atom, known_id in self.atoms.items():
            if known_id == atom_id:
                return atom

        raise KeyError(atom_id)

    def items(self) -> list[tuple[int, PatternAtom]]:
        return sorted((atom_id, atom) for atom, atom_id in self.atoms.items())

    def copy(self) -> AtomTable:
        return AtomTable(dict(self.atoms))

    def __len__(self) -> int:
        return len(self.atoms)


def translate(formula: Formula, table: AtomTable | None = None) -> Formula:
    """Translate a formula of the language into a first-order formula.

    Args:
        formula (Formula): Formula to translate.
        table (AtomTable, optional): Table receiving new atoms. Defaults to a fresh
            table, which is then discarded.

    Returns:
        Formula: A formula without K in which modal subformulas are `Pred` atoms.
    """
    table = AtomTable() if table is None else table

    return _translate(formula, table)


def _translate(formula: Formula, table: AtomTable) -> Formula:
    match formula:
        case Eq() | Pred():
            return formula
        case Know():
            atom, args = pattern(formula)
            return Pred(table.id_of(atom), tuple(Var(name) for name in args))
        case Exists(var, body):
            if (found := read_membership(formula)) is not None:
                return Pred(table.id_of(MEMBERSHIP_ATOM), found)

            return Exists(var, _translate(body, table))
        case Forall(var, body):
            return Forall(var, _translate(body, table))

    return map_binary(formula, lambda part: _translate(part, table))
