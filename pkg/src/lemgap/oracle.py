"""Classical truth-table semantics: the ground truth the engine is judged by.

Everything here is exhaustive over assignments (bitmask evaluation, one bit
per assignment), deterministic, and capped at ATOM_LIMIT atoms. All
operations are pure and safe to call concurrently.
"""

from __future__ import annotations

import enum
from typing import Iterable, NamedTuple, Optional

from .formula import And, Atom, FormulaId, FormulaStore, Implies, Not, Or, atoms_of

__all__ = [
    "ATOM_LIMIT",
    "Assignment",
    "Verdict",
    "MissingAtom",
    "TooManyAtoms",
    "Entailment",
    "evaluate",
    "classify",
    "entails",
    "independent",
]

ATOM_LIMIT = 20

Assignment = dict[str, bool]


class Verdict(enum.Enum):
    TAUTOLOGY = "Tautology"
    CONTRADICTION = "Contradiction"
    CONTINGENT = "Contingent"


class MissingAtom(Exception):
    """The assignment is not total over the formula's atoms."""

    def __init__(self, name: str):
        super().__init__(f"assignment missing atom {name!r}")
        self.name = name


class TooManyAtoms(Exception):
    """The exhaustive oracle is capped at ATOM_LIMIT atoms by design."""

    def __init__(self, count: int):
        super().__init__(f"{count} atoms exceed the oracle limit of {ATOM_LIMIT}")
        self.count = count


class Entailment(NamedTuple):
    holds: bool
    countermodel: Optional[Assignment]


def evaluate(f: FormulaId, assignment: Assignment, store: FormulaStore) -> bool:
    """Truth value of f under a total assignment; `->` is material."""
    node = store.node(f)
    match node:
        case Atom(name):
            try:
                return assignment[name]
            except KeyError:
                raise MissingAtom(name) from None
        case Not(child):
            return not evaluate(child, assignment, store)
        case And(left, right):
            return evaluate(left, assignment, store) and evaluate(right, assignment, store)
        case Or(left, right):
            return evaluate(left, assignment, store) or evaluate(right, assignment, store)
        case Implies(antecedent, consequent):
            return (not evaluate(antecedent, assignment, store)) or evaluate(
                consequent, assignment, store
            )
    raise AssertionError(f"unreachable node {node!r}")


def _atom_mask(position: int, n_atoms: int) -> int:
    # Bit j of the mask is the atom's value in assignment j, where bit
    # `position` of j encodes this atom. Built by repeated doubling.
    period = 1 << position
    mask = ((1 << period) - 1) << period
    width = 2 * period
    total = 1 << n_atoms
    while width < total:
        mask |= mask << width
        width *= 2
    return mask


def _truth_mask(
    f: FormulaId,
    positions: dict[str, int],
    n_atoms: int,
    store: FormulaStore,
    memo: dict[int, int],
) -> int:
    cached = memo.get(f.index)
    if cached is not None:
        return cached
    full = (1 << (1 << n_atoms)) - 1
    node = store.node(f)
    match node:
        case Atom(name):
            out = _atom_mask(positions[name], n_atoms)
        case Not(child):
            out = full ^ _truth_mask(child, positions, n_atoms, store, memo)
        case And(left, right):
            out = _truth_mask(left, positions, n_atoms, store, memo) & _truth_mask(
                right, positions, n_atoms, store, memo
            )
        case Or(left, right):
            out = _truth_mask(left, positions, n_atoms, store, memo) | _truth_mask(
                right, positions, n_atoms, store, memo
            )
        case Implies(antecedent, consequent):
            out = (full ^ _truth_mask(antecedent, positions, n_atoms, store, memo)) | _truth_mask(
                consequent, positions, n_atoms, store, memo
            )
    memo[f.index] = out
    return out


def _atom_positions(formulas: Iterable[FormulaId], store: FormulaStore) -> dict[str, int]:
    names: set[str] = set()
    for f in formulas:
        names.update(atoms_of(f, store))
    if len(names) > ATOM_LIMIT:
        raise TooManyAtoms(len(names))
    return {name: i for i, name in enumerate(sorted(names))}


def classify(f: FormulaId, store: FormulaStore) -> Verdict:
    """Tautology, Contradiction, or Contingent, by exhausting assignments."""
    positions = _atom_positions([f], store)
    n = len(positions)
    full = (1 << (1 << n)) - 1
    mask = _truth_mask(f, positions, n, store, {})
    if mask == full:
        return Verdict.TAUTOLOGY
    if mask == 0:
        return Verdict.CONTRADICTION
    return Verdict.CONTINGENT


def entails(axioms: Iterable[FormulaId], f: FormulaId, store: FormulaStore) -> Entailment:
    """Does every assignment satisfying all axioms satisfy f?

    When the answer is no, the lowest-indexed violating assignment is
    returned as a countermodel (total over the combined atom set). An
    unsatisfiable axiom set entails everything.
    """
    axioms = tuple(axioms)
    positions = _atom_positions((*axioms, f), store)
    n = len(positions)
    full = (1 << (1 << n)) - 1
    memo: dict[int, int] = {}
    models = full
    for ax in axioms:
        models &= _truth_mask(ax, positions, n, store, memo)
    violations = models & (full ^ _truth_mask(f, positions, n, store, memo))
    if violations == 0:
        return Entailment(True, None)
    j = (violations & -violations).bit_length() - 1
    countermodel = {name: bool((j >> i) & 1) for name, i in positions.items()}
    return Entailment(False, countermodel)


def independent(axioms: Iterable[FormulaId], x: FormulaId, store: FormulaStore) -> bool:
    """Neither x nor ~x follows from the axioms.

    Vacuously false when the axioms are unsatisfiable (everything follows).
    """
    axioms = tuple(axioms)
    if entails(axioms, x, store).holds:
        return False
    return not entails(axioms, store.neg(x), store).holds
