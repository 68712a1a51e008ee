"""Axiomatic systems, the inference-rule catalog, and bottom-up saturation.

A system is a finite set of concrete axioms plus a set of enabled rules and
bounds. `saturate` runs generation-based forward chaining to a fixed point
(or a bound), recording a well-founded proof step for every theorem, in a
fully deterministic discovery order.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from .formula import (
    And,
    FormulaId,
    FormulaStore,
    Implies,
    Not,
    ParseError,
    atoms_of,
    match_lbi_shape,
    parse,
    render,
    size,
    subformula_closure,
)

__all__ = [
    "RuleKind",
    "Bounds",
    "AxiomaticSystem",
    "ProofStep",
    "Stats",
    "EnumerationResult",
    "ConfigError",
    "AxiomTooLarge",
    "ArityMismatch",
    "NotDerived",
    "InvalidStep",
    "load_system",
    "system_document",
    "apply_rule",
    "saturate",
    "extract_proof",
    "check_proof",
]


class RuleKind(enum.Enum):
    MP = "MP"                  # phi, phi -> psi  |-  psi
    AND_INTRO = "AND_INTRO"    # phi, psi  |-  phi & psi
    AND_ELIM_L = "AND_ELIM_L"  # phi & psi  |-  phi
    AND_ELIM_R = "AND_ELIM_R"  # phi & psi  |-  psi
    OR_INTRO = "OR_INTRO"      # phi  |-  phi | s and s | phi, s in the universe
    LEM_AXIOM = "LEM_AXIOM"    # schema: x | ~x for every x in the universe
    LBI_RULE = "LBI_RULE"      # (x | ~x) -> y  |-  y
    CASE_SPLIT = "CASE_SPLIT"  # x -> y, ~x -> y  |-  y


RULE_ARITY = {
    RuleKind.MP: 2,
    RuleKind.AND_INTRO: 2,
    RuleKind.AND_ELIM_L: 1,
    RuleKind.AND_ELIM_R: 1,
    RuleKind.OR_INTRO: 1,
    RuleKind.LEM_AXIOM: 0,
    RuleKind.LBI_RULE: 1,
    RuleKind.CASE_SPLIT: 2,
}

_ATOM_NAME = re.compile(r"[a-z][a-z0-9_]*\Z")


class ConfigError(Exception):
    """Invalid system document. `field` names the offending entry."""

    def __init__(self, field_name: str, reason: str):
        self.field = field_name
        self.reason = reason
        super().__init__(f"{field_name}: {reason}")


class AxiomTooLarge(ConfigError):
    pass


class ArityMismatch(Exception):
    def __init__(self, rule: RuleKind, got: int):
        super().__init__(f"{rule.value} takes {RULE_ARITY[rule]} premise(s), got {got}")


class NotDerived(Exception):
    """The goal is absent from the enumeration (says nothing semantic)."""


@dataclass(frozen=True, slots=True)
class Bounds:
    max_formula_size: int = 12
    max_generations: int = 50
    max_theorems: int = 100_000

    def __post_init__(self) -> None:
        for name in ("max_formula_size", "max_generations", "max_theorems"):
            if getattr(self, name) < 1:
                raise ConfigError(f"bounds.{name}", "must be a positive integer")


@dataclass(frozen=True)
class AxiomaticSystem:
    """Concrete axioms + enabled rules + bounds, tied to one FormulaStore.

    The side-formula universe (what OR_INTRO and LEM_AXIOM range over) is
    the subformula closure of the axioms and any declared side formulas.
    """

    store: FormulaStore
    atoms: tuple[str, ...]
    axioms: tuple[FormulaId, ...]
    rules: frozenset[RuleKind]
    side_formulas: tuple[FormulaId, ...] = ()
    bounds: Bounds = field(default_factory=Bounds)

    def __post_init__(self) -> None:
        declared = set(self.atoms)
        for i, name in enumerate(self.atoms):
            if not _ATOM_NAME.match(name):
                raise ConfigError(f"atoms[{i}]", f"invalid atom name {name!r}")
        if len(declared) != len(self.atoms):
            raise ConfigError("atoms", "duplicate atom names")
        for i, ax in enumerate(self.axioms):
            for name in atoms_of(ax, self.store):
                if name not in declared:
                    raise ConfigError(f"axioms[{i}]", f"uses undeclared atom {name!r}")
            if size(ax, self.store) > self.bounds.max_formula_size:
                raise AxiomTooLarge(
                    f"axioms[{i}]",
                    f"size {size(ax, self.store)} exceeds max_formula_size "
                    f"{self.bounds.max_formula_size}",
                )
        for i, sf in enumerate(self.side_formulas):
            for name in atoms_of(sf, self.store):
                if name not in declared:
                    raise ConfigError(f"side_formulas[{i}]", f"uses undeclared atom {name!r}")
            if size(sf, self.store) > self.bounds.max_formula_size:
                raise ConfigError(
                    f"side_formulas[{i}]",
                    f"size {size(sf, self.store)} exceeds max_formula_size "
                    f"{self.bounds.max_formula_size}",
                )

    def universe(self) -> tuple[FormulaId, ...]:
        """Side-formula universe in canonical (size, text) order."""
        closure = subformula_closure((*self.axioms, *self.side_formulas), self.store)
        return tuple(
            sorted(closure, key=lambda f: (size(f, self.store), render(f, self.store)))
        )

    def with_rules(self, rules: Iterable[RuleKind]) -> AxiomaticSystem:
        return replace(self, rules=frozenset(rules))


@dataclass(frozen=True, slots=True)
class ProofStep:
    """One derivation: `rule` applied to earlier steps gives `conclusion`.

    `rule` is None for axioms. Premises are indices of earlier steps, so
    each premise is strictly smaller than the step's own position.
    """

    conclusion: FormulaId
    rule: Optional[RuleKind]
    premises: tuple[int, ...]

    @property
    def rule_name(self) -> str:
        return "AXIOM" if self.rule is None else self.rule.value


@dataclass(frozen=True, slots=True)
class Stats:
    """Saturation counters. `rule_applications` counts premise tuples that
    matched a rule's pattern (plus one per enabled zero-premise schema);
    `dedup_hits` counts in-bound conclusions that were already known."""

    generations_run: int
    fixed_point_reached: bool
    rule_applications: int
    dedup_hits: int


@dataclass(frozen=True)
class EnumerationResult:
    """Discovery-ordered theorem list with aligned proof steps and
    generation numbers."""

    theorems: tuple[FormulaId, ...]
    steps: tuple[ProofStep, ...]
    generations: tuple[int, ...]
    stats: Stats

    def index_of(self, f: FormulaId) -> Optional[int]:
        try:
            return self.theorems.index(f)
        except ValueError:
            return None


# ---------------------------------------------------------------------------
# System documents (JSON)
# ---------------------------------------------------------------------------

_DOCUMENT_KEYS = {"atoms", "axioms", "rules", "side_formulas", "bounds"}
_BOUNDS_KEYS = {"max_formula_size", "max_generations", "max_theorems"}


def _parse_formula_list(
    values: object, field_name: str, store: FormulaStore
) -> tuple[FormulaId, ...]:
    if not isinstance(values, list):
        raise ConfigError(field_name, "must be a list of formula strings")
    out = []
    for i, text in enumerate(values):
        if not isinstance(text, str):
            raise ConfigError(f"{field_name}[{i}]", "must be a formula string")
        try:
            out.append(parse(text, store))
        except ParseError as exc:
            raise ConfigError(f"{field_name}[{i}]", str(exc)) from exc
    return tuple(out)


def load_system(text: str, store: Optional[FormulaStore] = None) -> AxiomaticSystem:
    """Load and validate a JSON system document.

    Unknown keys are rejected. Defaults: rules {MP}; bounds 12 / 50 /
    100000; atoms inferred from the axioms and side formulas when omitted.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("document", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("document", "top level must be an object")
    for key in doc:
        if key not in _DOCUMENT_KEYS:
            raise ConfigError(key, "unknown key")

    store = store if store is not None else FormulaStore()
    axioms = _parse_formula_list(doc.get("axioms", []), "axioms", store)
    side = _parse_formula_list(doc.get("side_formulas", []), "side_formulas", store)

    rule_names = doc.get("rules", ["MP"])
    if not isinstance(rule_names, list):
        raise ConfigError("rules", "must be a list of rule names")
    rules = set()
    for i, name in enumerate(rule_names):
        try:
            rules.add(RuleKind(name))
        except ValueError:
            raise ConfigError(f"rules[{i}]", f"unknown rule {name!r}") from None

    bounds_doc = doc.get("bounds", {})
    if not isinstance(bounds_doc, dict):
        raise ConfigError("bounds", "must be an object")
    for key in bounds_doc:
        if key not in _BOUNDS_KEYS:
            raise ConfigError(f"bounds.{key}", "unknown key")
    bound_args = {}
    for key in _BOUNDS_KEYS:
        if key in bounds_doc:
            value = bounds_doc[key]
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"bounds.{key}", "must be an integer")
            bound_args[key] = value
    bounds = Bounds(**bound_args)

    atoms_doc = doc.get("atoms")
    if atoms_doc is None:
        inferred: set[str] = set()
        for f in (*axioms, *side):
            inferred.update(atoms_of(f, store))
        atoms = tuple(sorted(inferred))
    else:
        if not isinstance(atoms_doc, list) or not all(isinstance(a, str) for a in atoms_doc):
            raise ConfigError("atoms", "must be a list of atom names")
        atoms = tuple(atoms_doc)

    return AxiomaticSystem(
        store=store,
        atoms=atoms,
        axioms=axioms,
        rules=frozenset(rules),
        side_formulas=side,
        bounds=bounds,
    )


def system_document(system: AxiomaticSystem) -> dict:
    """JSON-ready document that round-trips through load_system."""
    return {
        "atoms": list(system.atoms),
        "axioms": [render(f, system.store) for f in system.axioms],
        "rules": [r.value for r in RuleKind if r in system.rules],
        "side_formulas": [render(f, system.store) for f in system.side_formulas],
        "bounds": {
            "max_formula_size": system.bounds.max_formula_size,
            "max_generations": system.bounds.max_generations,
            "max_theorems": system.bounds.max_theorems,
        },
    }


# ---------------------------------------------------------------------------
# Rule application
# ---------------------------------------------------------------------------

def apply_rule(
    rule: RuleKind,
    premises: Sequence[FormulaId],
    store: FormulaStore,
    universe: Iterable[FormulaId] = (),
) -> frozenset[FormulaId]:
    """All conclusions of one rule application; empty when shapes mismatch.

    No size filtering happens here; bounding is the enumerator's job.
    OR_INTRO and LEM_AXIOM range over `universe`.
    """
    if len(premises) != RULE_ARITY[rule]:
        raise ArityMismatch(rule, len(premises))

    if rule is RuleKind.MP:
        phi, imp = premises
        node = store.node(imp)
        if isinstance(node, Implies) and node.antecedent == phi:
            return frozenset((node.consequent,))
        return frozenset()

    if rule is RuleKind.AND_INTRO:
        return frozenset((store.conj(premises[0], premises[1]),))

    if rule is RuleKind.AND_ELIM_L:
        node = store.node(premises[0])
        return frozenset((node.left,)) if isinstance(node, And) else frozenset()

    if rule is RuleKind.AND_ELIM_R:
        node = store.node(premises[0])
        return frozenset((node.right,)) if isinstance(node, And) else frozenset()

    if rule is RuleKind.OR_INTRO:
        phi = premises[0]
        out = set()
        for sigma in universe:
            out.add(store.disj(phi, sigma))
            out.add(store.disj(sigma, phi))
        return frozenset(out)

    if rule is RuleKind.LEM_AXIOM:
        return frozenset(store.disj(x, store.neg(x)) for x in universe)

    if rule is RuleKind.LBI_RULE:
        matched = match_lbi_shape(premises[0], store)
        return frozenset((matched[1],)) if matched else frozenset()

    if rule is RuleKind.CASE_SPLIT:
        first, second = premises
        n1 = store.node(first)
        n2 = store.node(second)
        if not (isinstance(n1, Implies) and isinstance(n2, Implies)):
            return frozenset()
        if n1.consequent != n2.consequent:
            return frozenset()
        ant2 = store.node(n2.antecedent)
        if isinstance(ant2, Not) and ant2.child == n1.antecedent:
            return frozenset((n1.consequent,))
        return frozenset()

    raise AssertionError(f"unhandled rule {rule!r}")


# ---------------------------------------------------------------------------
# Saturation
# ---------------------------------------------------------------------------

class _Saturation:
    def __init__(self, system: AxiomaticSystem):
        self.system = system
        self.store = system.store
        self.max_size = system.bounds.max_formula_size
        self.universe = system.universe()
        self.theorems: list[FormulaId] = []
        self.steps: list[ProofStep] = []
        self.generations: list[int] = []
        self.position: dict[FormulaId, int] = {}
        self.by_size: dict[int, list[int]] = {}
        self.impl_by_antecedent: dict[FormulaId, list[int]] = {}
        self.impl_by_consequent: dict[FormulaId, list[int]] = {}
        self.applications = 0
        self.dedup_hits = 0
        self.truncated = False
        # Per-round scratch: conclusion -> first ProofStep that derived it.
        self.candidates: dict[FormulaId, ProofStep] = {}

    def sort_key(self, f: FormulaId) -> tuple[int, str]:
        return (size(f, self.store), render(f, self.store))

    def offer(self, conclusion: FormulaId, step: ProofStep) -> None:
        if size(conclusion, self.store) > self.max_size:
            return
        if conclusion in self.position or conclusion in self.candidates:
            self.dedup_hits += 1
            return
        self.candidates[conclusion] = step

    def admit_generation(self, gen: int) -> int:
        admitted = 0
        ordered = sorted(self.candidates, key=self.sort_key)
        for f in ordered:
            if len(self.theorems) >= self.system.bounds.max_theorems:
                self.truncated = True
                break
            index = len(self.theorems)
            self.theorems.append(f)
            self.steps.append(self.candidates[f])
            self.generations.append(gen)
            self.position[f] = index
            self.by_size.setdefault(size(f, self.store), []).append(index)
            node = self.store.node(f)
            if isinstance(node, Implies):
                self.impl_by_antecedent.setdefault(node.antecedent, []).append(index)
                self.impl_by_consequent.setdefault(node.consequent, []).append(index)
            admitted += 1
        self.candidates = {}
        return admitted

    def seed(self) -> None:
        for ax in self.system.axioms:
            self.offer(ax, ProofStep(ax, None, ()))
        if RuleKind.LEM_AXIOM in self.system.rules:
            self.applications += 1
            for instance in apply_rule(RuleKind.LEM_AXIOM, (), self.store, self.universe):
                self.offer(instance, ProofStep(instance, RuleKind.LEM_AXIOM, ()))
        self.admit_generation(0)

    def round(self, delta: range) -> None:
        """Apply every enabled rule to every premise tuple touching `delta`."""
        rules = self.system.rules
        if RuleKind.MP in rules:
            self.run_mp(delta)
        if RuleKind.AND_INTRO in rules:
            self.run_and_intro(delta)
        if RuleKind.AND_ELIM_L in rules or RuleKind.AND_ELIM_R in rules:
            self.run_and_elim(delta)
        if RuleKind.OR_INTRO in rules:
            self.run_or_intro(delta)
        if RuleKind.LBI_RULE in rules:
            self.run_lbi(delta)
        if RuleKind.CASE_SPLIT in rules:
            self.run_case_split(delta)

    def run_mp(self, delta: range) -> None:
        pairs = set()
        for j in delta:
            node = self.store.node(self.theorems[j])
            if isinstance(node, Implies):
                i = self.position.get(node.antecedent)
                if i is not None:
                    pairs.add((i, j))
        for i in delta:
            for j in self.impl_by_antecedent.get(self.theorems[i], ()):
                pairs.add((i, j))
        for i, j in sorted(pairs):
            self.applications += 1
            conclusion = self.store.node(self.theorems[j]).consequent
            self.offer(conclusion, ProofStep(conclusion, RuleKind.MP, (i, j)))

    def run_and_intro(self, delta: range) -> None:
        pairs = set()
        for i in delta:
            budget = self.max_size - 1 - size(self.theorems[i], self.store)
            for other_size, bucket in self.by_size.items():
                if other_size > budget:
                    continue
                for j in bucket:
                    pairs.add((i, j))
                    pairs.add((j, i))
        for i, j in sorted(pairs):
            self.applications += 1
            conclusion = self.store.conj(self.theorems[i], self.theorems[j])
            self.offer(conclusion, ProofStep(conclusion, RuleKind.AND_INTRO, (i, j)))

    def run_and_elim(self, delta: range) -> None:
        for i in delta:
            node = self.store.node(self.theorems[i])
            if not isinstance(node, And):
                continue
            if RuleKind.AND_ELIM_L in self.system.rules:
                self.applications += 1
                self.offer(node.left, ProofStep(node.left, RuleKind.AND_ELIM_L, (i,)))
            if RuleKind.AND_ELIM_R in self.system.rules:
                self.applications += 1
                self.offer(node.right, ProofStep(node.right, RuleKind.AND_ELIM_R, (i,)))

    def run_or_intro(self, delta: range) -> None:
        for i in delta:
            self.applications += 1
            phi = self.theorems[i]
            budget = self.max_size - 1 - size(phi, self.store)
            for sigma in self.universe:
                if size(sigma, self.store) > budget:
                    continue
                left = self.store.disj(phi, sigma)
                self.offer(left, ProofStep(left, RuleKind.OR_INTRO, (i,)))
                right = self.store.disj(sigma, phi)
                self.offer(right, ProofStep(right, RuleKind.OR_INTRO, (i,)))

    def run_lbi(self, delta: range) -> None:
        for i in delta:
            matched = match_lbi_shape(self.theorems[i], self.store)
            if matched is None:
                continue
            self.applications += 1
            conclusion = matched[1]
            self.offer(conclusion, ProofStep(conclusion, RuleKind.LBI_RULE, (i,)))

    def run_case_split(self, delta: range) -> None:
        pairs = set()
        for k in delta:
            node = self.store.node(self.theorems[k])
            if not isinstance(node, Implies):
                continue
            partners = self.impl_by_consequent.get(node.consequent, ())
            # New theorem as the x -> y premise.
            for j in partners:
                ant = self.store.node(self.theorems[j]).antecedent
                ant_node = self.store.node(ant)
                if isinstance(ant_node, Not) and ant_node.child == node.antecedent:
                    pairs.add((k, j))
            # New theorem as the ~x -> y premise.
            ant_node = self.store.node(node.antecedent)
            if isinstance(ant_node, Not):
                for j in partners:
                    if self.store.node(self.theorems[j]).antecedent == ant_node.child:
                        pairs.add((j, k))
        for i, j in sorted(pairs):
            self.applications += 1
            conclusion = self.store.node(self.theorems[i]).consequent
            self.offer(conclusion, ProofStep(conclusion, RuleKind.CASE_SPLIT, (i, j)))

    def run(self) -> EnumerationResult:
        self.seed()
        rounds = 0
        fixed_point = False
        gen_start = 0
        while not self.truncated and len(self.theorems) < self.system.bounds.max_theorems:
            if rounds >= self.system.bounds.max_generations:
                break
            delta = range(gen_start, len(self.theorems))
            gen_start = len(self.theorems)
            self.round(delta)
            rounds += 1
            if not self.candidates:
                fixed_point = True
                break
            self.admit_generation(self.generations[-1] + 1 if self.theorems else 1)
        return EnumerationResult(
            theorems=tuple(self.theorems),
            steps=tuple(self.steps),
            generations=tuple(self.generations),
            stats=Stats(
                generations_run=rounds,
                fixed_point_reached=fixed_point,
                rule_applications=self.applications,
                dedup_hits=self.dedup_hits,
            ),
        )


def saturate(system: AxiomaticSystem) -> EnumerationResult:
    """Bottom-up enumeration of the system's theorems.

    Generation 0 holds the axioms (plus LEM_AXIOM instances when that
    schema is enabled); generation k+1 holds every conclusion of an
    enabled rule whose premise tuple touches generation k, kept when its
    size is within bounds and it was not already known. Within a
    generation theorems are ordered by (size, canonical text), which makes
    the discovery order, the proof steps, and the stats reproducible
    run-to-run. Stops at the fixed point or when a bound is exhausted
    (reported in stats, never an error).
    """
    return _Saturation(system).run()


# ---------------------------------------------------------------------------
# Proof extraction and checking
# ---------------------------------------------------------------------------

def extract_proof(result: EnumerationResult, goal: FormulaId) -> tuple[ProofStep, ...]:
    """Minimal self-contained proof DAG for `goal`, topologically ordered.

    Premise indices are rewritten to positions within the returned tuple.
    Raises NotDerived when the goal never made it into the enumeration.
    """
    target = result.index_of(goal)
    if target is None:
        raise NotDerived("goal is not among the enumerated theorems")
    needed: set[int] = set()
    stack = [target]
    while stack:
        i = stack.pop()
        if i in needed:
            continue
        needed.add(i)
        stack.extend(result.steps[i].premises)
    ordered = sorted(needed)
    renumber = {old: new for new, old in enumerate(ordered)}
    return tuple(
        ProofStep(
            conclusion=result.steps[old].conclusion,
            rule=result.steps[old].rule,
            premises=tuple(renumber[p] for p in result.steps[old].premises),
        )
        for old in ordered
    )


@dataclass(frozen=True, slots=True)
class InvalidStep:
    index: int
    reason: str


def check_proof(
    steps: Sequence[ProofStep], system: AxiomaticSystem
) -> Optional[InvalidStep]:
    """Replay a proof DAG against the system; None means valid.

    Axiom steps must conclude an axiom; LEM_AXIOM steps must be enabled
    and conclude a schema instance over the universe; every other step's
    conclusion must be reproduced by apply_rule on its premises.
    """
    axioms = set(system.axioms)
    universe = system.universe()
    lem_instances: Optional[frozenset[FormulaId]] = None
    for i, step in enumerate(steps):
        for p in step.premises:
            if not 0 <= p < i:
                return InvalidStep(i, f"premise {p} does not precede the step")
        if step.rule is None:
            if step.premises:
                return InvalidStep(i, "axiom step with premises")
            if step.conclusion not in axioms:
                return InvalidStep(i, "conclusion is not an axiom")
            continue
        if step.rule not in system.rules:
            return InvalidStep(i, f"rule {step.rule.value} is not enabled")
        if step.rule is RuleKind.LEM_AXIOM:
            if step.premises:
                return InvalidStep(i, "LEM_AXIOM step with premises")
            if lem_instances is None:
                lem_instances = apply_rule(RuleKind.LEM_AXIOM, (), system.store, universe)
            if step.conclusion not in lem_instances:
                return InvalidStep(i, "conclusion is not a LEM instance over the universe")
            continue
        if len(step.premises) != RULE_ARITY[step.rule]:
            return InvalidStep(i, f"wrong premise count for {step.rule.value}")
        premise_formulas = tuple(steps[p].conclusion for p in step.premises)
        conclusions = apply_rule(step.rule, premise_formulas, system.store, universe)
        if step.conclusion not in conclusions:
            return InvalidStep(i, "conclusion not reproduced by the rule")
    return None
