"""Propositional-logic workbench: saturation engine, truth-table oracle,
and excluded-middle gap reports."""

from .formula import (
    And,
    Atom,
    Formula,
    FormulaId,
    FormulaStore,
    Implies,
    Not,
    Or,
    ParseError,
    atoms_of,
    match_lbi_shape,
    parse,
    render,
    size,
    subformula_closure,
)
from .oracle import (
    ATOM_LIMIT,
    Assignment,
    Entailment,
    MissingAtom,
    TooManyAtoms,
    Verdict,
    classify,
    entails,
    evaluate,
    independent,
)
from .engine import (
    ArityMismatch,
    AxiomTooLarge,
    AxiomaticSystem,
    Bounds,
    ConfigError,
    EnumerationResult,
    InvalidStep,
    NotDerived,
    ProofStep,
    RuleKind,
    Stats,
    apply_rule,
    check_proof,
    extract_proof,
    load_system,
    saturate,
    system_document,
)
from .gap import (
    DemoVariant,
    GapMember,
    GapReport,
    GapVerification,
    LbiWitness,
    PreconditionViolated,
    WitnessMode,
    demo_family,
    demo_system,
    gap_report,
    lbi_accepted,
    report_document,
)

__all__ = [name for name in dir() if not name.startswith("_")]
