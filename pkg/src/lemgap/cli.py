"""Command-line interface.

Commands: parse, classify, enumerate, prove, gap, demo. Results go to
stdout (text or machine-readable JSON, `--format`); diagnostics go to
stderr. Exit codes: 0 success, 1 usage/config error, 2 formula parse
error, 3 goal not derived, 4 oracle atom limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import Optional, Sequence

from .engine import (
    AxiomaticSystem,
    ConfigError,
    EnumerationResult,
    NotDerived,
    ProofStep,
    RuleKind,
    Stats,
    check_proof,
    extract_proof,
    load_system,
    saturate,
    system_document,
)
from .formula import FormulaStore, ParseError, atoms_of, parse, render, size
from .gap import (
    DemoVariant,
    PreconditionViolated,
    demo_system,
    gap_report,
    report_document,
)
from .oracle import TooManyAtoms, classify, entails, independent

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_NOT_DERIVED = 3
EXIT_ORACLE_LIMIT = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments; the exit taxonomy
    # reserves 2 for formula parse errors, so route usage errors to 1.
    def error(self, message: str):
        raise UsageError(message)


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


def _stats_lines(stats: Stats) -> str:
    state = "fixed point reached" if stats.fixed_point_reached else "bounds exhausted"
    return (
        f"{state} after {stats.generations_run} generation(s); "
        f"{stats.rule_applications} rule application(s), {stats.dedup_hits} dedup hit(s)"
    )


def _stats_doc(stats: Stats) -> dict:
    return {
        "generations_run": stats.generations_run,
        "fixed_point_reached": stats.fixed_point_reached,
        "rule_applications": stats.rule_applications,
        "dedup_hits": stats.dedup_hits,
    }


def _load(args) -> AxiomaticSystem:
    if not args.system:
        raise UsageError("--system FILE is required for this command")
    with open(args.system, "r", encoding="utf-8") as handle:
        system = load_system(handle.read())
    bounds = system.bounds
    if args.max_size is not None:
        bounds = replace(bounds, max_formula_size=args.max_size)
    if args.max_generations is not None:
        bounds = replace(bounds, max_generations=args.max_generations)
    if bounds is not system.bounds:
        system = replace(system, bounds=bounds)
    return system


def _step_line(i: int, step: ProofStep, store: FormulaStore, gen: Optional[int] = None) -> str:
    label = step.rule_name
    if step.premises:
        label += " " + ",".join(str(p) for p in step.premises)
    gen_part = f"  gen {gen}" if gen is not None else ""
    return f"{i:4d}{gen_part}  {label:<16} {render(step.conclusion, store)}"


def cmd_parse(args) -> int:
    store = FormulaStore()
    f = parse(args.formula, store)
    if args.format == "machine":
        _emit(
            {
                "formula": render(f, store),
                "size": size(f, store),
                "atoms": list(atoms_of(f, store)),
            }
        )
    else:
        print(render(f, store))
        print(f"size: {size(f, store)}")
        print("atoms: " + ", ".join(atoms_of(f, store)))
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.entails is not None or args.independent is not None:
        system = _load(args)
        store = system.store
        if args.entails is not None:
            verdict = entails(system.axioms, parse(args.entails, store), store)
            if args.format == "machine":
                _emit(
                    {
                        "entailed": verdict.holds,
                        "countermodel": verdict.countermodel,
                    }
                )
            else:
                print(f"entailed: {str(verdict.holds).lower()}")
                if verdict.countermodel is not None:
                    pairs = " ".join(
                        f"{name}={'T' if value else 'F'}"
                        for name, value in sorted(verdict.countermodel.items())
                    )
                    print(f"countermodel: {pairs}")
        else:
            answer = independent(system.axioms, parse(args.independent, store), store)
            if args.format == "machine":
                _emit({"independent": answer})
            else:
                print(f"independent: {str(answer).lower()}")
        return EXIT_OK
    if args.formula is None:
        raise UsageError("a formula argument is required unless --entails/--independent is used")
    store = FormulaStore()
    verdict = classify(parse(args.formula, store), store)
    if args.format == "machine":
        _emit({"verdict": verdict.value})
    else:
        print(verdict.value)
    return EXIT_OK


def _enumeration_doc(result: EnumerationResult, store: FormulaStore) -> dict:
    return {
        "theorems": [
            {
                "index": i,
                "generation": result.generations[i],
                "formula": render(result.theorems[i], store),
                "rule": result.steps[i].rule_name,
                "premises": list(result.steps[i].premises),
            }
            for i in range(len(result.theorems))
        ],
        "stats": _stats_doc(result.stats),
    }


def cmd_enumerate(args) -> int:
    system = _load(args)
    result = saturate(system)
    if args.format == "machine":
        _emit(_enumeration_doc(result, system.store))
    else:
        for i, step in enumerate(result.steps):
            print(_step_line(i, step, system.store, gen=result.generations[i]))
        print(_stats_lines(result.stats))
    return EXIT_OK


def cmd_prove(args) -> int:
    system = _load(args)
    goal = parse(args.goal, system.store)
    result = saturate(system)
    try:
        proof = extract_proof(result, goal)
    except NotDerived:
        if result.stats.fixed_point_reached:
            print("fixed point reached without goal", file=sys.stderr)
        else:
            print("goal not derived within bounds", file=sys.stderr)
        return EXIT_NOT_DERIVED
    failure = check_proof(proof, system)
    if failure is not None:  # pragma: no cover - replay of our own output
        print(f"internal error: extracted proof failed replay: {failure}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "machine":
        _emit(
            {
                "goal": render(goal, system.store),
                "steps": [
                    {
                        "index": i,
                        "formula": render(step.conclusion, system.store),
                        "rule": step.rule_name,
                        "premises": list(step.premises),
                    }
                    for i, step in enumerate(proof)
                ],
            }
        )
    else:
        for i, step in enumerate(proof):
            print(_step_line(i, step, system.store))
    return EXIT_OK


def cmd_gap(args) -> int:
    system = _load(args)
    close_with = RuleKind(args.close_with) if args.close_with else None
    report = gap_report(system, close_with)
    if args.format == "machine":
        _emit(report_document(report))
        return EXIT_OK
    store = system.store
    print(f"base run: {len(report.enumerated.theorems)} theorem(s); "
          + _stats_lines(report.enumerated.stats))
    print(f"lbi-accepted ({len(report.lbi_accepted)}):")
    for w in report.lbi_accepted:
        print(
            f"  {render(w.conclusion, store)}  pivot {render(w.pivot, store)}"
            f"  [{w.mode.value}]  sources {','.join(str(i) for i in w.source_indices)}"
        )
    print(f"gap ({len(report.gap)}):")
    for member in report.gap:
        print(f"  {render(member.conclusion, store)}")
        for w in member.witnesses:
            print(f"    pivot {render(w.pivot, store)} [{w.mode.value}]")
        v = member.verification
        print(
            "    oracle: "
            f"entailed={str(v.oracle_entailed).lower()} "
            f"pivot_independent={str(v.pivot_independent_semantically).lower()} "
            f"pivot_absent={str(v.pivot_absent_syntactically).lower()}"
        )
    if report.closure is not None:
        print(
            f"closure with {report.closure_rule.value}: "
            f"{len(report.closure.theorems)} theorem(s); "
            f"gap_closed={str(report.gap_closed).lower()}"
        )
    return EXIT_OK


def cmd_demo(args) -> int:
    system = demo_system(DemoVariant(args.variant))
    doc = system_document(system)
    payload = json.dumps(doc, indent=2) + "\n"
    try:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(payload)
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "machine":
        _emit(doc)
    else:
        print(f"wrote {args.variant} system to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lemgap", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--system", metavar="FILE")
    common.add_argument("--max-size", type=int, metavar="N", dest="max_size")
    common.add_argument("--max-generations", type=int, metavar="N", dest="max_generations")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and canonically re-render")
    p.add_argument("formula")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("classify", parents=[common], help="truth-table verdicts")
    p.add_argument("formula", nargs="?")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--entails", metavar="FORMULA")
    mode.add_argument("--independent", metavar="FORMULA")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("enumerate", parents=[common], help="run bottom-up saturation")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("prove", parents=[common], help="extract a checked proof")
    p.add_argument("--goal", required=True, metavar="FORMULA")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("gap", parents=[common], help="accepted-minus-enumerated report")
    p.add_argument(
        "--close-with",
        dest="close_with",
        choices=("LBI_RULE", "LEM_AXIOM", "CASE_SPLIT"),
    )
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("demo", parents=[common], help="write a demonstration system file")
    p.add_argument("--variant", choices=("EQ1", "TWO_BRANCH"), required=True)
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, PreconditionViolated) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TooManyAtoms as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE_LIMIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
