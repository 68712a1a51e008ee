from __future__ import annotations

import json

import pytest

from lemgap.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def eq1_file(tmp_path, capsys):
    path = tmp_path / "eq1.json"
    code, _, _ = run(capsys, "demo", "--variant", "EQ1", "--out", str(path))
    assert code == 0
    return str(path)


@pytest.fixture
def two_branch_file(tmp_path, capsys):
    path = tmp_path / "two_branch.json"
    code, _, _ = run(capsys, "demo", "--variant", "TWO_BRANCH", "--out", str(path))
    assert code == 0
    return str(path)


@pytest.fixture
def chain_file(tmp_path):
    path = tmp_path / "chain.json"
    path.write_text(json.dumps({"axioms": ["p", "p -> q"], "rules": ["MP"]}))
    return str(path)


# --- parse ---------------------------------------------------------------------

def test_parse_text_output(capsys):
    code, out, err = run(capsys, "parse", "(p|~p)->q")
    assert code == 0
    assert out == "(p | ~p) -> q\nsize: 6\natoms: p, q\n"


def test_parse_atom(capsys):
    code, out, _ = run(capsys, "parse", "p")
    assert code == 0
    assert out.splitlines()[0] == "p"
    assert "size: 1" in out


def test_parse_machine_output_round_trips(capsys):
    code, out, _ = run(capsys, "parse", "--format", "machine", "(p|~p)->q")
    assert code == 0
    doc = json.loads(out)
    assert doc == {"formula": "(p | ~p) -> q", "size": 6, "atoms": ["p", "q"]}
    assert json.dumps(doc, indent=2) + "\n" == out


def test_parse_error_exit_code_and_offset(capsys):
    code, out, err = run(capsys, "parse", "p->")
    assert code == 2
    assert out == ""
    assert "offset 3" in err


# --- classify ------------------------------------------------------------------

def test_classify_tautology(capsys):
    code, out, _ = run(capsys, "classify", "p|~p")
    assert code == 0
    assert out == "Tautology\n"


def test_classify_contradiction_and_contingent(capsys):
    assert run(capsys, "classify", "p&~p")[1] == "Contradiction\n"
    assert run(capsys, "classify", "p->q")[1] == "Contingent\n"


def test_classify_independent_against_system(capsys, eq1_file):
    code, out, _ = run(capsys, "classify", "--independent", "p", "--system", eq1_file)
    assert code == 0
    assert out == "independent: true\n"


def test_classify_entails_against_system(capsys, eq1_file):
    code, out, _ = run(capsys, "classify", "--entails", "q", "--system", eq1_file)
    assert code == 0
    assert out == "entailed: true\n"
    code, out, _ = run(capsys, "classify", "--entails", "p", "--system", eq1_file)
    assert code == 0
    assert out.splitlines()[0] == "entailed: false"
    assert out.splitlines()[1].startswith("countermodel:")


def test_classify_atom_limit_exit_code(capsys):
    formula = "|".join(f"x{i}" for i in range(21))
    code, _, err = run(capsys, "classify", formula)
    assert code == 4
    assert "limit" in err


def test_classify_requires_formula_or_flag(capsys):
    code, _, err = run(capsys, "classify")
    assert code == 1


# --- enumerate -------------------------------------------------------------------

def test_enumerate_eq1(capsys, eq1_file):
    code, out, _ = run(capsys, "enumerate", "--system", eq1_file)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2
    assert "(p | ~p) -> q" in lines[0]
    assert "fixed point reached" in lines[1]


def test_enumerate_chain(capsys, chain_file):
    code, out, _ = run(capsys, "enumerate", "--system", chain_file)
    assert code == 0
    body = out.splitlines()
    assert len(body) == 4
    assert "MP" in body[2] and body[2].strip().endswith("q")


def test_enumerate_machine_round_trips(capsys, chain_file):
    code, out, _ = run(capsys, "enumerate", "--format", "machine", "--system", chain_file)
    assert code == 0
    doc = json.loads(out)
    assert json.dumps(doc, indent=2) + "\n" == out
    assert [t["formula"] for t in doc["theorems"]] == ["p", "p -> q", "q"]
    assert [t["generation"] for t in doc["theorems"]] == [0, 0, 1]
    assert doc["stats"]["fixed_point_reached"] is True


def test_enumerate_unknown_rule_field_named(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"axioms": [], "rules": ["FROB"]}))
    code, out, err = run(capsys, "enumerate", "--system", str(path))
    assert code == 1
    assert "rules[0]" in err


def test_enumerate_missing_system_flag(capsys):
    code, _, err = run(capsys, "enumerate")
    assert code == 1
    assert "--system" in err


def test_enumerate_missing_file(capsys):
    code, _, err = run(capsys, "enumerate", "--system", "/nonexistent/x.json")
    assert code == 1


def test_enumerate_max_size_override(capsys, tmp_path):
    path = tmp_path / "grow.json"
    path.write_text(json.dumps({"axioms": ["p", "q"], "rules": ["AND_INTRO"]}))
    code, out, _ = run(
        capsys, "enumerate", "--system", str(path), "--max-size", "3", "--format", "machine"
    )
    assert code == 0
    formulas = [t["formula"] for t in json.loads(out)["theorems"]]
    assert all(len(f.split()) <= 3 for f in formulas)
    # Overriding below an axiom's size is a config error.
    code, _, err = run(capsys, "enumerate", "--system", str(path), "--max-size", "0")
    assert code == 1


# --- prove ----------------------------------------------------------------------

def test_prove_chain_goal(capsys, chain_file):
    code, out, _ = run(capsys, "prove", "--system", chain_file, "--goal", "q")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 3
    assert "AXIOM" in lines[0] and "MP" in lines[2]


def test_prove_eq1_goal_unreachable(capsys, eq1_file):
    code, out, err = run(capsys, "prove", "--system", eq1_file, "--goal", "q")
    assert code == 3
    assert out == ""
    assert "fixed point reached without goal" in err


def test_prove_not_derived_within_bounds(capsys, tmp_path):
    path = tmp_path / "short.json"
    path.write_text(
        json.dumps(
            {
                "axioms": ["a", "a -> b", "b -> c"],
                "rules": ["MP"],
                "bounds": {"max_generations": 1},
            }
        )
    )
    code, _, err = run(capsys, "prove", "--system", str(path), "--goal", "c")
    assert code == 3
    assert "not derived within bounds" in err


def test_prove_eq1_with_lbi_rule(capsys, tmp_path):
    path = tmp_path / "lbi.json"
    path.write_text(json.dumps({"axioms": ["(p | ~p) -> q"], "rules": ["MP", "LBI_RULE"]}))
    code, out, _ = run(capsys, "prove", "--system", str(path), "--goal", "q")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2
    assert "AXIOM" in lines[0] and "LBI_RULE" in lines[1]


def test_prove_machine_output(capsys, chain_file):
    code, out, _ = run(
        capsys, "prove", "--format", "machine", "--system", chain_file, "--goal", "q"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["goal"] == "q"
    assert [s["rule"] for s in doc["steps"]] == ["AXIOM", "AXIOM", "MP"]
    assert doc["steps"][2]["premises"] == [0, 1]


# --- gap ------------------------------------------------------------------------

def test_gap_eq1_close_with_lbi(capsys, eq1_file):
    code, out, _ = run(capsys, "gap", "--system", eq1_file, "--close-with", "LBI_RULE")
    assert code == 0
    assert "gap (1):" in out
    assert "gap_closed=true" in out


def test_gap_empty_for_plain_system(capsys, chain_file):
    code, out, _ = run(capsys, "gap", "--system", chain_file)
    assert code == 0
    assert "gap (0):" in out


def test_gap_two_branch_case_split(capsys, two_branch_file):
    code, out, _ = run(
        capsys, "gap", "--system", two_branch_file, "--close-with", "CASE_SPLIT"
    )
    assert code == 0
    assert "TWO_BRANCH" in out
    assert "gap_closed=true" in out


def test_gap_machine_round_trips(capsys, eq1_file):
    code, out, _ = run(
        capsys, "gap", "--format", "machine", "--system", eq1_file,
        "--close-with", "LEM_AXIOM",
    )
    assert code == 0
    doc = json.loads(out)
    assert json.dumps(doc, indent=2) + "\n" == out
    assert doc["gap"][0]["conclusion"] == "q"
    assert doc["gap_closed"] is True


def test_gap_precondition_violation(capsys, tmp_path):
    path = tmp_path / "lem.json"
    path.write_text(json.dumps({"axioms": ["(p | ~p) -> q"], "rules": ["MP", "LEM_AXIOM"]}))
    code, _, err = run(capsys, "gap", "--system", str(path))
    assert code == 1
    assert "case-split" in err


# --- demo -----------------------------------------------------------------------

def test_demo_writes_loadable_file(capsys, tmp_path):
    path = tmp_path / "demo.json"
    code, out, _ = run(capsys, "demo", "--variant", "EQ1", "--out", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["axioms"] == ["(p | ~p) -> q"]
    assert doc["rules"] == ["MP"]


def test_demo_two_branch_axioms(capsys, tmp_path):
    path = tmp_path / "demo.json"
    code, _, _ = run(capsys, "demo", "--variant", "TWO_BRANCH", "--out", str(path))
    assert code == 0
    assert json.loads(path.read_text())["axioms"] == ["rh -> y", "~rh -> y"]


def test_demo_unwritable_path(capsys, tmp_path):
    target = tmp_path / "no_such_dir" / "demo.json"
    code, _, err = run(capsys, "demo", "--variant", "EQ1", "--out", str(target))
    assert code == 1
    assert "cannot write" in err


def test_demo_machine_prints_document(capsys, tmp_path):
    path = tmp_path / "demo.json"
    code, out, _ = run(
        capsys, "demo", "--format", "machine", "--variant", "EQ1", "--out", str(path)
    )
    assert code == 0
    assert json.loads(out)["axioms"] == ["(p | ~p) -> q"]


def test_max_generations_override(capsys, tmp_path):
    path = tmp_path / "chain3.json"
    path.write_text(json.dumps({"axioms": ["a", "a -> b", "b -> c"], "rules": ["MP"]}))
    code, out, _ = run(
        capsys, "enumerate", "--system", str(path), "--max-generations", "1",
        "--format", "machine",
    )
    assert code == 0
    doc = json.loads(out)
    formulas = [t["formula"] for t in doc["theorems"]]
    assert "b" in formulas and "c" not in formulas
    assert doc["stats"]["fixed_point_reached"] is False


def test_remaining_machine_outputs_round_trip(capsys, tmp_path, chain_file, eq1_file):
    demo_out = tmp_path / "d.json"
    for argv in (
        ("classify", "--format", "machine", "p|~p"),
        ("classify", "--format", "machine", "--entails", "p", "--system", eq1_file),
        ("classify", "--format", "machine", "--independent", "p", "--system", eq1_file),
        ("prove", "--format", "machine", "--system", chain_file, "--goal", "q"),
        ("demo", "--format", "machine", "--variant", "EQ1", "--out", str(demo_out)),
    ):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        assert json.dumps(json.loads(out), indent=2) + "\n" == out, argv


# --- global behaviour -------------------------------------------------------------

def test_usage_error_exit_code(capsys):
    code, _, err = run(capsys, "gap", "--close-with", "BOGUS")
    assert code == 1


def test_unknown_command_exit_code(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 1


def test_repeated_runs_identical_same_process(capsys, eq1_file):
    first = run(capsys, "gap", "--format", "machine", "--system", eq1_file,
                "--close-with", "LBI_RULE")
    second = run(capsys, "gap", "--format", "machine", "--system", eq1_file,
                 "--close-with", "LBI_RULE")
    assert first == second
