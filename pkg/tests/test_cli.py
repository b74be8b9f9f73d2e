import json
import subprocess
import sys

import pytest

from basiq import cli, fixtures
from basiq.kernel import VARIANTS, check_derivation
from basiq.syntax import parse_derivation


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# (argv, expected exit code)
SCRIPTED = [
    (["check", "epr_rule.blp"], 0),
    (["check", "epr_rule.blp", "--variant", "BL"], 1),
    (["check", "cut_simulates_epr.blp"], 1),
    (["check", "cut_simulates_epr.blp", "--variant", "BSRL"], 0),
    (["check", "epr_with_contexts"], 1),
    (["check", "cut_over_entanglement", "--format", "json"], 0),
    (["check", "no_such_fixture.blp"], 2),
    (["prove", "((A&A^) @ (B&B^)) |- A, B"], 0),
    (["prove", "A, B |- A"], 1),
    (["prove", "A, B |- A", "--variant", "BS"], 0),
    (["prove", "a |- A"], 2),
    (["prove", "A |- A", "--depth", "0"], 2),
    (["equiv", "((A&A^)@(B&B^))", "((A%B)&(A^%B^))"], 0),
    (["equiv", "((A&A^)@(B&B^))", "((B&B^)@(A&A^))"], 0),
    (["equiv", "((A&A^)@(A&A^))", "(A&A^)"], 1),
    (["equiv", "(A &", "A"], 2),
    (["epr-demo", "--trials", "1"], 0),
    (["epr-demo", "--kind", "Bogus"], 2),
    (["variants"], 0),
    (["prove", "A |- A", "--variant", "BX"], 2),
]


@pytest.mark.parametrize("argv, code", SCRIPTED, ids=[" ".join(a) for a, _ in SCRIPTED])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_corpus_has_twenty_invocations():
    assert len(SCRIPTED) == 20


def test_check_names_failing_labels(capsys):
    code, out, _ = run(capsys, "check", "cut_simulates_epr", "--format", "json")
    report = json.loads(out)
    failed = [n for n in report["nodes"] if not n["ok"]]
    assert code == 1
    assert sorted(n["label"] for n in failed) == ["contr.R", "weak.L"]
    assert {n["error"] for n in failed} == {"RuleDisabled"}


def test_check_reads_files_from_disk(capsys, tmp_path):
    f = tmp_path / "leaf.blp"
    f.write_text("ID: A |- A\n")
    assert run(capsys, "check", str(f))[0] == 0
    f.write_text("CUT: |- A\n   ID: A |- A\n")
    code, _, err = run(capsys, "check", str(f))
    assert code == 2 and "line 2, column 4" in err


@pytest.mark.parametrize(
    "goal, variant",
    [
        ("((A&A^) @ (B&B^)) |- A, B", "B"),
        ("((A&A^) @ (B&B^)) |- (A % B)", "B"),
        ("((A&A^) @ (B&B^)) |- (A @ (B&B^))", "B"),
        ("(A * B) |- (B * A)", "BRL"),
        ("A, B |- A", "BS"),
    ],
)
def test_prove_output_round_trips_through_check(capsys, tmp_path, goal, variant):
    code, out, _ = run(capsys, "prove", goal, "--variant", variant)
    assert code == 0
    script = tmp_path / "proof.blp"
    script.write_text(out)
    assert run(capsys, "check", str(script), "--variant", variant)[0] == 0
    assert check_derivation(parse_derivation(out), VARIANTS[variant]).ok


def test_prove_blf_file(capsys, tmp_path):
    goals = tmp_path / "goals.blf"
    goals.write_text("# two goals\n(A & A^) |- A\nA, B |- A\n")
    code, out, _ = run(capsys, "prove", str(goals), "--format", "json")
    results = json.loads(out)["results"]
    assert code == 1
    assert [r["outcome"] for r in results] == ["proved", "exhausted"]


def test_prove_json_fields(capsys):
    _, out, _ = run(capsys, "prove", "A, B |- A", "--format", "json")
    data = json.loads(out)
    assert data["outcome"] == "exhausted" and data["depth"] == 8
    assert data["nodes_explored"] > 0 and data["limit_hit"] is False


def test_equiv_reports_unresolved_as_bounded(capsys):
    code, out, _ = run(capsys, "equiv", "((A&A^)@(A&A^))", "(A&A^)")
    assert code == 1
    assert out.startswith("Unresolved") and "bounded evidence only" in out


@pytest.mark.parametrize("kind, corr", [("PhiPlus", 1.0), ("PsiPlus", 0.0)])
def test_epr_demo(capsys, kind, corr):
    code, out, _ = run(capsys, "epr-demo", "--kind", kind, "--trials", "10000", "--seed", "7", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["correlation"] == corr
    assert data["epr_fixture"]["ok"]
    assert len(data["first_trials"]) == 10


def test_epr_demo_single_trial(capsys):
    _, out, _ = run(capsys, "epr-demo", "--trials", "1")
    assert sum(line.startswith("trial ") for line in out.splitlines()) == 1


def test_variants_table(capsys):
    _, out, _ = run(capsys, "variants", "--format", "json")
    rows = {r["name"]: r["rules"] for r in json.loads(out)["variants"]}
    assert rows["B"] == {
        "exchange": True, "cut": True, "connectives": True, "@/$": True, "EPR": True,
        "contraction/weakening": False,
    }
    assert rows["BRL"]["@/$"] and not rows["BRL"]["EPR"]
    assert rows["BSRL"]["contraction/weakening"] and not rows["BSRL"]["@/$"]


def test_depth_env_override(monkeypatch, capsys):
    monkeypatch.setenv("BASIQ_DEPTH", "3")
    _, out, _ = run(capsys, "prove", "A, B |- A", "--format", "json")
    assert json.loads(out)["depth"] == 3
    monkeypatch.setenv("BASIQ_DEPTH", "3")
    _, out, _ = run(capsys, "prove", "A, B |- A", "--depth", "5", "--format", "json")
    assert json.loads(out)["depth"] == 5


def test_help_shows_defaults(capsys):
    assert cli.main(["prove", "--help"]) == 0
    out = capsys.readouterr().out
    assert "default: 8" in out and "default: B" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "basiq", "check", "epr_rule"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "B: checked" in proc.stdout


def test_fixture_names_resolve():
    for name in fixtures.names():
        assert fixtures.resolve(name).exists()
        assert fixtures.resolve(f"{name}.blp").exists()
