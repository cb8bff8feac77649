import json
from pathlib import Path

import pytest

from blamelogic.cli import main
from blamelogic.formula import parse_formula
from blamelogic.game import figure1_game, load_game, save_game
from blamelogic.proofs import fixture_path
from blamelogic.semantics import Evaluator

FIG1 = str(Path(__file__).resolve().parent.parent / "data" / "figure1.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    fields = dict(line.split("=", 1) for line in out.splitlines() if "=" in line)
    return code, fields, out, err


def test_check_blame_true(capsys):
    code, f, _, _ = run(capsys, "check", FIG1, "0", "B[{a1};1000] dead")
    assert code == 0
    assert f["holds"] == "true" and f["minimal_degree"] == "1000" and f["witness"] == "a1:help"


def test_check_none_to_blame(capsys):
    code, f, _, _ = run(capsys, "check", FIG1, "0", "B[{};5] dead")
    assert code == 1 and f["holds"] == "false"


def test_check_bad_play(capsys):
    code, _, _, err = run(capsys, "check", FIG1, "99", "dead")
    assert code == 2 and "play index out of range" in err


def test_check_bad_formula(capsys):
    code, _, _, err = run(capsys, "check", FIG1, "0", "B[{a1} dead")
    assert code == 2 and err.startswith("error:")


def test_check_agrees_with_library(capsys):
    g = figure1_game()
    ev = Evaluator(g)
    for play in range(8):
        for text in ("dead", "B[{a1, a2}; 1000] dead", "N a2helps_implies_alive", "B[{a3}; 5000] dead"):
            code, f, _, _ = run(capsys, "check", FIG1, str(play), text)
            assert (f["holds"] == "true") == ev.evaluate(play, parse_formula(text))
            assert code == (0 if f["holds"] == "true" else 1)


@pytest.mark.parametrize("play, coalition, code, key, value", [
    ("0", "{a1,a2}", 0, "minimal_degree", "1000"),
    ("0", "{a3}", 1, "result", "not blameable: no preventing profile"),
    ("2", "{a1}", 1, "result", "not blameable: φ false here"),
])
def test_degree(capsys, play, coalition, code, key, value):
    got, f, _, _ = run(capsys, "degree", FIG1, play, coalition, "dead")
    assert got == code and f[key] == value


def test_soundness_ok(capsys):
    code, _, out, _ = run(capsys, "soundness", "--trials", "50", "--seed", "7")
    assert code == 0 and json.loads(out)["violations"] == 0


def test_soundness_mutation_persists_counterexample(capsys, tmp_path):
    code, _, out, _ = run(capsys, "soundness", "--trials", "50", "--seed", "7",
                          "--mutate", "drop-phi-conjunct", "--out", str(tmp_path))
    doc = json.loads(out)
    assert code == 1 and doc["violations"] > 0
    assert Path(doc["counterexamples"][0]["bundle"]).exists()


def test_soundness_zero_trials(capsys):
    assert run(capsys, "soundness", "--trials", "0")[0] == 2


def test_countermodel_round_trip(capsys, tmp_path):
    out = tmp_path / "cm.json"
    code, f, _, _ = run(capsys, "countermodel", "p -> N p", "--out", str(out))
    assert code == 0 and f["result"] == "countermodel"
    code, g, _, _ = run(capsys, "check", str(out), f["play"], "p -> N p")
    assert code == 1 and g["holds"] == "false"


def test_countermodel_exhausted(capsys, tmp_path):
    code, f, _, err = run(capsys, "countermodel", "N p -> p", "--out", str(tmp_path / "x.json"))
    assert code == 1 and f["result"] == "exhausted" and "does not establish validity" in err


def test_countermodel_budget(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("BW_NODE_BUDGET", "10")
    code, _, _, _ = run(capsys, "countermodel", "B[{a1};1]p -> B[{a1,a2};1]q", "--max-plays", "4",
                        "--out", str(tmp_path / "x.json"))
    assert code == 3
    code, _, _, _ = run(capsys, "countermodel", "p -> N p", "--budget", "1000", "--out", str(tmp_path / "y.json"))
    assert code == 0


def test_prove_fixture(capsys):
    code, f, _, _ = run(capsys, "prove", "--fixture", "lemma4_n2")
    assert code == 0 and f["status"] == "ok"


def test_prove_perturbed_file(capsys, tmp_path):
    doc = json.loads(fixture_path("lemma1_n2").read_text())
    doc["lines"][6]["formula"] = "!(" + doc["lines"][6]["formula"] + ")"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, f, _, err = run(capsys, "prove", str(path))
    assert code == 1 and "line 7: formula mismatch" in err
    assert f["line"] == "7" and f["code"] == "formula-mismatch"


def test_prove_missing_file(capsys, tmp_path):
    assert run(capsys, "prove", str(tmp_path / "nope.json"))[0] == 2
    assert run(capsys, "prove")[0] == 2


def test_fmt(capsys):
    code, _, out, _ = run(capsys, "fmt", "p & q")
    assert code == 0 and out.strip() == "!(p -> !q)"


def test_bad_game_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    save_game(figure1_game(), path)
    doc = json.loads(path.read_text())
    del doc["zero_action"]
    path.write_text(json.dumps(doc))
    code, _, _, err = run(capsys, "check", str(path), "0", "dead")
    assert code == 2 and "zero_action missing" in err


def test_unknown_subcommand(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_lenient_flag(capsys, tmp_path):
    assert run(capsys, "check", FIG1, "0", "zzz")[0] == 2
    assert run(capsys, "check", FIG1, "0", "!zzz", "--lenient")[0] == 0
    assert load_game(FIG1) == figure1_game()
