from __future__ import annotations

import json

from cli import main
from cli.commands import exit_code
from core.errors import CapExceededError, LiveBranchesError
from evaluation import Evaluator
from logic.parser import load_formula
from machines import behavior, load_machine
from semirings import build_semiring
from structures.encoding import encode
from tests.conftest import fixture_path, unary

TRIANGLE = fixture_path("structures", "triangle.json")
UNARY2 = fixture_path("structures", "unary2.json")
EMPTY2 = fixture_path("structures", "empty2.json")


def _lines(capsys):
    return capsys.readouterr().out.strip().splitlines()


def test_eval_library_formula(capsys):
    assert main(["eval", "--library", "largest_clique", "--structure", TRIANGLE, "-s", "arctic"]) == 0
    assert _lines(capsys) == ["3"]


def test_eval_formula_file_over_the_rationals(capsys):
    half = fixture_path("formulas", "half.wl")
    assert main(["eval", "-f", half, "--structure", EMPTY2, "-s", "rat"]) == 0
    assert _lines(capsys) == ["1/2"]


def test_eval_with_assignment_and_stats(capsys):
    code = main(
        ["eval", "--text", "edge(x,0) (*) c(4)", "--structure", TRIANGLE, "--assign", "x=1", "--stats"]
    )
    assert code == 0
    lines = _lines(capsys)
    assert lines[0] == "4"
    assert "so_branches=0" in lines


def test_eval_with_semiring_parameters(capsys):
    assert main(["eval", "--library", "subset_count", "--structure", UNARY2, "-s", "int_mod", "-p", "modulus=4"]) == 0
    assert _lines(capsys) == ["1"]


def test_unknown_semiring_is_bad_input(capsys):
    assert main(["eval", "--library", "subset_count", "--structure", UNARY2, "-s", "reals"]) == 2


def test_missing_file_is_bad_input():
    assert main(["eval", "--library", "subset_count", "--structure", "no/such/file.json"]) == 2
    assert main(["run", "-m", "no/such/machine.json", "-i", "0"]) == 2


def test_cap_and_fragment_exit_codes():
    assert main(["--max-subsets", "3", "eval", "--text", "sum X:2. c(1)", "--structure", UNARY2]) == 3
    assert main(["compile", "--text", "prod X:1. c(2)", "--signature", "p:1"]) == 5


def test_run_machine(capsys):
    assert main(["run", "-m", fixture_path("machines", "two_branch.json"), "-i", "0"]) == 0
    assert _lines(capsys) == ["5"]
    assert main(["run", "-m", fixture_path("machines", "walk_right.json"), "-i", "0", "--meters"]) == 0
    assert _lines(capsys) == ["10", "time=2", "space=2"]


def test_run_with_live_branches():
    looping = fixture_path("machines", "looping.json")
    assert main(["--max-steps", "5", "run", "-m", looping, "-i", "0", "--strict"]) == 4
    assert main(["--max-steps", "5", "run", "-m", looping, "-i", "0"]) == 0


def test_compile_then_run(tmp_path, capsys):
    target = tmp_path / "subset_count.json"
    code = main(["compile", "--library", "subset_count", "-o", str(target)])
    assert code == 0
    document = json.loads(target.read_text(encoding="utf-8"))
    assert document["semiring"] == "nat"
    assert behavior(load_machine(str(target)), encode(unary(2, [0])), 200_000) == 9
    assert main(["run", "-m", str(target), "-i", "10"]) == 0
    assert _lines(capsys) == ["9"]


def test_decompile_writes_a_parsable_sentence(tmp_path):
    target = tmp_path / "read_first.wl"
    code = main(["decompile", "-m", fixture_path("machines", "read_first.json"), "--signature", "p:1", "-o", str(target)])
    assert code == 0
    formula = load_formula(str(target))
    nat = build_semiring("nat")
    assert Evaluator(unary(2, [0]), nat).value(formula) == 2
    assert Evaluator(unary(2, []), nat).value(formula) == 3


def test_decompile_unordered_needs_an_idempotent_semiring():
    read_first = fixture_path("machines", "read_first.json")
    assert main(["decompile", "-m", read_first, "--signature", "p:1", "--unordered"]) == 5


def test_reduce_then_sat(tmp_path, capsys):
    target = tmp_path / "subset_count.prop"
    assert main(["reduce", "--library", "subset_count", "--structure", UNARY2, "-o", str(target)]) == 0
    assert "P[0]" in target.read_text(encoding="utf-8")
    assert main(["sat", "--prop", str(target)]) == 0
    assert _lines(capsys) == ["9"]
    assert main(["sat", "--text", "x | !x & c(3)"]) == 0
    assert _lines(capsys) == ["4"]


def test_check_formula_and_machine(capsys):
    assert main(["check", "--library", "subset_count", "--size-cap", "2"]) == 0
    lines = _lines(capsys)
    assert "status: PASS" in lines
    assert main(["check", "-m", fixture_path("machines", "read_first.json"), "--signature", "p:1"]) == 0
    assert "status: PASS" in _lines(capsys)


def test_semirings_table(capsys):
    assert main(["semirings"]) == 0
    text = capsys.readouterr().out
    for name in ("bool", "nat", "int_mod", "langs", "trop"):
        assert name in text


def test_monadic_mode_from_the_config(tmp_path):
    config = tmp_path / "monadic.yaml"
    config.write_text("logic:\n  so_mode: monadic\n", encoding="utf-8")
    assert main(["-c", str(config), "eval", "--text", "sum X:2. c(1)", "--structure", UNARY2]) == 5
    assert main(["-c", str(config), "eval", "--text", "sum X:1. c(1)", "--structure", UNARY2]) == 0


def test_missing_config_is_bad_input():
    assert main(["-c", "no/such/config.yaml", "semirings"]) == 2


def test_exit_codes():
    assert exit_code(ValueError("bad")) == 2
    assert exit_code(FileNotFoundError("gone")) == 2
    assert exit_code(RuntimeError("boom")) == 1
    assert exit_code(CapExceededError("subsets", 30, 20)) == 3
    assert exit_code(LiveBranchesError(2, 10)) == 4
