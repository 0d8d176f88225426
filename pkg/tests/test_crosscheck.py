from __future__ import annotations

import logging

import pytest

from core.config import Limits
from core.types import CheckStatus
from evaluation import Evaluator
from fagin import crosscheck, decompile_parts, formula_pair, formula_to_wtm
from logic.library import library_formula
from logic.parser import parse_formula
from machines import behavior, exact_length_behavior, load_machine
from semirings import build_semiring
from structures.encoding import encode
from structures.model import parse_signature
from tests.conftest import fixture_path

UNARY = parse_signature("p:1")


def _pair(formula, semiring, mutate=None):
    def left(structure):
        return Evaluator(structure, semiring).value(formula)

    def right(structure):
        value = left(structure)
        return mutate(structure, value) if mutate else value

    return left, right


def test_identical_sides_pass():
    nat = build_semiring("nat")
    report = crosscheck(_pair(library_formula("subset_count"), nat), UNARY, nat, 3)
    assert report.status is CheckStatus.PASS
    assert report.counterexample is None
    assert len(report.rows) == 2 + 4 + 8


def test_a_mutation_is_found_with_its_witness(caplog):
    nat = build_semiring("nat")

    def bump_when_full(structure, value):
        return value + 1 if len(structure.relation("p")) == structure.universe == 2 else value

    with caplog.at_level(logging.WARNING, logger="fagin.crosscheck"):
        report = crosscheck(_pair(library_formula("subset_count"), nat, bump_when_full), UNARY, nat, 2)
    assert report.status is CheckStatus.FAIL
    witness = report.counterexample
    assert witness.universe == 2
    assert (witness.left, witness.right) == ("9", "10")
    assert "Crosscheck mismatch" in caplog.text
    assert report.summary()["mismatches"] == 1


def test_a_wrong_constant_in_a_compiled_formula_is_caught():
    nat = build_semiring("nat")
    formula = parse_formula("sum x. (p(x) ? c(3))")
    value, _ = formula_pair(formula, UNARY, nat)
    _, wrong_run = formula_pair(parse_formula("sum x. (p(x) ? c(4))"), UNARY, nat)
    report = crosscheck((value, wrong_run), UNARY, nat, 2)
    assert not report.passed
    assert report.counterexample.universe == 1


def test_report_frame_and_summary():
    nat = build_semiring("nat")
    report = crosscheck(parse_formula("sum x. (p(x) ? c(2))"), UNARY, nat, 2, threads=2)
    frame = report.to_frame()
    assert list(frame.columns) == ["universe", "structure", "left", "right", "equal"]
    assert frame["equal"].all()
    summary = report.summary()
    assert summary["sizes"] == {1: 2, 2: 4}
    assert summary["status"] == "PASS"
    assert (summary["left"], summary["right"]) == ("formula", "machine")


def test_threads_keep_row_order():
    nat = build_semiring("nat")
    pair = _pair(library_formula("subset_count"), nat)
    serial = crosscheck(pair, UNARY, nat, 2)
    threaded = crosscheck(pair, UNARY, nat, 2, threads=4)
    assert serial.rows == threaded.rows


def test_a_corrupted_transition_weight_is_caught():
    nat = build_semiring("nat")
    formula = parse_formula("sum x. (p(x) ? c(3))")
    machine = formula_to_wtm(formula, UNARY, nat)
    weighted = [transition for transition, weight in machine.weights.items() if weight == 3]
    assert len(weighted) == 1
    corrupted = machine.replace_weights({**machine.weights, weighted[0]: 4})

    def value(structure):
        return Evaluator(structure, nat).value(formula)

    def run(structure):
        return behavior(corrupted, encode(structure), Limits().max_steps, strict=True)

    report = crosscheck((value, run), UNARY, nat, 2)
    assert report.status is CheckStatus.FAIL
    assert (report.counterexample.left, report.counterexample.right) == ("3", "4")


@pytest.mark.parametrize("part", ["accepts", "initial_tape"])
def test_dropping_a_run_constraint_is_caught(part):
    nat = build_semiring("nat")
    machine = load_machine(fixture_path("machines", "read_first.json"))
    parts = decompile_parts(machine, UNARY, 1)
    assert part in dict(parts.psi_parts)
    loosened = parts.without(part)

    def run(structure):
        return exact_length_behavior(parts.machine, encode(structure), structure.universe - 1)

    def value(structure):
        return Evaluator(structure, nat).value(loosened)

    report = crosscheck((run, value), UNARY, nat, 2)
    assert report.status is CheckStatus.FAIL
    assert crosscheck((run, lambda s: Evaluator(s, nat).value(parts.formula)), UNARY, nat, 2).passed
