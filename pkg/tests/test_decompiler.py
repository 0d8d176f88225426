from __future__ import annotations

import pytest

from core.config import Limits
from core.errors import MachineError, SemiringFlagsError
from core.types import Fragment
from evaluation import Evaluator
from fagin import crosscheck, decompile_parts, machine_pair, wtm_to_weso, wtm_to_weso_unordered
from logic.ast import SumSO, is_sentence
from logic.fragments import check_fragment
from machines import exact_length_computations, load_machine
from semirings import build_semiring
from structures.encoding import encode
from structures.model import parse_signature
from tests.conftest import fixture_path, unary

UNARY = parse_signature("p:1")


def _machine(name: str, semiring=None):
    return load_machine(fixture_path("machines", f"{name}.json"), semiring)


def test_decompiled_sentence_is_existential_second_order():
    formula = wtm_to_weso(_machine("read_first"), UNARY, 1)
    assert is_sentence(formula)
    assert check_fragment(formula, Fragment.WESO) is None
    assert isinstance(formula, SumSO) and formula.arity == 2


@pytest.mark.parametrize("name", ["read_first", "two_branch", "no_accept"])
def test_decompiled_sentence_matches_the_machine(name):
    report = crosscheck(_machine(name), UNARY, build_semiring("nat"), 2, k=1)
    assert report.passed, report.counterexample
    assert (report.left_name, report.right_name) == ("machine", "formula")


def test_values_on_two_element_structures():
    formula = wtm_to_weso(_machine("read_first"), UNARY, 1)
    nat = build_semiring("nat")
    assert Evaluator(unary(2, []), nat).value(formula) == 3
    assert Evaluator(unary(2, [0]), nat).value(formula) == 2
    # a single time point leaves no room for a step
    assert Evaluator(unary(1, []), nat).value(formula) == 0


def test_machine_without_accepting_states_gives_zero():
    formula = wtm_to_weso(_machine("no_accept"), UNARY, 1)
    nat = build_semiring("nat")
    for structure in (unary(2, []), unary(2, [1])):
        assert Evaluator(structure, nat).value(formula) == 0


def test_run_count_formula_counts_computations():
    nat = build_semiring("nat")
    parts = decompile_parts(_machine("two_branch"), UNARY, 1)
    counting = parts.run_count_formula()
    for marked, expected in (([], 2), ([0], 0)):
        structure = unary(2, marked)
        runs = exact_length_computations(parts.machine, encode(structure), 1)
        assert len(runs) == expected
        assert Evaluator(structure, nat).value(counting) == expected


def test_decompiled_parts_name_one_variable_per_symbol_and_state():
    parts = decompile_parts(_machine("read_first"), UNARY, 1)
    assert set(parts.symbols) == {"0", "1", "_"}
    assert set(parts.states) == {"q0", "qa"}
    assert all(arity == 2 for _, arity in parts.so_vars)
    assert parts.machine.tracked == frozenset({"qa"})


def test_unordered_sentence_agrees_in_an_idempotent_semiring():
    nat_max = build_semiring("nat_max")
    machine = _machine("read_first", nat_max)
    ordered = crosscheck(machine, UNARY, nat_max, 2, k=1)
    assert ordered.passed
    pair = machine_pair(machine, UNARY, 1, Limits(), unordered=True)
    unordered = crosscheck(pair, UNARY, nat_max, 2, names=("machine", "unordered"))
    assert unordered.passed, unordered.counterexample
    formula = wtm_to_weso_unordered(machine, UNARY, 1)
    assert isinstance(formula, SumSO) and formula.var == "L"


def test_unordered_sentence_needs_an_idempotent_semiring():
    with pytest.raises(SemiringFlagsError):
        decompile_parts(_machine("read_first"), UNARY, 1, unordered=True)


def test_shape_requirements():
    machine = _machine("read_first")
    with pytest.raises(MachineError):
        decompile_parts(machine, UNARY, 0)
    with pytest.raises(MachineError):
        decompile_parts(machine, parse_signature("edge:2"), 1)
