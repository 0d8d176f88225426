from __future__ import annotations

import random

import pytest

from core.config import Limits
from core.errors import FragmentViolation, MachineError
from evaluation import Assignment, Evaluator
from fagin import crosscheck, formula_to_wtm, free_variables
from fagin.compiler import ACCEPT, BLANK, MARK
from logic.generators import FormulaGenerator
from logic.library import library_formula
from logic.parser import parse_formula
from machines import behavior
from semirings import build_semiring
from structures.encoding import encode
from structures.generators import all_structures
from structures.model import parse_signature
from tests.conftest import graph, unary

UNARY = parse_signature("p:1")
STEPS = 200_000


@pytest.mark.parametrize(
    "name, params, text",
    [
        ("nat", {}, "sum x. (p(x) ? c(3))"),
        ("nat", {}, "sum P:1. prod x. (P(x) ? c(2))"),
        ("nat", {}, "c(2) (*) exists x. p(x) (+) forall x. !p(x)"),
        ("int_mod", {"modulus": 3}, "sum P:1. prod x. (P(x) ? c(2))"),
        ("nat_max", {}, "sum x. (p(x) ? c(3)) (+) c(1)"),
        ("nat_max", {}, "sum X:1. prod x. ((X(x) -> p(x)) ? (X(x) ? c(1)))"),
        ("langs", {}, "prod x. ((p(x) ? c({a})) (*) c({b}))"),
        ("bool", {}, "exists x. forall y. (x < y | x = y)"),
        ("nat", {}, "sum x. sum y. ((x < y & p(y)) ? c(2))"),
        ("nat", {}, "(p(1) ? c(3)) (*) (1 < 2 ? c(5))"),
    ],
)
def test_compiled_machine_agrees_with_the_formula(name, params, text):
    semiring = build_semiring(name, params)
    report = crosscheck(parse_formula(text), UNARY, semiring, 2)
    assert report.passed, report.counterexample
    assert len(report.rows) == 2 + 4


def test_compiled_machine_for_a_graph_formula():
    nat = build_semiring("nat")
    sig = parse_signature("edge:2")
    formula = parse_formula("sum x. sum y. (edge(x,y) ? c(2))")
    machine = formula_to_wtm(formula, sig, nat)
    for structure in all_structures(sig, 2):
        assert behavior(machine, encode(structure), STEPS) == Evaluator(structure, nat).value(formula)


def test_constant_coordinates_of_a_binary_relation():
    nat = build_semiring("nat")
    sig = parse_signature("edge:2")
    formula = parse_formula("(edge(1,2) ? c(3)) (*) (edge(2,0) ? c(5)) (*) sum x. (edge(x,x) ? c(2))")
    machine = formula_to_wtm(formula, sig, nat)
    for structure in (graph(3, [(1, 2), (2, 0), (1, 1)]), graph(3, [(0, 1)]), graph(2, [(1, 1)])):
        assert behavior(machine, encode(structure), STEPS) == Evaluator(structure, nat).value(formula)


def test_compiled_machine_uses_single_character_symbols():
    machine = formula_to_wtm(library_formula("subset_count"), UNARY, build_semiring("nat"))
    assert {MARK, BLANK, "0", "1"} <= set(machine.work_alphabet)
    assert all(len(symbol) == 1 for symbol in machine.work_alphabet)
    assert MARK not in machine.input_alphabet
    assert machine.accepting == frozenset({ACCEPT})


@pytest.mark.parametrize(
    "text, expected",
    [
        ("c(4)", 4),
        ("sum x. c(1)", 4),
        ("sum x. (p(x) ? c(3))", 3 + 1 + 3 + 1),
        ("prod x. (p(x) ? c(2))", 2 * 2),
        ("sum P:1. prod x. (P(x) ? c(2))", 3**4),
        ("sum x. sum y. (x < y)", 6),
    ],
)
def test_one_machine_serves_four_elements(text, expected):
    nat = build_semiring("nat")
    formula = parse_formula(text)
    machine = formula_to_wtm(formula, UNARY, nat)
    structure = unary(4, [1, 3])
    assert Evaluator(structure, nat).value(formula) == expected
    assert behavior(machine, encode(structure), STEPS, strict=True) == expected


def test_inputs_of_no_encoding_length_have_no_accepting_run():
    nat = build_semiring("nat")
    machine = formula_to_wtm(parse_formula("c(4)"), parse_signature("edge:2"), nat)
    assert behavior(machine, list("0000"), STEPS) == 4
    assert behavior(machine, list("000"), STEPS) == 0
    assert behavior(machine, [], STEPS) == 0


def test_nullary_signature_cannot_fix_the_universe():
    with pytest.raises(MachineError):
        formula_to_wtm(parse_formula("c(1)"), parse_signature("q:0"), build_semiring("nat"))


def test_free_first_order_variables_are_read_from_the_input():
    nat = build_semiring("nat")
    formula = parse_formula("p(x) ? c(5)")
    assert free_variables(formula) == [("x", None)]
    machine = formula_to_wtm(formula, UNARY, nat)
    structure = unary(2, [1])
    for element, expected in ((0, 1), (1, 5)):
        assert behavior(machine, encode(structure, [element]), STEPS) == expected
        assert Evaluator(structure, nat).value(formula, Assignment().bind("x", element)) == expected


def test_free_sets_are_read_from_the_input():
    nat = build_semiring("nat")
    formula = parse_formula("prod x. (X(x) ? c(3))")
    assert free_variables(formula) == [("X", 1)]
    machine = formula_to_wtm(formula, UNARY, nat)
    structure = unary(2, [])
    assert behavior(machine, encode(structure, [(1, {(0,), (1,)})]), STEPS) == 9
    assert behavior(machine, encode(structure, [(1, {(1,)})]), STEPS) == 3


RANDOM_SEMIRINGS = [("nat", {}), ("int_mod", {"modulus": 2}), ("nat_max", {}), ("langs", {})]


@pytest.mark.parametrize("name, params", RANDOM_SEMIRINGS)
@pytest.mark.parametrize("seed", range(20))
def test_random_sentences_compile_faithfully(name, params, seed):
    semiring = build_semiring(name, params)
    size_cap = 3 if seed < 5 else 2
    generator = FormulaGenerator.for_semiring(
        UNARY, random.Random(seed), semiring, max_so=1, max_arity=1 if size_cap == 3 else 2
    )
    formula = generator.weso(3)
    report = crosscheck(formula, UNARY, semiring, size_cap, limits=Limits(max_steps=STEPS))
    assert report.passed, (str(formula), report.counterexample)
    assert len(report.rows) == sum(2**n for n in range(1, size_cap + 1))


@pytest.mark.parametrize(
    "text",
    [
        "[lfp R(x). p(x)](0) ? c(2)",
        "sum x. sum X:1. (X(x) ? c(2))",
        "prod X:1. c(2)",
    ],
)
def test_only_existential_second_order_sentences_compile(text):
    with pytest.raises(FragmentViolation):
        formula_to_wtm(parse_formula(text), UNARY, build_semiring("nat"))


def test_formula_crosscheck_needs_a_sentence():
    with pytest.raises(FragmentViolation):
        crosscheck(parse_formula("p(x) ? c(5)"), UNARY, build_semiring("nat"), 1)
