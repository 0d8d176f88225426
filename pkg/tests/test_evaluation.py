from __future__ import annotations

import random
from fractions import Fraction

import pytest

from core.config import Limits
from core.errors import CapExceededError, ParseError, StructureError
from evaluation import Assignment, EvalContext, Evaluator, eval_bool, eval_weighted, parse_assignment
from logic.generators import FormulaGenerator
from logic.library import library_formula
from logic.parser import parse_formula
from semirings import build_semiring
from structures.generators import random_structure
from structures.model import parse_signature
from tests import oracles
from tests.conftest import graph, random_graphs, unary


def test_largest_clique_in_the_arctic_semiring():
    arctic = build_semiring("arctic")
    formula = library_formula("largest_clique")
    for structure in random_graphs(12, 5, seed=11):
        value = Evaluator(structure, arctic).value(formula)
        assert arctic.format(value) == str(oracles.max_clique(structure))


def test_clique_counts_over_the_rationals():
    rat = build_semiring("rat")
    pairs = library_formula("n_cliques_2")
    triples = library_formula("n_cliques_3")
    for structure in random_graphs(10, 5, seed=3):
        evaluator = Evaluator(structure, rat)
        assert evaluator.value(pairs) == Fraction(oracles.clique_count(structure, 2))
        assert evaluator.value(triples) == Fraction(oracles.clique_count(structure, 3))


def test_min_cut_in_the_tropical_semiring():
    trop = build_semiring("trop")
    formula = library_formula("min_cut")
    for structure in random_graphs(10, 4, seed=5, dag=True):
        expected = oracles.min_cut(structure)
        value = Evaluator(structure, trop).value(formula)
        assert trop.format(value) == ("+inf" if expected is None else str(expected))


def test_min_cut_of_a_path():
    trop = build_semiring("trop")
    path = graph(3, [(0, 1), (1, 2)])
    assert trop.format(Evaluator(path, trop).value(library_formula("min_cut"))) == "1"


def test_subset_count_is_three_to_the_n(nat):
    formula = library_formula("subset_count")
    for n in range(1, 5):
        assert Evaluator(unary(n, []), nat).value(formula) == 3**n


def test_clique_check_with_a_free_set(triangle):
    formula = library_formula("clique")
    evaluator = Evaluator(triangle, build_semiring("bool"))
    assert evaluator.holds(formula, parse_assignment("X={(0),(2)}"))
    path = graph(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    assert not Evaluator(path, build_semiring("bool")).holds(formula, parse_assignment("X={(0),(2)}"))


def test_boolean_formulas_read_as_zero_or_one(triangle, nat, boolean):
    formula = parse_formula("forall x. exists y. edge(x,y)")
    assert Evaluator(triangle, boolean).value(formula) is True
    assert Evaluator(triangle, nat).value(formula) == 1
    lonely = graph(2, [(0, 1)])
    assert Evaluator(lonely, nat).value(formula) == 0


def test_boolean_semiring_agrees_with_satisfaction(boolean):
    formulas = [
        parse_formula("exists x. forall y. (x = y | edge(x,y))"),
        parse_formula("sum X:1. (forall x. (X(x) <-> exists y. edge(x,y)))"),
        parse_formula("forall x. forall y. (edge(x,y) -> edge(y,x))"),
    ]
    for structure in random_graphs(8, 4, seed=1, dag=True):
        evaluator = Evaluator(structure, boolean)
        for formula in formulas[::2]:
            assert evaluator.value(formula) == evaluator.holds(formula)
        assert evaluator.value(formulas[1]) is True


@pytest.mark.parametrize("seed", range(20))
def test_random_boolean_sentences_degenerate_to_satisfaction(seed, boolean, nat):
    signature = parse_signature("edge:2,p:1")
    rng = random.Random(seed)
    generator = FormulaGenerator(signature, rng)
    for _ in range(10):
        formula = generator.sentence(3)
        structure = random_structure(signature, rng.randint(1, 3), rng)
        truth = Evaluator(structure, boolean).holds(formula)
        assert Evaluator(structure, boolean).value(formula) is truth, str(formula)
        assert Evaluator(structure, nat).value(formula) == int(truth), str(formula)


def test_guard_is_one_when_the_condition_fails(nat):
    formula = parse_formula("sum x. (p(x) ? c(3))")
    assert Evaluator(unary(3, [1]), nat).value(formula) == 3 + 1 + 1


def test_noncommutative_products_follow_element_order(langs):
    formula = parse_formula("prod x. ((x = 0 ? c({a})) (*) (x = 1 ? c({b})))")
    assert langs.format(Evaluator(unary(2, []), langs).value(formula)) == "{ab}"


def test_atoms_with_unbound_variables_are_false(nat):
    formula = parse_formula("edge(x, 0)")
    assert Evaluator(graph(2, [(0, 0), (1, 0)]), nat).value(formula) == 0
    assert not Evaluator(graph(2, [(0, 0)]), nat).holds(parse_formula("x = x"))


def test_assignments_fill_free_variables(nat):
    structure = graph(2, [(1, 0)])
    formula = parse_formula("edge(x, 0) (*) c(4)")
    assert Evaluator(structure, nat).value(formula, Assignment().bind("x", 1)) == 4
    ctx = EvalContext(structure, nat, parse_assignment("x=1"))
    assert eval_weighted(formula, ctx) == 4
    assert eval_bool(parse_formula("edge(x,0)"), ctx)


def test_assignment_syntax():
    assignment = parse_assignment("x=0, X={(0,1),(1,1)}")
    assert assignment.first["x"] == 0
    assert assignment.second["X"] == frozenset({(0, 1), (1, 1)})
    with pytest.raises(ParseError):
        parse_assignment("X=0")
    with pytest.raises(ParseError):
        parse_assignment("x={(0)}")
    with pytest.raises(StructureError):
        EvalContext(graph(2, []), build_semiring("nat"), parse_assignment("x=5"))


def test_pruning_keeps_values_and_saves_branches(nat, nat_max):
    formula = library_formula("min_cut")
    trop = build_semiring("trop")
    for structure in random_graphs(6, 4, seed=9, dag=True):
        pruned = Evaluator(structure, trop, prune=True)
        full = Evaluator(structure, trop, prune=False)
        assert pruned.value(formula) == full.value(formula)
        assert pruned.stats.so_branches <= full.stats.so_branches
    counting = parse_formula("sum X:1. ((forall x. (X(x) -> p(x))) (*) prod x. (X(x) ? c(2)))")
    for semiring in (nat, nat_max):
        structure = unary(4, [0, 2])
        assert Evaluator(structure, semiring, prune=True).value(counting) == Evaluator(
            structure, semiring, prune=False
        ).value(counting)
    assert Evaluator(unary(4, [0, 2]), nat).value(counting) == 9


def test_threads_do_not_change_values(nat):
    formula = library_formula("subset_count")
    structure = unary(4, [])
    assert Evaluator(structure, nat, threads=4).value(formula) == Evaluator(structure, nat).value(formula)
    product = parse_formula("prod X:1. c(2)")
    assert Evaluator(structure, nat, threads=3).value(product) == 2**16


def test_second_order_enumeration_respects_the_cap(nat):
    formula = parse_formula("sum X:2. c(1)")
    with pytest.raises(CapExceededError):
        Evaluator(unary(5, []), nat, Limits(max_subsets=20)).value(formula)


def test_stats_count_second_order_branches(nat):
    evaluator = Evaluator(unary(3, []), nat, prune=False)
    evaluator.value(library_formula("subset_count"))
    stats = evaluator.stats.as_dict()
    assert stats["so_branches"] == 8
    assert set(stats) >= {"so_pruned", "fixpoint_stages", "closure_evaluations"}


@pytest.mark.parametrize("prune", [True, False])
def test_rebound_second_order_names_sum_every_binding(prune, nat):
    formula = parse_formula("sum X:1. sum X:1. ((forall x. X(x)) (*) c(1))")
    assert Evaluator(unary(1, []), nat, prune=prune).value(formula) == 2
    shadowed = parse_formula("sum X:1. sum Y:1. sum X:1. ((forall x. (X(x) -> p(x))) (*) prod y. (Y(y) ? c(2)))")
    structure = unary(2, [1])
    # the shadowed X only multiplies by its 4 subsets
    assert Evaluator(structure, nat, prune=prune).value(shadowed) == 4 * 2 * 9
