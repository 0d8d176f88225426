from __future__ import annotations

import pytest

from core.config import Limits
from core.errors import CapExceededError, FragmentViolation
from core.types import ClosureKind, FixpointKind
from evaluation import EvalContext, Evaluator, eval_closure, eval_fixpoint
from logic.ast import Tc
from logic.parser import load_formula, parse_formula
from logic.transform import functional_step
from tests import oracles
from tests.conftest import fixture_path, graph, random_graphs

REACH = "(edge(x,y) | exists z. (R(x,z) & edge(z,y)))"


def _tc_as_lfp():
    return parse_formula(f"[lfp R(x,y). {REACH}](u,v)")


def test_lfp_computes_the_transitive_closure(boolean):
    node = _tc_as_lfp()
    for structure in random_graphs(10, 4, seed=21, density=0.35, dag=False):
        relation = Evaluator(structure, boolean).fixpoint(node)
        assert set(relation) == oracles.transitive_closure(structure)


def test_tc_operator_matches_the_oracle(boolean):
    node = parse_formula("[tc (x) -> (y). edge(x,y)](u,v)")
    for structure in random_graphs(10, 4, seed=22, density=0.3, dag=True):
        assert set(Evaluator(structure, boolean).closure_relation(node)) == oracles.transitive_closure(structure)


def test_inflationary_and_least_fixpoints_agree_on_positive_bodies(boolean):
    lfp = _tc_as_lfp()
    ifp = parse_formula(f"[ifp R(x,y). {REACH}](u,v)")
    for structure in random_graphs(6, 4, seed=23, dag=True):
        evaluator = Evaluator(structure, boolean)
        assert evaluator.fixpoint(lfp) == evaluator.fixpoint(ifp)


def test_tc_equals_lfp_on_every_small_graph(boolean):
    formula = load_formula(fixture_path("formulas", "tc_is_lfp.wl"))
    for structure in random_graphs(12, 4, seed=24, density=0.4, dag=False):
        assert Evaluator(structure, boolean).holds(formula)


def test_greatest_fixpoint_keeps_infinite_walks(boolean):
    node = parse_formula("[gfp R(x). exists y. (edge(x,y) & R(y))](u)")
    path = graph(3, [(0, 1), (1, 2)])
    assert Evaluator(path, boolean).fixpoint(node) == frozenset()
    cycle = graph(3, [(0, 1), (1, 0), (2, 0)])
    assert Evaluator(cycle, boolean).fixpoint(node) == frozenset({(0,), (1,), (2,)})


def test_partial_fixpoint_of_a_cycle_is_empty(boolean):
    formula = load_formula(fixture_path("formulas", "pfp_cycle.wl"))
    evaluator = Evaluator(graph(2, []), boolean)
    assert not evaluator.holds(formula)
    assert evaluator.stats.fixpoint_evaluations == 1


def test_partial_fixpoint_that_converges(boolean):
    node = parse_formula("[pfp R(x). (x = 0 | exists y. (R(y) & edge(y,x)))](u)")
    path = graph(3, [(0, 1), (1, 2)])
    assert Evaluator(path, boolean).fixpoint(node) == frozenset({(0,), (1,), (2,)})


def test_deterministic_closure_stops_at_branches(boolean):
    formula = parse_formula("[dtc (x) -> (y). edge(x,y)](a,b)")
    branching = graph(3, [(0, 1), (0, 2), (1, 2)])
    ctx = Evaluator(branching, boolean)
    assert not ctx.holds(parse_formula("[dtc (x) -> (y). edge(x,y)](0,2)"))
    assert ctx.holds(parse_formula("[dtc (x) -> (y). edge(x,y)](1,2)"))
    assert ctx.holds(parse_formula("[tc (x) -> (y). edge(x,y)](0,2)"))
    path = graph(3, [(0, 1), (1, 2)])
    assert Evaluator(path, boolean).closure_relation(formula) == frozenset({(0, 1), (0, 2), (1, 2)})


@pytest.mark.parametrize(
    "structure", random_graphs(10, 4, seed=13, density=0.4) + random_graphs(10, 4, seed=14, dag=True)
)
def test_deterministic_closure_is_tc_of_the_functional_step(structure, boolean):
    node = parse_formula("[dtc (x) -> (y). edge(x,y)](a,b)")
    _, step = functional_step(node)
    as_tc = Tc(node.sources, node.targets, step, node.start, node.end)
    evaluator = Evaluator(structure, boolean)
    assert evaluator.closure_relation(node) == evaluator.closure_relation(as_tc)


def test_closures_over_pairs(boolean):
    # steps move the first coordinate along an edge and keep the second
    formula = parse_formula("[tc (x1,x2) -> (y1,y2). (edge(x1,y1) & x2 = y2)](0,1,2,1)")
    assert Evaluator(graph(3, [(0, 1), (1, 2)]), boolean).holds(formula)


def test_negative_occurrences_are_rejected_for_lfp(boolean):
    with pytest.raises(FragmentViolation):
        Evaluator(graph(2, []), boolean).holds(parse_formula("[lfp R(x). !R(x)](0)"))


def test_stage_cap(boolean):
    path = graph(3, [(0, 1), (1, 2)])
    with pytest.raises(CapExceededError):
        Evaluator(path, boolean, Limits(max_stages=1)).fixpoint(_tc_as_lfp())
    assert Evaluator(path, boolean, Limits(max_stages=3)).fixpoint(_tc_as_lfp()) == frozenset(
        {(0, 1), (1, 2), (0, 2)}
    )


def test_fixpoint_results_are_cached_per_environment(boolean):
    formula = parse_formula(f"forall u. forall v. ([lfp R(x,y). {REACH}](u,v) -> exists w. edge(u,w))")
    evaluator = Evaluator(graph(3, [(0, 1), (1, 2)]), boolean)
    assert evaluator.holds(formula)
    assert evaluator.stats.fixpoint_evaluations == 1


def test_weighted_value_of_a_fixpoint_atom(nat):
    formula = parse_formula(f"sum u. sum v. [lfp R(x,y). {REACH}](u,v)")
    assert Evaluator(graph(3, [(0, 1), (1, 2)]), nat).value(formula) == 3


def test_functional_entry_points(boolean):
    ctx = EvalContext(graph(3, [(0, 1), (1, 2)]), boolean)
    body = parse_formula(REACH)
    relation = eval_fixpoint(FixpointKind.LFP, "R", ("x", "y"), body, ctx)
    assert relation == frozenset({(0, 1), (1, 2), (0, 2)})
    assert eval_closure(ClosureKind.TC, ("x",), ("y",), parse_formula("edge(x,y)"), (0,), (2,), ctx)
    assert not eval_closure(ClosureKind.DTC, ("x",), ("y",), parse_formula("edge(x,y)"), (2,), (0,), ctx)
