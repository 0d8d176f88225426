from __future__ import annotations

import random

import pytest

from core.errors import FragmentViolation, ParseError
from core.types import Fragment
from logic.ast import (
    And,
    Const,
    Eq,
    ExistsFO,
    ForallFO,
    Guard,
    Lfp,
    Not,
    OPlus,
    OTimes,
    Or,
    ProdFO,
    RelAtom,
    SOAtom,
    SumSO,
    Tc,
    free_vars,
    walk,
)
from logic.fragments import check_fragment, check_monadic, check_positive, check_signature, ensure_fragment
from logic.generators import FormulaGenerator
from logic.library import LIBRARY, library_formula
from logic.parser import load_formula, parse_formula, parse_program
from logic.printer import format_formula
from logic.transform import desugar, substitute
from semirings import build_semiring
from structures.model import parse_signature
from tests.conftest import fixture_path


def test_subset_counting_formula_parses():
    formula = parse_formula("sum P:1. prod x. (P(x) ? c(2))")
    assert formula == SumSO("P", 1, ProdFO("x", Guard(SOAtom("P", ("x",)), Const("2"))))


def test_precedence_of_weighted_operators():
    formula = parse_formula("c(1) (+) c(2) (*) c(3)")
    assert formula == OPlus(Const("1"), OTimes(Const("2"), Const("3")))


def test_quantifiers_bind_tightly():
    formula = parse_formula("exists x. p(x) & q(x)")
    assert isinstance(formula, And)
    assert formula.left == ExistsFO("x", RelAtom("p", ("x",)))


def test_not_equal_is_sugar():
    assert parse_formula("x != 0") == Not(Eq("x", 0))


def test_closures_and_fixpoints():
    tc = parse_formula("[tc (u) -> (v). edge(u,v)](0, 1)")
    assert isinstance(tc, Tc) and tc.start == (0,) and tc.end == (1,)
    lfp = parse_formula("[lfp R(x). (p(x) | exists y. (edge(y,x) & R(y)))](0)")
    assert isinstance(lfp, Lfp) and lfp.variables == ("x",)


def test_macros_expand_with_fresh_bound_names():
    macros, formula = parse_program(
        "def reach(a, b) := exists y. (edge(a,y) & edge(y,b));\n"
        "exists y. reach(y, 0)"
    )
    assert "reach" in macros
    assert free_vars(formula) == frozenset()
    inner = formula.body
    assert isinstance(inner, ExistsFO) and inner.var != "y"


def test_macro_with_set_parameter():
    formula = parse_formula("def big(X:1) := exists x. X(x);\nsum Y:1. big(Y)")
    assert formula == SumSO("Y", 1, ExistsFO("x", SOAtom("Y", ("x",))))


@pytest.mark.parametrize(
    "text",
    [
        "exists x. (p(x) &",
        "sum X. X(x)",
        "c(1) (+)",
        "def f(x) := y = x;\nf(0)",
        "def f(X:1) := X(0);\nf(0)",
        "p(x) & p(x, y)",
        "exists x. !(c(1))",
    ],
)
def test_bad_formulas_raise_parse_errors(text):
    with pytest.raises(ParseError):
        parse_formula(text)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as info:
        parse_formula("exists x.\n  p(x) @ q(x)")
    assert info.value.line == 2


def test_printer_output_parses_back_to_the_same_tree():
    samples = [
        "sum P:1. prod x. (P(x) ? c(2))",
        "forall x. (p(x) -> exists y. (x < y & edge(x,y)))",
        "c(1/2) (*) (c(1) (+) c(3)) (+) !(x = y)",
        "[dtc (u) -> (v). edge(u,v)](0, 1) <-> [pfp R(x). !R(x)](0)",
        "(p(0) | p(1)) & !(p(0) & p(1))",
    ]
    for text in samples:
        formula = parse_formula(text)
        assert parse_formula(format_formula(formula)) == formula


def test_printer_on_generated_formulas():
    sig = parse_signature("edge:2,p:1")
    generator = FormulaGenerator.for_semiring(sig, random.Random(5), build_semiring("nat"))
    for _ in range(30):
        formula = generator.weso(3)
        assert parse_formula(format_formula(formula)) == formula


def test_library_formulas_parse():
    for name in LIBRARY:
        assert library_formula(name) is not None
    with pytest.raises(ValueError):
        library_formula("nothing")


def test_fixture_files_load():
    formula = load_formula(fixture_path("formulas", "largest_clique.wl"))
    assert formula == library_formula("largest_clique")


def test_fragments():
    weso = parse_formula("sum X:1. sum x. (X(x) ? c(2))")
    assert check_fragment(weso, Fragment.WESO) is None
    assert check_fragment(weso, Fragment.WFO) is not None
    nested = parse_formula("sum x. sum X:1. X(x)")
    violation = check_fragment(nested, Fragment.WESO)
    assert violation is not None and isinstance(violation.subformula, SumSO)
    with pytest.raises(FragmentViolation):
        ensure_fragment(parse_formula("[tc (u) -> (v). edge(u,v)](0,1)"), Fragment.WLFP)
    assert check_fragment(parse_formula("[lfp R(x). p(x)](0)"), Fragment.WLFP) is None
    assert check_fragment(parse_formula("[dtc (u) -> (v). edge(u,v)](0,1)"), Fragment.WDTC) is None


def test_positivity():
    assert check_positive(parse_formula("[lfp R(x). (p(x) | R(x))](0)")) is None
    assert check_positive(parse_formula("[lfp R(x). !R(x)](0)")) is not None
    assert check_positive(parse_formula("[lfp R(x). (R(x) -> p(x))](0)")) is not None
    assert check_positive(parse_formula("[pfp R(x). !R(x)](0)")) is None


def test_monadic_mode():
    assert check_monadic(parse_formula("sum X:1. exists x. X(x)")) is None
    assert check_monadic(parse_formula("sum X:2. exists x. X(x,x)")) is not None
    assert check_monadic(parse_formula("[lfp R(x,y). edge(x,y)](0,1)")) is None


def test_signature_check():
    formula = parse_formula("exists x. edge(x,x)")
    check_signature(formula, parse_signature("edge:2"))
    with pytest.raises(ParseError):
        check_signature(formula, parse_signature("p:1"))
    with pytest.raises(ParseError):
        check_signature(formula, parse_signature("edge:3"))


def test_substitution_avoids_capture():
    formula = parse_formula("exists y. edge(x,y)")
    moved = substitute(formula, {"x": "y"})
    assert isinstance(moved, ExistsFO) and moved.var != "y"
    assert moved.body == RelAtom("edge", ("y", moved.var))


def test_desugar_leaves_only_core_connectives():
    formula = desugar(parse_formula("forall x. (p(x) -> p(x)) ? c(2)"))
    names = {type(node).__name__ for node in walk(formula)}
    assert not names & {"ForallFO", "Implies", "Guard", "And", "TrueF", "Iff"}
    assert isinstance(formula, OPlus)


def test_or_node():
    assert parse_formula("p(0) | p(1)") == Or(RelAtom("p", (0,)), RelAtom("p", (1,)))
    assert parse_formula("forall x. p(x)") == ForallFO("x", RelAtom("p", ("x",)))
