from __future__ import annotations

import pytest

from core.errors import TermError
from semirings import build_semiring
from semirings.terms import (
    Leaf,
    One,
    Plus,
    Times,
    Zero,
    build_sigma_pi,
    check_generators,
    eval_term,
    format_term,
    term_generators,
)


def test_sigma_pi_term_evaluates_per_semiring():
    term = build_sigma_pi([["a", "b"], ["c"]], 1)
    nat = build_semiring("nat")
    assert eval_term(term, nat, {"a": 2, "b": 3, "c": 4}) == 10
    trop = build_semiring("trop")
    values = {name: trop.parse(text) for name, text in {"a": "2", "b": "3", "c": "4"}.items()}
    assert trop.format(eval_term(term, trop, values)) == "4"


def test_constants_fold_to_zero_and_one():
    term = build_sigma_pi([["1"], ["0", "a"]], 1)
    assert term == Plus(One(), Times(Zero(), Leaf("a")))
    assert eval_term(term, build_semiring("nat"), {"a": 5}) == 1


def test_empty_sum_is_zero_and_empty_product_is_one():
    assert build_sigma_pi([], 1) == Zero()
    assert build_sigma_pi([[]], 1) == One()


def test_noncommutative_order_is_kept():
    langs = build_semiring("langs")
    term = build_sigma_pi([["a", "b"]], 1)
    value = eval_term(term, langs, {"a": langs.parse("{a}"), "b": langs.parse("{b}")})
    assert langs.format(value) == "{ab}"


def test_two_alternations():
    term = build_sigma_pi([[[["x"], ["y"]]]], 2)
    assert eval_term(term, build_semiring("nat"), {"x": 2, "y": 3}) == 5


def test_ragged_nesting_is_rejected():
    with pytest.raises(TermError):
        build_sigma_pi([["a", ["b"]]], 1)
    with pytest.raises(TermError):
        build_sigma_pi(["a"], 1)


def test_unresolved_leaf_raises():
    with pytest.raises(TermError):
        eval_term(Leaf("g"), build_semiring("nat"), {})


def test_generator_check():
    term = build_sigma_pi([["a", "b"], ["c"]], 1)
    assert term_generators(term) == {"a", "b", "c"}
    check_generators(term, ["a", "b", "c", "d"])
    with pytest.raises(TermError):
        check_generators(term, ["a", "b"])


def test_format_term():
    assert format_term(build_sigma_pi([["a", "b"], ["c"]], 1)) == "a*b + c"
