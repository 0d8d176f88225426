from __future__ import annotations

import random
from fractions import Fraction

import pytest

from core.errors import LiteralError, UnknownSemiringError
from semirings import SEMIRING_NAMES, build_semiring, registered_semirings
from semirings.instances import NEG_INF, POS_INF

SAMPLES = 200


def _laws(semiring, a, b, c):
    s = semiring
    eq = s.equal
    assert eq(s.add(s.add(a, b), c), s.add(a, s.add(b, c)))
    assert eq(s.mul(s.mul(a, b), c), s.mul(a, s.mul(b, c)))
    assert eq(s.add(a, b), s.add(b, a))
    assert eq(s.mul(a, s.add(b, c)), s.add(s.mul(a, b), s.mul(a, c)))
    assert eq(s.mul(s.add(a, b), c), s.add(s.mul(a, c), s.mul(b, c)))
    assert eq(s.add(a, s.zero), a)
    assert eq(s.mul(a, s.one), a) and eq(s.mul(s.one, a), a)
    assert eq(s.mul(a, s.zero), s.zero) and eq(s.mul(s.zero, a), s.zero)
    if s.is_commutative:
        assert eq(s.mul(a, b), s.mul(b, a))
    if s.is_idempotent:
        assert eq(s.add(a, a), a)


@pytest.mark.parametrize("semiring", registered_semirings(), ids=lambda s: s.name)
def test_semiring_laws_on_random_samples(semiring):
    rng = random.Random(f"laws-{semiring.name}")
    for _ in range(SAMPLES):
        a, b, c = (semiring.sample(rng) for _ in range(3))
        _laws(semiring, a, b, c)


@pytest.mark.parametrize("semiring", registered_semirings(), ids=lambda s: s.name)
def test_format_parses_back(semiring):
    rng = random.Random(f"format-{semiring.name}")
    for _ in range(20):
        value = semiring.sample(rng)
        assert semiring.equal(semiring.parse(semiring.format(value)), value)


@pytest.mark.parametrize("semiring", registered_semirings(), ids=lambda s: s.name)
def test_reserved_literals_name_zero_and_one(semiring):
    assert semiring.equal(semiring.parse("zero"), semiring.zero)
    assert semiring.equal(semiring.parse("one"), semiring.one)


def test_registry_lists_every_name():
    assert {s.name for s in registered_semirings()} == set(SEMIRING_NAMES)
    assert len(SEMIRING_NAMES) >= 14


@pytest.mark.parametrize(
    "name, params, literal, expected",
    [
        ("bool", {}, "1", True),
        ("nat", {}, "42", 42),
        ("int", {}, "-7", -7),
        ("rat", {}, "1/2", Fraction(1, 2)),
        ("arctic", {}, "-inf", NEG_INF),
        ("trop", {}, "+inf", POS_INF),
        ("nat_inf", {}, "+inf", POS_INF),
        ("int_mod", {"modulus": 5}, "7", 2),
        ("langs", {}, "{ab,ε}", frozenset({"ab", ""})),
        ("radix_max", {}, "0110", "0110"),
    ],
)
def test_literal_syntax(name, params, literal, expected):
    assert build_semiring(name, params).parse(literal) == expected


@pytest.mark.parametrize(
    "name, literal",
    [("nat", "-1"), ("bool", "2"), ("nat_max", "1/2"), ("langs", "{abc,x}"), ("radix_min", "012")],
)
def test_bad_literals_raise(name, literal):
    with pytest.raises(LiteralError):
        build_semiring(name).parse(literal)


def test_unknown_semiring_raises():
    with pytest.raises(UnknownSemiringError):
        build_semiring("reals")


def test_int_mod_needs_modulus():
    with pytest.raises(UnknownSemiringError):
        build_semiring("int_mod")


def test_handles_compare_by_name_and_params():
    assert build_semiring("int_mod", {"modulus": 3}) == build_semiring("int_mod", {"modulus": "3"})
    assert build_semiring("int_mod", {"modulus": 3}) != build_semiring("int_mod", {"modulus": 4})


def test_language_semiring_is_noncommutative():
    langs = build_semiring("langs")
    a, b = langs.parse("{a}"), langs.parse("{b}")
    assert not langs.is_commutative
    assert langs.mul(a, b) != langs.mul(b, a)


def test_sum_and_product_fold_in_order():
    langs = build_semiring("langs")
    words = [langs.parse("{a}"), langs.parse("{b}"), langs.parse("{a}")]
    assert langs.format(langs.product(words)) == "{aba}"
    assert langs.format(langs.sum(words)) == "{a,b}"
    nat = build_semiring("nat")
    assert nat.sum([]) == 0 and nat.product([]) == 1


def test_describe_reports_flags():
    described = build_semiring("nat_max").describe()
    assert described["idempotent"] is True
    assert described["zero"] == "-inf" and described["one"] == "0"


@pytest.mark.parametrize("literal", ["0.5", "1e3", "1 / 2", "1/-2", "+3", "1/0"])
def test_rationals_accept_only_fraction_literals(literal):
    rat = build_semiring("rat")
    with pytest.raises(LiteralError):
        rat.parse(literal)


def test_rational_values_reject_surrounding_spaces():
    rat = build_semiring("rat")
    with pytest.raises(LiteralError):
        rat.parse_value(" 1/2")
    assert rat.parse(" -3/4 ") == Fraction(-3, 4)
