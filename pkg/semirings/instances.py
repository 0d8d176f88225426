from __future__ import annotations

import random
import re
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Hashable, Tuple, Union

from frozendict import frozendict

from core.errors import LiteralError
from semirings.base import Semiring, Value

EMPTY_WORD = "ε"


class Infinity(Enum):
    NEG = "-inf"
    POS = "+inf"

    def __repr__(self) -> str:
        return self.value


NEG_INF = Infinity.NEG
POS_INF = Infinity.POS

_NAT = re.compile(r"\d+")
_INT = re.compile(r"-?\d+")
_FRACTION = re.compile(r"-?\d+(?:/\d+)?")


def _parse_nat(text: str) -> int:
    if not _NAT.fullmatch(text):
        raise ValueError(text)
    return int(text)


def _parse_int(text: str) -> int:
    if not _INT.fullmatch(text):
        raise ValueError(text)
    return int(text)


def _parse_infinity(text: str, allowed: Infinity) -> Union[Infinity, None]:
    if text == allowed.value or (allowed is POS_INF and text == "inf"):
        return allowed
    return None


def _sample_fraction(rng: random.Random, low: int = 0, high: int = 9) -> Fraction:
    return Fraction(rng.randint(low, high), rng.randint(1, 4))


class BooleanSemiring(Semiring):
    name = "bool"
    is_commutative = True
    is_idempotent = True

    @property
    def zero(self) -> bool:
        return False

    @property
    def one(self) -> bool:
        return True

    def add(self, left: bool, right: bool) -> bool:
        return left or right

    def mul(self, left: bool, right: bool) -> bool:
        return left and right

    def parse_value(self, text: str) -> bool:
        if text not in ("0", "1"):
            raise ValueError(text)
        return text == "1"

    def format(self, value: bool) -> str:
        return "1" if value else "0"

    def sample(self, rng: random.Random) -> bool:
        return rng.random() < 0.5

    def contains(self, value: Value) -> bool:
        return isinstance(value, bool)


class NaturalSemiring(Semiring):
    name = "nat"
    is_commutative = True
    is_idempotent = False

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, left: int, right: int) -> int:
        return left + right

    def mul(self, left: int, right: int) -> int:
        return left * right

    def parse_value(self, text: str) -> int:
        return _parse_nat(text)

    def format(self, value: int) -> str:
        return str(value)

    def sample(self, rng: random.Random) -> int:
        return rng.randint(0, 9)

    def contains(self, value: Value) -> bool:
        return isinstance(value, int) and not isinstance(value, bool) and value >= 0


class ExtendedNaturalSemiring(Semiring):
    """Natural numbers with +inf, where 0 * inf = 0."""

    name = "nat_inf"
    is_commutative = True
    is_idempotent = False

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, left: Value, right: Value) -> Value:
        if left is POS_INF or right is POS_INF:
            return POS_INF
        return left + right

    def mul(self, left: Value, right: Value) -> Value:
        if left == 0 or right == 0:
            return 0
        if left is POS_INF or right is POS_INF:
            return POS_INF
        return left * right

    def parse_value(self, text: str) -> Value:
        return _parse_infinity(text, POS_INF) or _parse_nat(text)

    def format(self, value: Value) -> str:
        return POS_INF.value if value is POS_INF else str(value)

    def sample(self, rng: random.Random) -> Value:
        return POS_INF if rng.random() < 0.15 else rng.randint(0, 9)

    def contains(self, value: Value) -> bool:
        return value is POS_INF or NaturalSemiring().contains(value)


class IntegerSemiring(Semiring):
    name = "int"
    is_commutative = True
    is_idempotent = False

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, left: int, right: int) -> int:
        return left + right

    def mul(self, left: int, right: int) -> int:
        return left * right

    def parse_value(self, text: str) -> int:
        return _parse_int(text)

    def format(self, value: int) -> str:
        return str(value)

    def sample(self, rng: random.Random) -> int:
        return rng.randint(-9, 9)

    def contains(self, value: Value) -> bool:
        return isinstance(value, int) and not isinstance(value, bool)


class ModularSemiring(Semiring):
    name = "int_mod"
    is_commutative = True
    is_idempotent = False

    def __init__(self, modulus: int):
        if modulus < 2:
            raise ValueError(f"int_mod needs a modulus >= 2, got {modulus}")
        self.modulus = modulus

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, left: int, right: int) -> int:
        return (left + right) % self.modulus

    def mul(self, left: int, right: int) -> int:
        return (left * right) % self.modulus

    def parse_value(self, text: str) -> int:
        return _parse_int(text) % self.modulus

    def format(self, value: int) -> str:
        return str(value)

    def sample(self, rng: random.Random) -> int:
        return rng.randrange(self.modulus)

    def contains(self, value: Value) -> bool:
        return IntegerSemiring().contains(value) and 0 <= value < self.modulus

    def params(self) -> Tuple[Tuple[str, Hashable], ...]:
        return (("modulus", self.modulus),)


class RationalSemiring(Semiring):
    name = "rat"
    is_commutative = True
    is_idempotent = False

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def add(self, left: Fraction, right: Fraction) -> Fraction:
        return left + right

    def mul(self, left: Fraction, right: Fraction) -> Fraction:
        return left * right

    def parse_value(self, text: str) -> Fraction:
        if not _FRACTION.fullmatch(text):
            raise LiteralError(f"Rational literals are p or p/q, got {text!r}")
        return Fraction(text)

    def format(self, value: Fraction) -> str:
        return str(value)

    def sample(self, rng: random.Random) -> Fraction:
        return _sample_fraction(rng, -9, 9)

    def contains(self, value: Value) -> bool:
        return isinstance(value, Fraction)


class _ExtremalPlusSemiring(Semiring):
    """max-plus / min-plus over non-negative numbers with an absorbing infinity."""

    is_commutative = True
    is_idempotent = True
    infinity: Infinity = NEG_INF
    integral: bool = False

    def __init__(self) -> None:
        self._pick: Callable[[Value, Value], Value] = max if self.infinity is NEG_INF else min

    @property
    def zero(self) -> Value:
        return self.infinity

    @property
    def one(self) -> Value:
        return 0 if self.integral else Fraction(0)

    def add(self, left: Value, right: Value) -> Value:
        if left is self.infinity:
            return right
        if right is self.infinity:
            return left
        return self._pick(left, right)

    def mul(self, left: Value, right: Value) -> Value:
        if left is self.infinity or right is self.infinity:
            return self.infinity
        return left + right

    def parse_value(self, text: str) -> Value:
        infinity = _parse_infinity(text, self.infinity)
        if infinity is not None:
            return infinity
        return _parse_nat(text) if self.integral else Fraction(text)

    def format(self, value: Value) -> str:
        return value.value if isinstance(value, Infinity) else str(value)

    def sample(self, rng: random.Random) -> Value:
        if rng.random() < 0.15:
            return self.infinity
        return rng.randint(0, 9) if self.integral else _sample_fraction(rng)

    def contains(self, value: Value) -> bool:
        if value is self.infinity:
            return True
        if self.integral:
            return NaturalSemiring().contains(value)
        return isinstance(value, Fraction) and value >= 0


class ArcticSemiring(_ExtremalPlusSemiring):
    name = "arctic"
    infinity = NEG_INF


class NatMaxSemiring(_ExtremalPlusSemiring):
    name = "nat_max"
    infinity = NEG_INF
    integral = True


class TropicalSemiring(_ExtremalPlusSemiring):
    name = "trop"
    infinity = POS_INF


class NatMinSemiring(_ExtremalPlusSemiring):
    name = "nat_min"
    infinity = POS_INF
    integral = True


class ProductTNormSemiring(Semiring):
    """<[0,1], max, product, 0, 1> on exact rationals."""

    name = "tnorm_product"
    is_commutative = True
    is_idempotent = True

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def add(self, left: Fraction, right: Fraction) -> Fraction:
        return max(left, right)

    def mul(self, left: Fraction, right: Fraction) -> Fraction:
        return left * right

    def parse_value(self, text: str) -> Fraction:
        return Fraction(text)

    def format(self, value: Fraction) -> str:
        return str(value)

    def sample(self, rng: random.Random) -> Fraction:
        denominator = rng.randint(1, 6)
        return Fraction(rng.randint(0, denominator), denominator)

    def contains(self, value: Value) -> bool:
        return isinstance(value, Fraction) and 0 <= value <= 1

    def params(self) -> Tuple[Tuple[str, Hashable], ...]:
        return (("tnorm", "product"),)


def _split_braced(text: str) -> Tuple[str, ...]:
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(text)
    inner = text[1:-1].strip()
    if not inner:
        return ()
    return tuple(item.strip() for item in inner.split(","))


def _word_key(word: str) -> Tuple[int, str]:
    return (len(word), word)


class _WordSemiring(Semiring):
    def __init__(self, alphabet: str = "ab"):
        if not alphabet or len(set(alphabet)) != len(alphabet):
            raise ValueError(f"Alphabet must be non-empty without repeats: {alphabet!r}")
        if EMPTY_WORD in alphabet or any(ch in "{},:" or ch.isspace() for ch in alphabet):
            raise ValueError(f"Alphabet uses reserved characters: {alphabet!r}")
        self.alphabet = alphabet
        # concatenation only commutes over a single letter
        self.is_commutative = len(alphabet) < 2

    def params(self) -> Tuple[Tuple[str, Hashable], ...]:
        return (("alphabet", self.alphabet),)

    def _parse_word(self, text: str) -> str:
        if text == EMPTY_WORD:
            return ""
        if not text or any(ch not in self.alphabet for ch in text):
            raise LiteralError(f"Word {text!r} is not over alphabet {self.alphabet!r}")
        return text

    def _format_word(self, word: str) -> str:
        return word or EMPTY_WORD

    def _sample_word(self, rng: random.Random) -> str:
        return "".join(rng.choice(self.alphabet) for _ in range(rng.randint(0, 2)))


class LanguageSemiring(_WordSemiring):
    """Finite languages with union and concatenation."""

    name = "langs"
    is_idempotent = True

    @property
    def zero(self) -> FrozenSet[str]:
        return frozenset()

    @property
    def one(self) -> FrozenSet[str]:
        return frozenset({""})

    def add(self, left: FrozenSet[str], right: FrozenSet[str]) -> FrozenSet[str]:
        return left | right

    def mul(self, left: FrozenSet[str], right: FrozenSet[str]) -> FrozenSet[str]:
        return frozenset(u + v for u in left for v in right)

    def parse_value(self, text: str) -> FrozenSet[str]:
        return frozenset(self._parse_word(item) for item in _split_braced(text))

    def format(self, value: FrozenSet[str]) -> str:
        return "{" + ",".join(self._format_word(w) for w in sorted(value, key=_word_key)) + "}"

    def sample(self, rng: random.Random) -> FrozenSet[str]:
        return frozenset(self._sample_word(rng) for _ in range(rng.randint(0, 3)))

    def contains(self, value: Value) -> bool:
        return isinstance(value, frozenset) and all(
            isinstance(w, str) and all(ch in self.alphabet for ch in w) for w in value
        )


class MultisetSemiring(_WordSemiring):
    """N<Sigma*>: finite-support word -> count maps, product by convolution."""

    name = "multiset"
    is_idempotent = False

    @property
    def zero(self) -> frozendict:
        return frozendict()

    @property
    def one(self) -> frozendict:
        return frozendict({"": 1})

    def add(self, left: frozendict, right: frozendict) -> frozendict:
        merged: Dict[str, int] = dict(left)
        for word, count in right.items():
            merged[word] = merged.get(word, 0) + count
        return frozendict(merged)

    def mul(self, left: frozendict, right: frozendict) -> frozendict:
        merged: Dict[str, int] = {}
        for u, cu in left.items():
            for v, cv in right.items():
                merged[u + v] = merged.get(u + v, 0) + cu * cv
        return frozendict(merged)

    def parse_value(self, text: str) -> frozendict:
        merged: Dict[str, int] = {}
        for item in _split_braced(text):
            word, sep, count = item.rpartition(":")
            if not sep:
                raise LiteralError(f"Multiset entry {item!r} needs the form word:count")
            parsed = _parse_nat(count.strip())
            if parsed:
                key = self._parse_word(word.strip())
                merged[key] = merged.get(key, 0) + parsed
        return frozendict(merged)

    def format(self, value: frozendict) -> str:
        items = sorted(value.items(), key=lambda item: _word_key(item[0]))
        return "{" + ",".join(f"{self._format_word(w)}:{c}" for w, c in items) + "}"

    def sample(self, rng: random.Random) -> frozendict:
        merged: Dict[str, int] = {}
        for _ in range(rng.randint(0, 3)):
            word = self._sample_word(rng)
            merged[word] = merged.get(word, 0) + rng.randint(1, 3)
        return frozendict(merged)

    def contains(self, value: Value) -> bool:
        return isinstance(value, frozendict) and all(
            isinstance(c, int) and c > 0 and all(ch in self.alphabet for ch in w)
            for w, c in value.items()
        )


def radix_key(word: str) -> Tuple[int, str]:
    """Radix order: shorter words first, equal lengths lexicographically."""
    return (len(word), word)


class _RadixSemiring(Semiring):
    is_commutative = False
    is_idempotent = True
    infinity: Infinity = NEG_INF

    @property
    def zero(self) -> Value:
        return self.infinity

    @property
    def one(self) -> str:
        return ""

    def add(self, left: Value, right: Value) -> Value:
        if left is self.infinity:
            return right
        if right is self.infinity:
            return left
        pick = max if self.infinity is NEG_INF else min
        return pick(left, right, key=radix_key)

    def mul(self, left: Value, right: Value) -> Value:
        if left is self.infinity or right is self.infinity:
            return self.infinity
        return left + right

    def parse_value(self, text: str) -> Value:
        infinity = _parse_infinity(text, self.infinity)
        if infinity is not None:
            return infinity
        if text == EMPTY_WORD:
            return ""
        if not text or set(text) - {"0", "1"}:
            raise ValueError(text)
        return text

    def format(self, value: Value) -> str:
        if isinstance(value, Infinity):
            return value.value
        return value or EMPTY_WORD

    def sample(self, rng: random.Random) -> Value:
        if rng.random() < 0.1:
            return self.infinity
        return "".join(rng.choice("01") for _ in range(rng.randint(0, 3)))

    def contains(self, value: Value) -> bool:
        return value is self.infinity or (isinstance(value, str) and not set(value) - {"0", "1"})


class RadixMaxSemiring(_RadixSemiring):
    name = "radix_max"
    infinity = NEG_INF


class RadixMinSemiring(_RadixSemiring):
    name = "radix_min"
    infinity = POS_INF


__all__ = [
    "ArcticSemiring",
    "BooleanSemiring",
    "EMPTY_WORD",
    "ExtendedNaturalSemiring",
    "Infinity",
    "IntegerSemiring",
    "LanguageSemiring",
    "ModularSemiring",
    "MultisetSemiring",
    "NEG_INF",
    "NatMaxSemiring",
    "NatMinSemiring",
    "NaturalSemiring",
    "POS_INF",
    "ProductTNormSemiring",
    "RadixMaxSemiring",
    "RadixMinSemiring",
    "RationalSemiring",
    "TropicalSemiring",
    "radix_key",
]
