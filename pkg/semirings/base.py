from __future__ import annotations

import random
from abc import ABC, abstractmethod
from functools import reduce
from typing import Any, Dict, Hashable, Iterable, Tuple

from core.errors import LiteralError

Value = Any

ZERO_LITERAL = "zero"
ONE_LITERAL = "one"


class Semiring(ABC):
    """A semiring handle: carrier operations, constants, literal syntax and law flags."""

    name: str = ""
    is_commutative: bool = True
    is_idempotent: bool = False

    @property
    @abstractmethod
    def zero(self) -> Value:
        """Additive identity."""

    @property
    @abstractmethod
    def one(self) -> Value:
        """Multiplicative identity."""

    @abstractmethod
    def add(self, left: Value, right: Value) -> Value:
        """Semiring sum."""

    @abstractmethod
    def mul(self, left: Value, right: Value) -> Value:
        """Semiring product, left operand first."""

    @abstractmethod
    def parse_value(self, text: str) -> Value:
        """Parse a literal in the instance-specific syntax."""

    @abstractmethod
    def format(self, value: Value) -> str:
        """Print a value so that ``parse(format(v)) == v``."""

    @abstractmethod
    def sample(self, rng: random.Random) -> Value:
        """Draw a value for law checks."""

    def contains(self, value: Value) -> bool:
        return True

    def params(self) -> Tuple[Tuple[str, Hashable], ...]:
        return ()

    def parse(self, text: str) -> Value:
        literal = text.strip()
        if literal == ZERO_LITERAL:
            return self.zero
        if literal == ONE_LITERAL:
            return self.one
        try:
            value = self.parse_value(literal)
        except LiteralError:
            raise
        except (ValueError, ZeroDivisionError) as exc:
            raise LiteralError(f"Invalid {self.name} literal: {text!r}") from exc
        if not self.contains(value):
            raise LiteralError(f"Literal {text!r} lies outside the {self.name} carrier")
        return value

    def equal(self, left: Value, right: Value) -> bool:
        return left == right

    def sum(self, values: Iterable[Value]) -> Value:
        return reduce(self.add, values, self.zero)

    def product(self, values: Iterable[Value]) -> Value:
        return reduce(self.mul, values, self.one)

    def from_bool(self, flag: bool) -> Value:
        return self.one if flag else self.zero

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "params": ",".join(f"{key}={value}" for key, value in self.params()) or "-",
            "commutative": self.is_commutative,
            "idempotent": self.is_idempotent,
            "zero": self.format(self.zero),
            "one": self.format(self.one),
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Semiring):
            return NotImplemented
        return (self.name, self.params()) == (other.name, other.params())

    def __hash__(self) -> int:
        return hash((self.name, self.params()))

    def __repr__(self) -> str:
        extra = "".join(f", {key}={value!r}" for key, value in self.params())
        return f"{type(self).__name__}(name={self.name!r}{extra})"


__all__ = ["ONE_LITERAL", "Semiring", "Value", "ZERO_LITERAL"]
