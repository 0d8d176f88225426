from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Tuple

from frozendict import frozendict

from core.errors import ParseError, StructureError
from logic.ast import Arg, is_so_name
from structures.model import Relation, Row

_BINDING = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*)\s*=\s*(\{[^{}]*\}|\d+)\s*(?:,|$)")
_ROW = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Assignment:
    """A partial map from first-order variables to elements and second-order ones to relations."""

    first: Mapping[str, int] = field(default_factory=frozendict)
    second: Mapping[str, Relation] = field(default_factory=frozendict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "first", frozendict(self.first))
        object.__setattr__(
            self, "second", frozendict({k: frozenset(map(tuple, v)) for k, v in self.second.items()})
        )

    def bind(self, var: str, element: int) -> "Assignment":
        return Assignment(self.first.set(var, element), self.second)

    def bind_many(self, variables: Sequence[str], elements: Sequence[int]) -> "Assignment":
        first = dict(self.first)
        first.update(zip(variables, elements))
        return Assignment(frozendict(first), self.second)

    def bind_set(self, var: str, rows: Relation) -> "Assignment":
        return Assignment(self.first, self.second.set(var, frozenset(rows)))

    def element(self, arg: Arg, universe: int) -> Optional[int]:
        """The element an argument denotes, or None when it is unbound or out of range."""
        value = self.first.get(arg) if isinstance(arg, str) else arg
        if value is None or not 0 <= value < universe:
            return None
        return value

    def row(self, args: Sequence[Arg], universe: int) -> Optional[Row]:
        values = [self.element(arg, universe) for arg in args]
        if any(value is None for value in values):
            return None
        return tuple(values)

    def validate(self, universe: int) -> None:
        for var, element in self.first.items():
            if not 0 <= element < universe:
                raise StructureError(f"{var}={element} lies outside the universe of size {universe}")
        for var, rows in self.second.items():
            for row in rows:
                if any(not 0 <= entry < universe for entry in row):
                    raise StructureError(f"{var} contains {row}, outside the universe of size {universe}")


def parse_assignment(text: str) -> Assignment:
    """Parse ``"x=0,X={(0),(1,2)}"``."""
    first = {}
    second = {}
    position = 0
    text = text.strip()
    while position < len(text):
        match = _BINDING.match(text, position)
        if match is None:
            raise ParseError(f"Cannot read assignment at {text[position:]!r}", 1, position + 1)
        var, value = match.group(1), match.group(2)
        if value.startswith("{"):
            if not is_so_name(var):
                raise ParseError(f"{var} is first-order and cannot take a set")
            rows = []
            for row in _ROW.findall(value):
                entries = [entry.strip() for entry in row.split(",") if entry.strip()]
                if not all(entry.isdigit() for entry in entries):
                    raise ParseError(f"Tuple ({row}) of {var} must list elements")
                rows.append(tuple(int(entry) for entry in entries))
            second[var] = frozenset(rows)
        else:
            if is_so_name(var):
                raise ParseError(f"{var} is second-order and needs a set of tuples")
            first[var] = int(value)
        position = match.end()
    return Assignment(frozendict(first), frozendict(second))


def free_values(assignment: Assignment, variables: Sequence[Tuple[str, Optional[int]]]) -> list:
    """Values of the free variables in order, shaped for ``encode``; arity None marks first-order."""
    values: list = []
    for var, arity in variables:
        if arity is None and var in assignment.first:
            values.append(assignment.first[var])
        elif arity is not None and var in assignment.second:
            values.append((arity, assignment.second[var]))
        else:
            raise StructureError(f"No value for free variable {var}")
    return values


__all__ = ["Assignment", "free_values", "parse_assignment"]
