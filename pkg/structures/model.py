from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from frozendict import frozendict

from core.errors import StructureError

RELATION_NAME = re.compile(r"[a-z][A-Za-z0-9_]*")

Element = int
Row = Tuple[int, ...]
Relation = FrozenSet[Row]


@dataclass(frozen=True)
class Signature:
    """Ordered relation symbols with their arities."""

    symbols: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        for name, arity in self.symbols:
            if not RELATION_NAME.fullmatch(name):
                raise StructureError(f"Relation symbol must be a lower-case identifier: {name!r}")
            if name in seen:
                raise StructureError(f"Duplicate relation symbol: {name}")
            if arity < 1:
                raise StructureError(f"Arity of {name} must be positive, got {arity}")
            seen.add(name)

    @classmethod
    def of(cls, mapping: Mapping[str, int]) -> "Signature":
        return cls(tuple((name, int(arity)) for name, arity in mapping.items()))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    @property
    def max_arity(self) -> int:
        return max((arity for _, arity in self.symbols), default=0)

    def arity(self, name: str) -> int:
        for symbol, arity in self.symbols:
            if symbol == name:
                return arity
        raise StructureError(f"Unknown relation symbol: {name}")

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def __iter__(self) -> Iterator[Tuple[str, int]]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return ",".join(f"{name}:{arity}" for name, arity in self.symbols)


def parse_signature(text: str) -> Signature:
    """Parse ``"edge:2,p:1"``; the empty string is the empty signature."""
    symbols = []
    for item in filter(None, (part.strip() for part in text.split(","))):
        name, sep, arity = item.partition(":")
        if not sep or not arity.strip().isdigit():
            raise StructureError(f"Signature entry needs the form name:arity, got {item!r}")
        symbols.append((name.strip(), int(arity)))
    return Signature(tuple(symbols))


@dataclass(frozen=True)
class Structure:
    """A finite structure over {0..n-1}, ordered by the natural order."""

    universe: int
    signature: Signature = field(default_factory=Signature)
    relations: Mapping[str, Relation] = field(default_factory=frozendict)

    def __post_init__(self) -> None:
        if self.universe < 1:
            raise StructureError(f"Universe size must be at least 1, got {self.universe}")
        unknown = set(self.relations) - set(self.signature.names)
        if unknown:
            raise StructureError(f"Relations outside the signature: {', '.join(sorted(unknown))}")
        normalized: Dict[str, Relation] = {}
        for name, arity in self.signature:
            rows = frozenset(tuple(row) for row in self.relations.get(name, ()))
            for row in rows:
                if len(row) != arity:
                    raise StructureError(f"Tuple {row} of {name} does not have arity {arity}")
                if any(not 0 <= entry < self.universe for entry in row):
                    raise StructureError(f"Tuple {row} of {name} leaves the universe of size {self.universe}")
            normalized[name] = rows
        object.__setattr__(self, "relations", frozendict(normalized))

    @classmethod
    def build(
        cls,
        universe: int,
        relations: Mapping[str, Iterable[Sequence[int]]],
        signature: Optional[Signature] = None,
    ) -> "Structure":
        if signature is None:
            arities = {}
            for name, rows in relations.items():
                rows = [tuple(row) for row in rows]
                if not rows:
                    raise StructureError(f"Cannot infer the arity of empty relation {name}")
                arities[name] = len(rows[0])
            signature = Signature.of(arities)
        return cls(universe, signature, frozendict({k: frozenset(map(tuple, v)) for k, v in relations.items()}))

    @property
    def elements(self) -> range:
        return range(self.universe)

    def relation(self, name: str) -> Relation:
        try:
            return self.relations[name]
        except KeyError as exc:
            raise StructureError(f"Unknown relation symbol: {name}") from exc

    def holds(self, name: str, row: Row) -> bool:
        return row in self.relation(name)

    def transport(self, permutation: Sequence[int]) -> "Structure":
        """Image of this structure under the bijection ``i -> permutation[i]``."""
        if sorted(permutation) != list(range(self.universe)):
            raise StructureError(f"Not a permutation of the universe: {list(permutation)}")
        moved = {
            name: frozenset(tuple(permutation[entry] for entry in row) for row in rows)
            for name, rows in self.relations.items()
        }
        return Structure(self.universe, self.signature, frozendict(moved))

    def __str__(self) -> str:
        parts = [f"n={self.universe}"]
        for name, rows in self.relations.items():
            parts.append(f"{name}={sorted(rows)}")
        return " ".join(parts)


__all__ = ["Element", "Relation", "Row", "Signature", "Structure", "parse_signature"]
