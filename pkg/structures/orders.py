from __future__ import annotations

from itertools import product
from typing import AbstractSet, Iterator, List, Tuple

from core.errors import CapExceededError, StructureError
from structures.model import Relation, Row

DEFAULT_SUBSET_CAP = 20


def tuples_lex(n: int, arity: int) -> Iterator[Row]:
    """All ``arity``-tuples over {0..n-1} in lexicographic order."""
    if n < 1 or arity < 0:
        raise StructureError(f"Cannot enumerate {arity}-tuples over a universe of size {n}")
    return product(range(n), repeat=arity)


def tuple_index(row: Row, n: int) -> int:
    """Position of ``row`` in lexicographic order: sum of n^(l-1-i) * a_i."""
    index = 0
    for entry in row:
        index = index * n + entry
    return index


def tuple_at(index: int, n: int, arity: int) -> Row:
    if not 0 <= index < n**arity:
        raise StructureError(f"Tuple position {index} outside 0..{n**arity - 1}")
    digits: List[int] = []
    for _ in range(arity):
        index, digit = divmod(index, n)
        digits.append(digit)
    return tuple(reversed(digits))


def relation_index(rows: AbstractSet[Row], n: int) -> int:
    """pi: tuple number j carries weight 2^j, so the <* order is integer order."""
    return sum(1 << tuple_index(row, n) for row in rows)


def relation_at(code: int, n: int, arity: int) -> Relation:
    size = n**arity
    if not 0 <= code < (1 << size):
        raise StructureError(f"Relation number {code} outside 0..{(1 << size) - 1}")
    return frozenset(tuple_at(j, n, arity) for j in range(size) if code >> j & 1)


def star_less(left: AbstractSet[Row], right: AbstractSet[Row], n: int) -> bool:
    """X <* Y: the largest tuple on which they differ lies in Y."""
    return relation_index(left, n) < relation_index(right, n)


def check_subset_base(n: int, arity: int, cap: int = DEFAULT_SUBSET_CAP) -> int:
    base = n**arity
    if base > cap:
        raise CapExceededError(f"subset enumeration over {n}^{arity} tuples", base, cap)
    return base


def subsets_star(n: int, arity: int, cap: int = DEFAULT_SUBSET_CAP) -> Iterator[Relation]:
    """All subsets of {0..n-1}^arity in <*-increasing order; position equals pi."""
    base = check_subset_base(n, arity, cap)
    for code in range(1 << base):
        yield frozenset(tuple_at(j, n, arity) for j in range(base) if code >> j & 1)


def bottom(n: int) -> int:
    return 0


def top(n: int) -> int:
    return n - 1


def successor_pairs(n: int) -> Tuple[Tuple[int, int], ...]:
    return tuple((i, i + 1) for i in range(n - 1))


__all__ = [
    "DEFAULT_SUBSET_CAP",
    "bottom",
    "check_subset_base",
    "relation_at",
    "relation_index",
    "star_less",
    "subsets_star",
    "successor_pairs",
    "top",
    "tuple_at",
    "tuple_index",
    "tuples_lex",
]
