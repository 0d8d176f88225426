from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Any, Collection, FrozenSet, Mapping, Sequence, Union

from core.errors import TermError
from semirings.base import Semiring, Value


@dataclass(frozen=True)
class Leaf:
    symbol: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Plus:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Times:
    left: "Term"
    right: "Term"


Term = Union[Leaf, Zero, One, Plus, Times]


def eval_term(term: Term, semiring: Semiring, assign: Mapping[str, Value]) -> Value:
    """Fold a term bottom-up with the semiring operations."""
    if isinstance(term, Zero):
        return semiring.zero
    if isinstance(term, One):
        return semiring.one
    if isinstance(term, Leaf):
        if term.symbol not in assign:
            raise TermError(f"Unresolved generator: {term.symbol}")
        return assign[term.symbol]
    left = eval_term(term.left, semiring, assign)
    right = eval_term(term.right, semiring, assign)
    if isinstance(term, Plus):
        return semiring.add(left, right)
    return semiring.mul(left, right)


def _leaf(symbol: Any) -> Term:
    if symbol in ("0", 0):
        return Zero()
    if symbol in ("1", 1):
        return One()
    return Leaf(str(symbol))


def _fold(terms: Sequence[Term], node: type, empty: Term) -> Term:
    if not terms:
        return empty
    return reduce(node, terms)


def build_sigma_pi(rows: Sequence[Any], k: int) -> Term:
    """Build a sum-of-products term with ``k`` alternations from nested lists.

    Even nesting levels are sums, odd ones products; entries at depth ``2k``
    are generator symbols, with ``"0"``/``"1"`` standing for the constants.
    """
    if k < 1:
        raise TermError(f"Alternation depth must be at least 1, got {k}")

    def build(node: Any, depth: int) -> Term:
        if depth == 2 * k:
            if isinstance(node, (list, tuple)):
                raise TermError(f"Nesting deeper than declared depth {2 * k}")
            return _leaf(node)
        if not isinstance(node, (list, tuple)):
            raise TermError(f"Ragged nesting: symbol {node!r} at depth {depth} of {2 * k}")
        children = [build(child, depth + 1) for child in node]
        if depth % 2 == 0:
            return _fold(children, Plus, Zero())
        return _fold(children, Times, One())

    return build(rows, 0)


def format_term(term: Term) -> str:
    def show(node: Term, level: int) -> str:
        if isinstance(node, Zero):
            return "0"
        if isinstance(node, One):
            return "1"
        if isinstance(node, Leaf):
            return node.symbol
        if isinstance(node, Plus):
            text = f"{show(node.left, 0)} + {show(node.right, 1)}"
            return f"({text})" if level > 0 else text
        return f"{show(node.left, 1)}*{show(node.right, 2)}" if level < 2 else (
            f"({show(node.left, 1)}*{show(node.right, 2)})"
        )

    return show(term, 0)


def term_generators(term: Term) -> FrozenSet[str]:
    if isinstance(term, Leaf):
        return frozenset({term.symbol})
    if isinstance(term, (Plus, Times)):
        return term_generators(term.left) | term_generators(term.right)
    return frozenset()


def check_generators(term: Term, generators: Collection[str]) -> None:
    stray = sorted(term_generators(term) - set(generators))
    if stray:
        raise TermError(f"Leaves outside the generator set: {', '.join(stray)}")


__all__ = [
    "Leaf",
    "One",
    "Plus",
    "Term",
    "Times",
    "Zero",
    "build_sigma_pi",
    "check_generators",
    "eval_term",
    "format_term",
    "term_generators",
]
