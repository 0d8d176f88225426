"""Example formulas over the graph signature ``edge:2`` and a counting example over ``p:1``."""

from __future__ import annotations

from itertools import permutations
from math import factorial

from logic.ast import Formula
from logic.parser import parse_formula
from structures.model import Signature, parse_signature

GRAPH = parse_signature("edge:2")
UNARY = parse_signature("p:1")

CLIQUE_DEF = "def clique(X:1) := forall x. forall y. (X(x) & X(y) & x != y -> edge(x,y));\n"

CUT_DEF = (
    "def cut(X:1, Y:1) := forall x. ((X(x) <-> !Y(x))"
    " & (exists y. edge(y,x) | X(x))"
    " & (exists y. edge(x,y) | Y(x)));\n"
)

LARGEST_CLIQUE = CLIQUE_DEF + "sum X:1. (clique(X) (*) prod x. (c(0) (+) c(1) (*) X(x)))"

MIN_CUT = CUT_DEF + (
    "sum X:1. sum Y:1. (cut(X,Y) (*) prod x. prod y. (c(1) (+) !(X(x) & Y(y) & edge(x,y))))"
)

SUBSET_COUNT = "sum P:1. prod x. (P(x) ? c(2))"


def clique_check() -> Formula:
    """clique(X) with X free."""
    return parse_formula(CLIQUE_DEF + "clique(X)")


def largest_clique() -> Formula:
    """Size of a largest clique, read in the arctic semiring."""
    return parse_formula(LARGEST_CLIQUE)


def n_cliques_text(size: int) -> str:
    if size < 1:
        raise ValueError(f"Clique size must be positive, got {size}")
    variables = [f"x{i}" for i in range(1, size + 1)]
    pairs = [
        f"{a} != {b} & edge({a},{b})" for a, b in permutations(variables, 2)
    ]
    body = " & ".join(pairs) if pairs else "true"
    prefix = "".join(f"sum {var}. " for var in variables)
    return f"c(1/{factorial(size)}) (*) {prefix}({body})"


def n_cliques(size: int) -> Formula:
    """Number of cliques with ``size`` elements, read over the rationals."""
    return parse_formula(n_cliques_text(size))


def min_cut() -> Formula:
    """Minimum cut of a DAG read as a unit-capacity network, in the tropical semiring."""
    return parse_formula(MIN_CUT)


def subset_count() -> Formula:
    """Sum over sets P of 2^|P|; (2+1)^n over the naturals."""
    return parse_formula(SUBSET_COUNT)


LIBRARY = {
    "clique": (clique_check, GRAPH),
    "largest_clique": (largest_clique, GRAPH),
    "n_cliques_2": (lambda: n_cliques(2), GRAPH),
    "n_cliques_3": (lambda: n_cliques(3), GRAPH),
    "min_cut": (min_cut, GRAPH),
    "subset_count": (subset_count, UNARY),
}


def library_formula(name: str) -> Formula:
    try:
        factory, _ = LIBRARY[name]
    except KeyError as exc:
        raise ValueError(f"Unknown library formula: {name} (known: {', '.join(sorted(LIBRARY))})") from exc
    return factory()


def library_signature(name: str) -> Signature:
    return LIBRARY[name][1]


__all__ = [
    "CLIQUE_DEF",
    "CUT_DEF",
    "GRAPH",
    "LARGEST_CLIQUE",
    "LIBRARY",
    "MIN_CUT",
    "SUBSET_COUNT",
    "UNARY",
    "clique_check",
    "largest_clique",
    "library_formula",
    "library_signature",
    "min_cut",
    "n_cliques",
    "n_cliques_text",
    "subset_count",
]
