"""Weighted propositional formulas: literals and constants joined by & (product) and | (sum)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from typing import FrozenSet, List, Mapping, Sequence, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput

from core.errors import CapExceededError, ParseError, TermError
from core.parallel import parallel_map
from semirings.base import ONE_LITERAL, ZERO_LITERAL, Semiring, Value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class NegVar:
    name: str


@dataclass(frozen=True)
class PConst:
    literal: str


@dataclass(frozen=True)
class PAnd:
    left: "PropFormula"
    right: "PropFormula"


@dataclass(frozen=True)
class POr:
    left: "PropFormula"
    right: "PropFormula"


PropFormula = Union[Var, NegVar, PConst, PAnd, POr]

TRUE = PConst(ONE_LITERAL)
FALSE = PConst(ZERO_LITERAL)


def p_and(left: PropFormula, right: PropFormula) -> PropFormula:
    """Product with the constants one and zero folded away."""
    if left == FALSE or right == FALSE:
        return FALSE
    if left == TRUE:
        return right
    if right == TRUE:
        return left
    return PAnd(left, right)


def p_or(left: PropFormula, right: PropFormula) -> PropFormula:
    if left == FALSE:
        return right
    if right == FALSE:
        return left
    return POr(left, right)


def p_and_all(items: Sequence[PropFormula]) -> PropFormula:
    result: PropFormula = TRUE
    for item in items:
        result = p_and(result, item)
    return result


def p_or_all(items: Sequence[PropFormula]) -> PropFormula:
    result: PropFormula = FALSE
    for item in items:
        result = p_or(result, item)
    return result


def variables(node: PropFormula) -> FrozenSet[str]:
    if isinstance(node, (Var, NegVar)):
        return frozenset({node.name})
    if isinstance(node, (PAnd, POr)):
        return variables(node.left) | variables(node.right)
    return frozenset()


def eval_prop(node: PropFormula, assignment: Mapping[str, bool], semiring: Semiring) -> Value:
    """V(x | y) = V(x) + V(y), V(x & y) = V(x) * V(y), constants stand for themselves."""
    if isinstance(node, (Var, NegVar)):
        if node.name not in assignment:
            raise TermError(f"Truth assignment has no value for {node.name}")
        flag = bool(assignment[node.name])
        return semiring.from_bool(flag if isinstance(node, Var) else not flag)
    if isinstance(node, PConst):
        return semiring.parse(node.literal)
    if isinstance(node, PAnd):
        return semiring.mul(eval_prop(node.left, assignment, semiring), eval_prop(node.right, assignment, semiring))
    return semiring.add(eval_prop(node.left, assignment, semiring), eval_prop(node.right, assignment, semiring))


def sat_series(node: PropFormula, semiring: Semiring, cap: int = 20, threads: int = 1) -> Value:
    """Sum of V(node) over every truth assignment of its variables."""
    names = sorted(variables(node))
    if len(names) > cap:
        raise CapExceededError("truth assignments over propositional variables", len(names), cap)
    assignments = [dict(zip(names, flags)) for flags in product((False, True), repeat=len(names))]
    logger.debug("SAT series | variables=%s | assignments=%s", len(names), len(assignments))
    values = parallel_map(lambda assignment: eval_prop(node, assignment, semiring), assignments, threads)
    return semiring.sum(values)


PROP_GRAMMAR = r"""
    ?start: disj

    ?disj: conj
         | disj "|" conj          -> or_

    ?conj: literal
         | conj "&" literal       -> and_

    ?literal: VAR                 -> var
            | "!" VAR             -> neg_var
            | CONST               -> const
            | "(" disj ")"

    CONST.2: /c\([^()\s]*\)/
    VAR: /[A-Za-z][A-Za-z0-9_]*(\[[0-9,]*\])?/

    %import common.WS
    %ignore WS
"""

_PARSER = Lark(PROP_GRAMMAR, parser="lalr")


@v_args(inline=True)
class _PropBuilder(Transformer):
    def var(self, token):
        return Var(str(token))

    def neg_var(self, token):
        return NegVar(str(token))

    def const(self, token):
        return PConst(str(token)[2:-1])

    def and_(self, left, right):
        return PAnd(left, right)

    def or_(self, left, right):
        return POr(left, right)


def parse_prop(text: str) -> PropFormula:
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as exc:
        raise ParseError(
            f"Syntax error: {str(exc).splitlines()[0]}", getattr(exc, "line", None), getattr(exc, "column", None)
        ) from exc
    return _PropBuilder().transform(tree)


def format_prop(node: PropFormula) -> str:
    if isinstance(node, Var):
        return node.name
    if isinstance(node, NegVar):
        return f"!{node.name}"
    if isinstance(node, PConst):
        return f"c({node.literal})"
    if isinstance(node, PAnd):
        parts: List[str] = []
        for side, is_right in ((node.left, False), (node.right, True)):
            text = format_prop(side)
            if isinstance(side, POr) or (is_right and isinstance(side, PAnd)):
                text = f"({text})"
            parts.append(text)
        return " & ".join(parts)
    right = format_prop(node.right)
    if isinstance(node.right, POr):
        right = f"({right})"
    return f"{format_prop(node.left)} | {right}"


def prop_size(node: PropFormula) -> int:
    if isinstance(node, (PAnd, POr)):
        return 1 + prop_size(node.left) + prop_size(node.right)
    return 1


__all__ = [
    "FALSE",
    "NegVar",
    "PAnd",
    "PConst",
    "POr",
    "PROP_GRAMMAR",
    "PropFormula",
    "TRUE",
    "Var",
    "eval_prop",
    "format_prop",
    "p_and",
    "p_and_all",
    "p_or",
    "p_or_all",
    "parse_prop",
    "prop_size",
    "sat_series",
    "variables",
]
