from __future__ import annotations

from typing import Tuple

from logic.ast import (
    And,
    Arg,
    Closure,
    Const,
    Eq,
    ExistsFO,
    ExistsSO,
    FalseF,
    Fixpoint,
    ForallFO,
    Formula,
    Guard,
    Iff,
    Implies,
    Less,
    Not,
    OPlus,
    OTimes,
    Or,
    ProdFO,
    ProdSO,
    RelAtom,
    SOAtom,
    SumFO,
    SumSO,
    TrueF,
)

GUARD, OPLUS, OTIMES, IFF, IMP, DISJ, CONJ, UNARY = range(8)

# node -> (level, operator, left level, right level)
_BINARY = {
    OPlus: (OPLUS, "(+)", OPLUS, OTIMES),
    OTimes: (OTIMES, "(*)", OTIMES, IFF),
    Iff: (IFF, "<->", IMP, IMP),
    Implies: (IMP, "->", DISJ, IMP),
    Or: (DISJ, "|", DISJ, CONJ),
    And: (CONJ, "&", CONJ, UNARY),
}

_FO_QUANTIFIERS = {ExistsFO: "exists", ForallFO: "forall", SumFO: "sum", ProdFO: "prod"}
_SO_QUANTIFIERS = {ExistsSO: "exists", SumSO: "sum", ProdSO: "prod"}


def _args(args: Tuple[Arg, ...]) -> str:
    return ",".join(str(arg) for arg in args)


def _level(node: Formula) -> int:
    if isinstance(node, Guard):
        return GUARD
    if type(node) in _BINARY:
        return _BINARY[type(node)][0]
    return UNARY


def _show(node: Formula, minimum: int) -> str:
    text = _render(node)
    return f"({text})" if _level(node) < minimum else text


def _render(node: Formula) -> str:
    kind = type(node)
    if kind in _BINARY:
        _, op, left, right = _BINARY[kind]
        return f"{_show(node.left, left)} {op} {_show(node.right, right)}"
    if isinstance(node, Guard):
        return f"{_show(node.cond, OPLUS)} ? {_show(node.body, GUARD)}"
    if isinstance(node, Not):
        if isinstance(node.body, Eq):
            return f"{node.body.left} != {node.body.right}"
        return f"!{_show(node.body, UNARY)}"
    if kind in _FO_QUANTIFIERS:
        return f"{_FO_QUANTIFIERS[kind]} {node.var}. {_show(node.body, UNARY)}"
    if kind in _SO_QUANTIFIERS:
        return f"{_SO_QUANTIFIERS[kind]} {node.var}:{node.arity}. {_show(node.body, UNARY)}"
    if isinstance(node, TrueF):
        return "true"
    if isinstance(node, FalseF):
        return "false"
    if isinstance(node, Const):
        return f"c({node.literal})"
    if isinstance(node, Eq):
        return f"{node.left} = {node.right}"
    if isinstance(node, Less):
        return f"{node.left} < {node.right}"
    if isinstance(node, RelAtom):
        return f"{node.name}({_args(node.args)})"
    if isinstance(node, SOAtom):
        return f"{node.var}({_args(node.args)})"
    if isinstance(node, Closure):
        return (
            f"[{node.kind.value} ({_args(node.sources)})->({_args(node.targets)}). "
            f"{format_formula(node.body)}]({_args(node.start + node.end)})"
        )
    if isinstance(node, Fixpoint):
        return (
            f"[{node.kind.value} {node.rel}({_args(node.variables)}). "
            f"{format_formula(node.body)}]({_args(node.args)})"
        )
    raise TypeError(f"Cannot print {kind.__name__}")


def format_formula(node: Formula) -> str:
    """Concrete syntax with the fewest parentheses that parse back to the same tree."""
    return _render(node)


__all__ = ["format_formula"]
