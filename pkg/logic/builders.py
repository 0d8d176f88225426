from __future__ import annotations

from typing import AbstractSet, Callable, List, Optional, Sequence, Tuple

from logic.ast import (
    And,
    Arg,
    Const,
    Eq,
    ExistsFO,
    FalseF,
    ForallFO,
    Formula,
    Guard,
    Less,
    Not,
    Or,
    OTimes,
    ProdFO,
    ProdSO,
    SOAtom,
    SumFO,
    SumSO,
    TrueF,
)
from semirings.base import ONE_LITERAL

OrderAtom = Callable[[Arg, Arg], Formula]


def natural_less(left: Arg, right: Arg) -> Formula:
    return Less(left, right)


def relation_less(name: str) -> OrderAtom:
    """Order atoms read from a binary second-order variable instead of the builtin <."""

    def atom(left: Arg, right: Arg) -> Formula:
        return SOAtom(name, (left, right))

    return atom


class NameSupply:
    """Hands out variable names that are not in ``avoid`` and never repeat."""

    def __init__(self, prefix: str = "v", avoid: AbstractSet[str] = frozenset()):
        self.prefix = prefix
        self.avoid = set(avoid)
        self.counter = 0

    def fresh(self) -> str:
        while True:
            self.counter += 1
            name = f"{self.prefix}{self.counter}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name

    def tuple(self, width: int) -> Tuple[str, ...]:
        return tuple(self.fresh() for _ in range(width))


def _balanced(items: Sequence[Formula], node: type, empty: Formula) -> Formula:
    if not items:
        return empty
    if len(items) == 1:
        return items[0]
    middle = len(items) // 2
    return node(_balanced(items[:middle], node, empty), _balanced(items[middle:], node, empty))


def conjoin(items: Sequence[Formula]) -> Formula:
    return _balanced(list(items), And, TrueF())


def disjoin(items: Sequence[Formula]) -> Formula:
    return _balanced(list(items), Or, FalseF())


def multiply(items: Sequence[Formula]) -> Formula:
    """Left-nested product; keeps factor order for noncommutative semirings."""
    items = list(items)
    if not items:
        return Const(ONE_LITERAL)
    result = items[0]
    for item in items[1:]:
        result = OTimes(result, item)
    return result


def _quantify(node: type, variables: Sequence[str], body: Formula) -> Formula:
    for var in reversed(variables):
        body = node(var, body)
    return body


def exists_all(variables: Sequence[str], body: Formula) -> Formula:
    return _quantify(ExistsFO, variables, body)


def forall_all(variables: Sequence[str], body: Formula) -> Formula:
    return _quantify(ForallFO, variables, body)


def sum_all(variables: Sequence[str], body: Formula) -> Formula:
    return _quantify(SumFO, variables, body)


def prod_all(variables: Sequence[str], body: Formula) -> Formula:
    """Product over tuples in lexicographic order."""
    return _quantify(ProdFO, variables, body)


def equal_tuples(left: Sequence[Arg], right: Sequence[Arg]) -> Formula:
    return conjoin([Eq(a, b) for a, b in zip(left, right)])


def is_bottom(var: Arg, names: NameSupply, less: OrderAtom = natural_less) -> Formula:
    other = names.fresh()
    return Not(ExistsFO(other, less(other, var)))


def is_top(var: Arg, names: NameSupply, less: OrderAtom = natural_less) -> Formula:
    other = names.fresh()
    return Not(ExistsFO(other, less(var, other)))


def all_bottom(variables: Sequence[Arg], names: NameSupply, less: OrderAtom = natural_less) -> Formula:
    return conjoin([is_bottom(var, names, less) for var in variables])


def has_successor(variables: Sequence[Arg], names: NameSupply, less: OrderAtom = natural_less) -> Formula:
    """Some component is not the top element."""
    return disjoin([Not(is_top(var, names, less)) for var in variables])


def successor(left: Arg, right: Arg, names: NameSupply, less: OrderAtom = natural_less) -> Formula:
    middle = names.fresh()
    return And(less(left, right), Not(ExistsFO(middle, And(less(left, middle), less(middle, right)))))


def tuple_successor(
    left: Sequence[Arg], right: Sequence[Arg], names: NameSupply, less: OrderAtom = natural_less
) -> Formula:
    """right = left + 1 in lexicographic order, first component most significant."""
    width = len(left)
    cases: List[Formula] = []
    for i in range(width):
        parts = [Eq(left[j], right[j]) for j in range(i)]
        parts.append(successor(left[i], right[i], names, less))
        for j in range(i + 1, width):
            parts.append(is_top(left[j], names, less))
            parts.append(is_bottom(right[j], names, less))
        cases.append(conjoin(parts))
    return disjoin(cases)


def padded_equal(
    short: Sequence[Arg], full: Sequence[Arg], names: NameSupply, less: OrderAtom = natural_less
) -> Formula:
    """full = (bottom, ..., bottom, short...), so both have the same tuple index."""
    pad = len(full) - len(short)
    if pad < 0:
        return FalseF()
    parts = [is_bottom(var, names, less) for var in full[:pad]]
    parts.extend(Eq(a, b) for a, b in zip(short, full[pad:]))
    return conjoin(parts)


def plus_power(
    left: Sequence[Arg], right: Sequence[Arg], power: int, names: NameSupply, less: OrderAtom = natural_less
) -> Formula:
    """right = left + n^power on tuple indices; false when it would overflow."""
    width = len(left)
    if power >= width:
        return FalseF()
    cut = width - power
    step = tuple_successor(left[:cut], right[:cut], names, less)
    return And(step, equal_tuples(left[cut:], right[cut:])) if power else step


def offset_chain(
    short: Sequence[Arg],
    full: Sequence[str],
    powers: Sequence[int],
    names: NameSupply,
    less: OrderAtom = natural_less,
) -> Formula:
    """index(full) = index(short) + sum of n^p over ``powers``."""
    if not powers:
        return padded_equal(short, full, names, less)
    middle = names.tuple(len(full))
    inner = offset_chain(short, middle, powers[:-1], names, less)
    return exists_all(middle, And(inner, plus_power(middle, full, powers[-1], names, less)))


def guarded_constant(cond: Formula, literal: str) -> Formula:
    return Guard(cond, Const(literal))


def sigma_pi_formula(
    blocks: Sequence[Tuple[Sequence[str], Sequence[str]]],
    cases: Sequence[Tuple[Formula, str]],
    so_arity: Optional[int] = None,
) -> Formula:
    """Sum-product prefix over the cases ``cond ? c(s)``.

    Each block is (summed names, multiplied names). With ``so_arity`` the names
    are second-order variables of that arity, otherwise first-order tuples.
    """
    body = multiply([guarded_constant(cond, literal) for cond, literal in cases])
    for summed, multiplied in reversed(blocks):
        if so_arity is None:
            body = sum_all(summed, prod_all(multiplied, body))
        else:
            for var in reversed(multiplied):
                body = ProdSO(var, so_arity, body)
            for var in reversed(summed):
                body = SumSO(var, so_arity, body)
    return body


__all__ = [
    "NameSupply",
    "OrderAtom",
    "all_bottom",
    "conjoin",
    "disjoin",
    "equal_tuples",
    "exists_all",
    "forall_all",
    "guarded_constant",
    "has_successor",
    "is_bottom",
    "is_top",
    "multiply",
    "natural_less",
    "offset_chain",
    "padded_equal",
    "plus_power",
    "prod_all",
    "relation_less",
    "sigma_pi_formula",
    "successor",
    "sum_all",
    "tuple_successor",
]
