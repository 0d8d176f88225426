"""Bit-by-bit enumeration of leading second-order sums, skipping branches whose guards already fail.

A block ``sum X1. ... sum Xm. body`` whose body is a product with Boolean factors
contributes zero on every assignment that falsifies one of those factors. The
search decides membership of one tuple at a time and reads the factors in
Kleene's three-valued logic; a factor that is already false cuts the subtree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import TYPE_CHECKING, Dict, Iterator, List, Mapping, Optional, Tuple

from logic.ast import (
    And,
    ExistsFO,
    FalseF,
    ForallFO,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    OTimes,
    SOAtom,
    SumSO,
    TrueF,
)
from structures.model import Row
from structures.orders import check_subset_base, subsets_star, tuple_at

if TYPE_CHECKING:
    from evaluation.assignment import Assignment
    from evaluation.evaluator import Evaluator

Partial = Mapping[str, Dict[Row, bool]]


@dataclass(frozen=True)
class SOBlock:
    variables: Tuple[Tuple[str, int], ...]
    body: Formula
    guards: Tuple[Formula, ...]


def factors(node: Formula) -> List[Formula]:
    if isinstance(node, OTimes):
        return factors(node.left) + factors(node.right)
    return [node]


def so_block(node: SumSO) -> SOBlock:
    """Leading second-order sums up to the first one that rebinds a name of the block."""
    variables = []
    while isinstance(node, SumSO) and all(node.var != var for var, _ in variables):
        variables.append((node.var, node.arity))
        node = node.body
    guards = tuple(factor for factor in factors(node) if not factor.weighted)
    return SOBlock(tuple(variables), node, guards)


def kleene(evaluator: "Evaluator", node: Formula, a: "Assignment", partial: Partial) -> Optional[bool]:
    """Three-valued truth of a Boolean formula when some second-order variables are only partly known."""
    if evaluator.free_in(node).isdisjoint(partial):
        return evaluator.holds(node, a)
    if isinstance(node, SOAtom):
        row = a.row(node.args, evaluator.universe)
        if row is None:
            return False
        return partial[node.var].get(row)
    if isinstance(node, (TrueF, FalseF)):
        return isinstance(node, TrueF)
    if isinstance(node, Not):
        inner = kleene(evaluator, node.body, a, partial)
        return None if inner is None else not inner
    if isinstance(node, (And, Or, Implies)):
        left = kleene(evaluator, node.left, a, partial)
        if isinstance(node, Implies):
            left = None if left is None else not left
        right = kleene(evaluator, node.right, a, partial)
        values = (left, right)
        if isinstance(node, And):
            if False in values:
                return False
            return True if values == (True, True) else None
        if True in values:
            return True
        return False if values == (False, False) else None
    if isinstance(node, Iff):
        left = kleene(evaluator, node.left, a, partial)
        right = kleene(evaluator, node.right, a, partial)
        if left is None or right is None:
            return None
        return left == right
    if isinstance(node, (ExistsFO, ForallFO)):
        decisive = isinstance(node, ExistsFO)
        unknown = False
        for element in evaluator.structure.elements:
            inner = kleene(evaluator, node.body, a.bind(node.var, element), partial)
            if inner is decisive:
                return decisive
            unknown = unknown or inner is None
        return None if unknown else not decisive
    return None


def _full_enumeration(evaluator: "Evaluator", block: SOBlock, a: "Assignment") -> Iterator["Assignment"]:
    n = evaluator.universe
    cap = evaluator.limits.max_subsets
    choices = [list(subsets_star(n, arity, cap)) for _, arity in block.variables]
    for sets in product(*choices):
        leaf = a
        for (var, _), rows in zip(block.variables, sets):
            leaf = leaf.bind_set(var, rows)
        yield leaf


def block_assignments(
    evaluator: "Evaluator", block: SOBlock, a: "Assignment", prune: bool = True
) -> Iterator["Assignment"]:
    """Assignments of the block's variables that may contribute a nonzero term."""
    if not prune or not block.guards:
        yield from _full_enumeration(evaluator, block, a)
        return

    n = evaluator.universe
    bases = {
        var: check_subset_base(n, arity, evaluator.limits.max_subsets) for var, arity in block.variables
    }
    arities = dict(block.variables)
    bits: List[Tuple[str, Row]] = [
        (var, tuple_at(j, n, arities[var]))
        for j in range(max(bases.values()))
        for var, _ in block.variables
        if j < bases[var]
    ]
    decided: Dict[str, Dict[Row, bool]] = {var: {} for var, _ in block.variables}

    def bound() -> Tuple["Assignment", Dict[str, Dict[Row, bool]]]:
        current = a
        open_vars = {}
        for var, _ in block.variables:
            if len(decided[var]) == bases[var]:
                current = current.bind_set(var, frozenset(row for row, flag in decided[var].items() if flag))
            else:
                open_vars[var] = decided[var]
        return current, open_vars

    def consistent() -> bool:
        current, open_vars = bound()
        return all(kleene(evaluator, guard, current, open_vars) is not False for guard in block.guards)

    def descend(position: int) -> Iterator["Assignment"]:
        if position == len(bits):
            yield bound()[0]
            return
        var, row = bits[position]
        for flag in (False, True):
            decided[var][row] = flag
            if consistent():
                yield from descend(position + 1)
            else:
                evaluator.stats.so_pruned += 1 << (len(bits) - position - 1)
        del decided[var][row]

    yield from descend(0)


__all__ = ["SOBlock", "block_assignments", "factors", "kleene", "so_block"]
