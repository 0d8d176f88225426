"""Ground a sentence of shape sum P1 ... sum Pm. body over a fixed structure.

First-order quantifiers become disjunctions and conjunctions over the universe,
order, equality and relation atoms become the constants one and zero, and an
atom ``P(a..)`` becomes the propositional variable ``P[a..]``. Boolean
disjunctions are ground into mutually exclusive sums, so every Boolean part of
the result is worth exactly one or zero under any truth assignment and the
weighted parts keep their meaning in non-idempotent semirings.
"""

from __future__ import annotations

import logging
from typing import Dict, List, Mapping

from core.errors import ShapeViolation
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
    Or,
    OTimes,
    ProdFO,
    ProdSO,
    RelAtom,
    SOAtom,
    SumFO,
    SumSO,
    TrueF,
    free_vars,
)
from logic.fragments import so_prefix
from satred.prop import (
    FALSE,
    TRUE,
    NegVar,
    PConst,
    PropFormula,
    Var,
    p_and,
    p_and_all,
    p_or,
    p_or_all,
    variables,
)
from structures.model import Row, Structure
from structures.orders import tuples_lex

logger = logging.getLogger(__name__)

Env = Mapping[str, int]


def prop_variable(var: str, row: Row) -> str:
    return f"{var}[{','.join(str(entry) for entry in row)}]"


class _Grounder:
    def __init__(self, structure: Structure, prefix: Dict[str, int]):
        self.structure = structure
        self.prefix = prefix
        self.n = structure.universe

    def element(self, arg: Arg, env: Env):
        value = env.get(arg) if isinstance(arg, str) else arg
        if value is None or not 0 <= value < self.n:
            return None
        return value

    def row(self, args, env: Env):
        values = [self.element(arg, env) for arg in args]
        return None if any(value is None for value in values) else tuple(values)

    def truth(self, flag: bool, positive: bool) -> PropFormula:
        return TRUE if flag == positive else FALSE

    def either(self, left: Formula, right: Formula, env: Env) -> PropFormula:
        """left | right as an exclusive sum: left, or not left and right."""
        return p_or(self.boolean(left, env, True), p_and(self.boolean(left, env, False), self.boolean(right, env, True)))

    def both(self, left: Formula, right: Formula, env: Env, positive: bool = True) -> PropFormula:
        return p_and(self.boolean(left, env, positive), self.boolean(right, env, positive))

    def some(self, var: str, body: Formula, env: Env, positive: bool) -> PropFormula:
        """Exclusive disjunction over the universe, the first witness wins."""
        rest: PropFormula = FALSE
        for a in reversed(range(self.n)):
            inner = {**env, var: a}
            rest = p_or(self.boolean(body, inner, positive), p_and(self.boolean(body, inner, not positive), rest))
        return rest

    def every(self, var: str, body: Formula, env: Env, positive: bool) -> PropFormula:
        return p_and_all([self.boolean(body, {**env, var: a}, positive) for a in range(self.n)])

    def boolean(self, node: Formula, env: Env, positive: bool) -> PropFormula:
        """A formula worth one when ``node`` has the truth value ``positive`` and zero otherwise."""
        if isinstance(node, TrueF):
            return self.truth(True, positive)
        if isinstance(node, FalseF):
            return self.truth(False, positive)
        if isinstance(node, (Eq, Less)):
            left, right = self.element(node.left, env), self.element(node.right, env)
            if left is None or right is None:
                return self.truth(False, positive)
            return self.truth(left == right if isinstance(node, Eq) else left < right, positive)
        if isinstance(node, RelAtom):
            row = self.row(node.args, env)
            return self.truth(row is not None and self.structure.holds(node.name, row), positive)
        if isinstance(node, SOAtom):
            if node.var not in self.prefix:
                raise ShapeViolation(f"{node.var} is not bound by the leading sum prefix", node)
            row = self.row(node.args, env)
            if row is None:
                return self.truth(False, positive)
            name = prop_variable(node.var, row)
            return Var(name) if positive else NegVar(name)
        if isinstance(node, Not):
            return self.boolean(node.body, env, not positive)
        if isinstance(node, Or):
            if positive:
                return self.either(node.left, node.right, env)
            return self.both(node.left, node.right, env, False)
        if isinstance(node, And):
            if positive:
                return self.both(node.left, node.right, env)
            return self.either(Not(node.left), Not(node.right), env)
        if isinstance(node, Implies):
            return self.boolean(Or(Not(node.left), node.right), env, positive)
        if isinstance(node, Iff):
            agree = Or(And(node.left, node.right), And(Not(node.left), Not(node.right)))
            return self.boolean(agree, env, positive)
        if isinstance(node, ExistsFO):
            if positive:
                return self.some(node.var, node.body, env, True)
            return self.every(node.var, node.body, env, False)
        if isinstance(node, ForallFO):
            if positive:
                return self.every(node.var, node.body, env, True)
            return self.some(node.var, node.body, env, False)
        if node.weighted:
            raise ShapeViolation("Negation or a Boolean connective scopes a weighted subformula", node)
        raise ShapeViolation(f"{type(node).__name__} cannot be ground into propositional logic", node)

    def weighted(self, node: Formula, env: Env) -> PropFormula:
        if isinstance(node, Const):
            return PConst(node.literal)
        if isinstance(node, OPlus):
            return p_or(self.weighted(node.left, env), self.weighted(node.right, env))
        if isinstance(node, OTimes):
            return p_and(self.weighted(node.left, env), self.weighted(node.right, env))
        if isinstance(node, SumFO):
            return p_or_all([self.weighted(node.body, {**env, node.var: a}) for a in range(self.n)])
        if isinstance(node, ProdFO):
            return p_and_all([self.weighted(node.body, {**env, node.var: a}) for a in range(self.n)])
        if isinstance(node, Guard):
            held = p_and(self.boolean(node.cond, env, True), self.weighted(node.body, env))
            return p_or(held, self.boolean(node.cond, env, False))
        if isinstance(node, (SumSO, ProdSO, ExistsSO)):
            raise ShapeViolation("Second-order quantifiers may only form the leading sum prefix", node)
        if isinstance(node, (Fixpoint, Closure)):
            raise ShapeViolation(f"{type(node).__name__} has no propositional grounding", node)
        return self.boolean(node, env, True)


def cook_levin_reduce(formula: Formula, structure: Structure) -> PropFormula:
    """A propositional formula whose SAT series equals the formula's value on ``structure``."""
    free = free_vars(formula)
    if free:
        raise ShapeViolation(f"Grounding needs a sentence, free variables: {', '.join(sorted(free))}", formula)
    blocks, body = so_prefix(formula)
    prefix: Dict[str, int] = {}
    for block in blocks:
        if block.var in prefix:
            raise ShapeViolation(f"{block.var} is bound twice in the sum prefix", block)
        prefix[block.var] = block.arity

    grounded = _Grounder(structure, prefix).weighted(body, {})

    # a prefix variable the grounding dropped still doubles the assignments
    present = variables(grounded)
    padding: List[PropFormula] = []
    for var, arity in prefix.items():
        for row in tuples_lex(structure.universe, arity):
            name = prop_variable(var, row)
            if name not in present:
                padding.append(p_or(Var(name), NegVar(name)))
    result = p_and(grounded, p_and_all(padding)) if padding else grounded
    logger.info(
        "Formula ground | universe=%s | prefix=%s | variables=%s | padded=%s",
        structure.universe,
        len(prefix),
        len(variables(result)),
        len(padding),
    )
    return result


__all__ = ["cook_levin_reduce", "prop_variable"]
