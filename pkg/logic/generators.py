from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

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
    OPlus,
    OTimes,
    Or,
    ProdFO,
    RelAtom,
    SOAtom,
    SumFO,
    SumSO,
    TrueF,
)
from semirings.base import Semiring
from structures.model import Signature


@dataclass
class FormulaGenerator:
    """Random sentences over a signature; weighted ones in wESO shape."""

    signature: Signature
    rng: random.Random
    literal: Callable[[random.Random], str] = lambda rng: str(rng.randint(0, 3))
    allow_order: bool = True
    max_so: int = 2
    max_arity: int = 2
    _counter: int = field(default=0, init=False)

    @classmethod
    def for_semiring(cls, signature: Signature, rng: random.Random, semiring: Semiring, **kwargs) -> "FormulaGenerator":
        return cls(signature, rng, lambda r: semiring.format(semiring.sample(r)), **kwargs)

    def _fresh(self, prefix: str) -> str:
        self._counter += 1
        return f"{prefix}{self._counter}"

    def _arg(self, scope: List[str]) -> Arg:
        if not scope or self.rng.random() < 0.1:
            return 0
        return self.rng.choice(scope)

    def atom(self, scope: List[str], so_scope: List[Tuple[str, int]]) -> Formula:
        choices = ["rel"] * 3 + ["eq"]
        if self.allow_order:
            choices.append("less")
        if so_scope:
            choices.extend(["so"] * 3)
        if not len(self.signature):
            choices = [c for c in choices if c != "rel"] or ["eq"]
        kind = self.rng.choice(choices)
        if kind == "rel":
            name, arity = self.rng.choice(self.signature.symbols)
            return RelAtom(name, tuple(self._arg(scope) for _ in range(arity)))
        if kind == "so":
            var, arity = self.rng.choice(so_scope)
            return SOAtom(var, tuple(self._arg(scope) for _ in range(arity)))
        node = Eq if kind == "eq" else Less
        return node(self._arg(scope), self._arg(scope))

    def boolean(self, depth: int, scope: List[str], so_scope: List[Tuple[str, int]]) -> Formula:
        if depth <= 0 or self.rng.random() < 0.3:
            if self.rng.random() < 0.05:
                return self.rng.choice([TrueF(), FalseF()])
            return self.atom(scope, so_scope)
        kind = self.rng.choice(["not", "and", "or", "exists", "forall"])
        if kind == "not":
            return Not(self.boolean(depth - 1, scope, so_scope))
        if kind in ("and", "or"):
            node = And if kind == "and" else Or
            return node(self.boolean(depth - 1, scope, so_scope), self.boolean(depth - 1, scope, so_scope))
        var = self._fresh("x")
        node = ExistsFO if kind == "exists" else ForallFO
        return node(var, self.boolean(depth - 1, scope + [var], so_scope))

    def weighted(self, depth: int, scope: List[str], so_scope: List[Tuple[str, int]]) -> Formula:
        if depth <= 0 or self.rng.random() < 0.25:
            if self.rng.random() < 0.5:
                return Const(self.literal(self.rng))
            return self.boolean(1, scope, so_scope)
        kind = self.rng.choice(["oplus", "otimes", "sum", "prod", "guard", "bool"])
        if kind in ("oplus", "otimes"):
            node = OPlus if kind == "oplus" else OTimes
            return node(self.weighted(depth - 1, scope, so_scope), self.weighted(depth - 1, scope, so_scope))
        if kind in ("sum", "prod"):
            var = self._fresh("x")
            node = SumFO if kind == "sum" else ProdFO
            return node(var, self.weighted(depth - 1, scope + [var], so_scope))
        if kind == "guard":
            return Guard(self.boolean(depth - 1, scope, so_scope), self.weighted(depth - 1, scope, so_scope))
        return self.boolean(depth - 1, scope, so_scope)

    def weso(self, depth: int = 3, so_count: Optional[int] = None) -> Formula:
        """A sentence: a block of second-order sums over a weighted first-order body."""
        count = self.rng.randint(0, self.max_so) if so_count is None else so_count
        so_scope = [(self._fresh("X"), self.rng.randint(1, self.max_arity)) for _ in range(count)]
        body = self.weighted(depth, [], so_scope)
        for var, arity in reversed(so_scope):
            body = SumSO(var, arity, body)
        return body

    def sentence(self, depth: int = 3) -> Formula:
        """A Boolean sentence without second-order variables."""
        return self.boolean(depth, [], [])


__all__ = ["FormulaGenerator"]
