from __future__ import annotations

import logging
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Dict, Hashable, Iterable, Optional, Sequence, Set, Tuple

from core.config import Limits
from core.errors import CapExceededError, ParseError
from core.parallel import parallel_map
from core.types import ClosureKind, FixpointKind
from evaluation.assignment import Assignment
from evaluation.pruning import block_assignments, so_block
from logic.ast import (
    CLOSURE_NODES,
    FIXPOINT_NODES,
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
    free_vars,
)
from logic.fragments import ensure_positive
from semirings.base import Semiring, Value
from structures.model import Relation, Row, Structure
from structures.orders import subsets_star, tuples_lex

logger = logging.getLogger(__name__)


@dataclass
class EvalStats:
    """Deterministic work counters of one evaluator."""

    so_branches: int = 0
    so_pruned: int = 0
    fixpoint_stages: int = 0
    fixpoint_evaluations: int = 0
    closure_evaluations: int = 0

    def as_dict(self) -> Dict[str, int]:
        return asdict(self)


class Evaluator:
    """Boolean satisfaction and weighted values of formulas over one structure and semiring."""

    def __init__(
        self,
        structure: Structure,
        semiring: Semiring,
        limits: Optional[Limits] = None,
        threads: int = 1,
        prune: bool = True,
    ):
        self.structure = structure
        self.semiring = semiring
        self.limits = limits or Limits()
        self.threads = max(threads, 1)
        self.prune = prune
        self.stats = EvalStats()
        self._constants: Dict[str, Value] = {}
        self._fixpoints: Dict[Tuple[int, Hashable], Tuple[Fixpoint, Relation]] = {}
        self._steps: Dict[Tuple[int, Hashable], Tuple[Closure, Dict[Row, frozenset]]] = {}
        self._positive: Set[int] = set()
        self._free: Dict[int, Tuple[Formula, frozenset]] = {}

    @property
    def universe(self) -> int:
        return self.structure.universe

    # public entry points

    def holds(self, node: Formula, assignment: Optional[Assignment] = None) -> bool:
        return self._holds(node, assignment or Assignment())

    def value(self, node: Formula, assignment: Optional[Assignment] = None) -> Value:
        """Weighted value; the outermost second-order sum or product fans out over ``threads``."""
        assignment = assignment or Assignment()
        if self.threads > 1 and isinstance(node, SumSO):
            block = so_block(node)
            leaves = list(block_assignments(self, block, assignment, self.prune))
            self.stats.so_branches += len(leaves)
            values = parallel_map(lambda leaf: self._value(block.body, leaf), leaves, self.threads)
            return self.semiring.sum(values)
        if self.threads > 1 and isinstance(node, ProdSO):
            subsets = list(subsets_star(self.universe, node.arity, self.limits.max_subsets))
            self.stats.so_branches += len(subsets)
            values = parallel_map(
                lambda rows: self._value(node.body, assignment.bind_set(node.var, rows)), subsets, self.threads
            )
            return self.semiring.product(values)
        return self._value(node, assignment)

    # Boolean semantics

    def _element(self, arg: Arg, assignment: Assignment) -> Optional[int]:
        return assignment.element(arg, self.universe)

    def _holds(self, node: Formula, a: Assignment) -> bool:
        if isinstance(node, TrueF):
            return True
        if isinstance(node, FalseF):
            return False
        if isinstance(node, (Eq, Less)):
            left = self._element(node.left, a)
            right = self._element(node.right, a)
            if left is None or right is None:
                return False
            return left == right if isinstance(node, Eq) else left < right
        if isinstance(node, RelAtom):
            row = a.row(node.args, self.universe)
            relation = self.structure.relation(node.name)
            return row is not None and row in relation
        if isinstance(node, SOAtom):
            row = a.row(node.args, self.universe)
            rows = a.second.get(node.var)
            return row is not None and rows is not None and row in rows
        if isinstance(node, Not):
            return not self._holds(node.body, a)
        if isinstance(node, And):
            return self._holds(node.left, a) and self._holds(node.right, a)
        if isinstance(node, Or):
            return self._holds(node.left, a) or self._holds(node.right, a)
        if isinstance(node, Implies):
            return not self._holds(node.left, a) or self._holds(node.right, a)
        if isinstance(node, Iff):
            return self._holds(node.left, a) == self._holds(node.right, a)
        if isinstance(node, ExistsFO):
            return any(self._holds(node.body, a.bind(node.var, e)) for e in self.structure.elements)
        if isinstance(node, ForallFO):
            return all(self._holds(node.body, a.bind(node.var, e)) for e in self.structure.elements)
        if isinstance(node, ExistsSO):
            return any(
                self._holds(node.body, a.bind_set(node.var, rows))
                for rows in subsets_star(self.universe, node.arity, self.limits.max_subsets)
            )
        if isinstance(node, Closure):
            return self.closure(node, a)
        if isinstance(node, Fixpoint):
            row = a.row(node.args, self.universe)
            return row is not None and row in self.fixpoint(node, a)
        raise ParseError(f"{type(node).__name__} is weighted and cannot be read as a condition")

    # weighted semantics

    def constant(self, literal: str) -> Value:
        if literal not in self._constants:
            self._constants[literal] = self.semiring.parse(literal)
        return self._constants[literal]

    def _value(self, node: Formula, a: Assignment) -> Value:
        s = self.semiring
        if isinstance(node, Const):
            return self.constant(node.literal)
        if isinstance(node, OPlus):
            return s.add(self._value(node.left, a), self._value(node.right, a))
        if isinstance(node, OTimes):
            return s.mul(self._value(node.left, a), self._value(node.right, a))
        if isinstance(node, SumFO):
            return s.sum(self._value(node.body, a.bind(node.var, e)) for e in self.structure.elements)
        if isinstance(node, ProdFO):
            return s.product(self._value(node.body, a.bind(node.var, e)) for e in self.structure.elements)
        if isinstance(node, SumSO):
            return self._so_sum(node, a)
        if isinstance(node, ProdSO):
            return s.product(self._so_branches(node.var, node.arity, node.body, a))
        if isinstance(node, Guard):
            return self._value(node.body, a) if self._holds(node.cond, a) else s.one
        return s.from_bool(self._holds(node, a))

    def _so_branches(self, var: str, arity: int, body: Formula, a: Assignment) -> Iterable[Value]:
        for rows in subsets_star(self.universe, arity, self.limits.max_subsets):
            self.stats.so_branches += 1
            yield self._value(body, a.bind_set(var, rows))

    def _so_sum(self, node: SumSO, a: Assignment) -> Value:
        block = so_block(node)
        total = self.semiring.zero
        for leaf in block_assignments(self, block, a, self.prune):
            self.stats.so_branches += 1
            total = self.semiring.add(total, self._value(block.body, leaf))
        return total

    # fixed points

    def free_in(self, node: Formula) -> frozenset:
        cached = self._free.get(id(node))
        if cached is None:
            cached = (node, free_vars(node))
            self._free[id(node)] = cached
        return cached[1]

    def _environment(self, names: Iterable[str], a: Assignment) -> Hashable:
        return tuple(sorted((name, a.first.get(name), a.second.get(name)) for name in names))

    def update_operator(self, node: Fixpoint, relation: Relation, assignment: Optional[Assignment] = None) -> Relation:
        """F(R): the tuples satisfying the body when the bound relation is read as ``relation``."""
        a = (assignment or Assignment()).bind_set(node.rel, relation)
        return frozenset(
            row
            for row in tuples_lex(self.universe, len(node.variables))
            if self._holds(node.body, a.bind_many(node.variables, row))
        )

    def _stage_cap(self, arity: int) -> int:
        if self.limits.max_stages is not None:
            return self.limits.max_stages
        return 2 ** (self.universe**arity) + 1

    def fixpoint(self, node: Fixpoint, assignment: Optional[Assignment] = None) -> Relation:
        a = assignment or Assignment()
        inner = self.free_in(node.body) - {node.rel} - set(node.variables)
        key = (id(node), self._environment(inner, a))
        cached = self._fixpoints.get(key)
        if cached is not None:
            return cached[1]
        if node.kind in (FixpointKind.LFP, FixpointKind.GFP) and id(node) not in self._positive:
            ensure_positive(node)
            self._positive.add(id(node))
        self.stats.fixpoint_evaluations += 1
        relation = self._iterate(node, a)
        self._fixpoints[key] = (node, relation)
        return relation

    def _iterate(self, node: Fixpoint, a: Assignment) -> Relation:
        arity = len(node.variables)
        cap = self._stage_cap(arity)
        if node.kind is FixpointKind.GFP:
            current: Relation = frozenset(tuples_lex(self.universe, arity))
        else:
            current = frozenset()
        seen = {current}
        for stage in range(1, cap + 1):
            self.stats.fixpoint_stages += 1
            following = self.update_operator(node, current, a)
            if node.kind is FixpointKind.IFP:
                following = current | following
            if following == current:
                logger.debug(
                    "Fixpoint reached | kind=%s | rel=%s | stages=%s | size=%s",
                    node.kind.value,
                    node.rel,
                    stage,
                    len(current),
                )
                return current
            if node.kind is FixpointKind.PFP:
                if following in seen:
                    logger.debug("Partial fixpoint cycles | rel=%s | stages=%s", node.rel, stage)
                    return frozenset()
                seen.add(following)
            current = following
        raise CapExceededError(f"{node.kind.value} {node.rel} stages", cap + 1, cap)

    # closures

    def _successors(self, node: Closure, a: Assignment) -> Dict[Row, frozenset]:
        inner = self.free_in(node.body) - set(node.sources) - set(node.targets)
        key = (id(node), self._environment(inner, a))
        cached = self._steps.get(key)
        if cached is not None:
            return cached[1]
        self.stats.closure_evaluations += 1
        width = len(node.sources)
        names = tuple(node.sources) + tuple(node.targets)
        rows = list(tuples_lex(self.universe, width))
        step: Dict[Row, frozenset] = {}
        for source in rows:
            targets = frozenset(
                target for target in rows if self._holds(node.body, a.bind_many(names, source + target))
            )
            if node.kind is ClosureKind.DTC and len(targets) != 1:
                targets = frozenset()
            step[source] = targets
        self._steps[key] = (node, step)
        return step

    def reachable(self, node: Closure, start: Row, assignment: Optional[Assignment] = None) -> frozenset:
        """Tuples reached from ``start`` in one or more steps."""
        step = self._successors(node, assignment or Assignment())
        found: Set[Row] = set()
        queue = deque(step.get(start, ()))
        while queue:
            row = queue.popleft()
            if row in found:
                continue
            found.add(row)
            queue.extend(step.get(row, ()))
        return frozenset(found)

    def closure(self, node: Closure, assignment: Optional[Assignment] = None) -> bool:
        a = assignment or Assignment()
        start = a.row(node.start, self.universe)
        end = a.row(node.end, self.universe)
        if start is None or end is None:
            return False
        return end in self.reachable(node, start, a)

    def closure_relation(self, node: Closure, assignment: Optional[Assignment] = None) -> frozenset:
        """All (start, end) pairs related by the closure, as concatenated tuples."""
        a = assignment or Assignment()
        pairs = set()
        for start in tuples_lex(self.universe, len(node.sources)):
            pairs.update(start + end for end in self.reachable(node, start, a))
        return frozenset(pairs)


@dataclass(frozen=True)
class EvalContext:
    structure: Structure
    semiring: Semiring
    assignment: Assignment = field(default_factory=Assignment)
    limits: Limits = field(default_factory=Limits)
    threads: int = 1

    def __post_init__(self) -> None:
        if self.limits.max_subsets < 1:
            raise ValueError("Limit max_subsets must be positive")
        self.assignment.validate(self.structure.universe)

    def evaluator(self, prune: bool = True) -> Evaluator:
        return Evaluator(self.structure, self.semiring, self.limits, self.threads, prune)


def eval_bool(node: Formula, ctx: EvalContext) -> bool:
    return ctx.evaluator().holds(node, ctx.assignment)


def eval_weighted(node: Formula, ctx: EvalContext) -> Value:
    return ctx.evaluator().value(node, ctx.assignment)


def eval_fixpoint(
    kind: FixpointKind, rel: str, variables: Sequence[str], body: Formula, ctx: EvalContext
) -> Relation:
    node = FIXPOINT_NODES[kind](rel, tuple(variables), body, tuple(variables))
    return ctx.evaluator().fixpoint(node, ctx.assignment)


def eval_closure(
    kind: ClosureKind,
    sources: Sequence[str],
    targets: Sequence[str],
    body: Formula,
    start: Sequence[Arg],
    end: Sequence[Arg],
    ctx: EvalContext,
) -> bool:
    node = CLOSURE_NODES[kind](tuple(sources), tuple(targets), body, tuple(start), tuple(end))
    return ctx.evaluator().closure(node, ctx.assignment)


__all__ = [
    "EvalContext",
    "EvalStats",
    "Evaluator",
    "eval_bool",
    "eval_closure",
    "eval_fixpoint",
    "eval_weighted",
]
