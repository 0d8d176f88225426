"""Describe the runs of a weighted machine by a wESO sentence.

Time points and tape cells are k-tuples of elements ordered lexicographically,
so a structure of size n allows n^k - 1 steps over n^k cells. The machine is
padded first: a run that accepts early idles in its accepting state until the
last time point. Second-order variables ``T<i>(t, p)`` (one per tape symbol) and
``H<j>(t, p)`` (one per state) describe a whole run; ``psi`` states that they
do, ``chi`` multiplies the transition weights along it in time order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from core.errors import MachineError, SemiringFlagsError
from core.types import Move
from logic.ast import (
    And,
    Const,
    Eq,
    ExistsFO,
    ForallFO,
    Formula,
    Guard,
    Implies,
    Not,
    OPlus,
    OTimes,
    Or,
    RelAtom,
    SOAtom,
    SumSO,
)
from logic.builders import (
    NameSupply,
    OrderAtom,
    all_bottom,
    conjoin,
    disjoin,
    exists_all,
    forall_all,
    has_successor,
    natural_less,
    offset_chain,
    prod_all,
    relation_less,
    tuple_successor,
)
from machines.model import Transition, WeightedTM
from machines.transforms import pad_machine
from semirings.base import ZERO_LITERAL
from structures.model import Signature

logger = logging.getLogger(__name__)

ORDER_VAR = "L"


@dataclass(frozen=True)
class DecompiledFormula:
    """The sentence together with its Boolean run description and weighted body."""

    formula: Formula
    psi: Formula
    chi: Formula
    so_vars: Tuple[Tuple[str, int], ...]
    symbols: Dict[str, str]
    states: Dict[str, str]
    machine: WeightedTM
    psi_parts: Tuple[Tuple[str, Formula], ...] = ()

    def without(self, part: str) -> Formula:
        """The ordered sentence with the named conjunct of psi left out."""
        names = [name for name, _ in self.psi_parts]
        if part not in names:
            raise KeyError(f"No conjunct {part!r}; psi has {names}")
        kept = conjoin([conjunct for name, conjunct in self.psi_parts if name != part])
        body: Formula = OTimes(kept, self.chi.right)
        for var, arity in reversed(self.so_vars):
            body = SumSO(var, arity, body)
        return body

    def run_count_formula(self) -> Formula:
        """Sum over the run variables of psi alone; over the naturals it counts the runs psi admits."""
        body: Formula = self.psi
        for var, arity in reversed(self.so_vars):
            body = SumSO(var, arity, body)
        return body


class _RunDescription:
    def __init__(self, machine: WeightedTM, signature: Signature, k: int, less: OrderAtom):
        self.machine = machine
        self.signature = signature
        self.k = k
        self.less = less
        self.names = NameSupply("v")
        self.symbols = {symbol: f"T{i}" for i, symbol in enumerate(sorted(machine.work_alphabet))}
        self.states = {state: f"H{j}" for j, state in enumerate(sorted(machine.states))}

    # atoms over (time, position)

    def tape(self, symbol: str, time: Sequence[str], cell: Sequence[str]) -> Formula:
        return SOAtom(self.symbols[symbol], tuple(time) + tuple(cell))

    def head(self, state: str, time: Sequence[str], cell: Sequence[str]) -> Formula:
        return SOAtom(self.states[state], tuple(time) + tuple(cell))

    def tuple(self) -> Tuple[str, ...]:
        return self.names.tuple(self.k)

    def succ(self, left: Sequence[str], right: Sequence[str]) -> Formula:
        return tuple_successor(left, right, self.names, self.less)

    def equal(self, left: Sequence[str], right: Sequence[str]) -> Formula:
        return conjoin([Eq(a, b) for a, b in zip(left, right)])

    # clauses

    def one_symbol_per_cell(self) -> Formula:
        t, p = self.tuple(), self.tuple()
        symbols = sorted(self.symbols)
        some = disjoin([self.tape(a, t, p) for a in symbols])
        exclusive = [
            Not(And(self.tape(a, t, p), self.tape(b, t, p)))
            for i, a in enumerate(symbols)
            for b in symbols[i + 1 :]
        ]
        return forall_all(t + p, conjoin([some] + exclusive))

    def one_head_per_time(self) -> Formula:
        t, p, r = self.tuple(), self.tuple(), self.tuple()
        states = sorted(self.states)
        some = forall_all(t, exists_all(p, disjoin([self.head(q, t, p) for q in states])))
        exclusive: List[Formula] = [
            Not(And(self.head(q, t, p), self.head(other, t, r)))
            for q in states
            for other in states
            if q != other
        ]
        exclusive.extend(
            Implies(And(self.head(q, t, p), self.head(q, t, r)), self.equal(p, r)) for q in states
        )
        return And(some, forall_all(t + p + r, conjoin(exclusive)))

    def accepts(self) -> Formula:
        t, p = self.tuple(), self.tuple()
        return exists_all(t + p, disjoin([self.head(q, t, p) for q in sorted(self.machine.final_states)]))

    def step(self, transition: Transition, later: Sequence[str], cell: Sequence[str]) -> Formula:
        """The cell holds the written symbol at ``later`` and the head moved as the transition says."""
        written = self.tape(transition.write, later, cell)
        if transition.move is Move.STAY:
            return And(written, self.head(transition.target, later, cell))
        moved = self.tuple()
        if transition.move is Move.RIGHT:
            adjacent = self.succ(cell, moved)
        else:
            adjacent = self.succ(moved, cell)
        return And(written, exists_all(moved, And(adjacent, self.head(transition.target, later, moved))))

    def respects_transitions(self) -> Formula:
        t, s, p, r = self.tuple(), self.tuple(), self.tuple(), self.tuple()
        cases = []
        for state in sorted(self.states):
            for symbol in sorted(self.symbols):
                options = self.machine.outgoing(state, symbol)
                scanned = And(self.head(state, t, p), self.tape(symbol, t, p))
                cases.append(Implies(scanned, disjoin([self.step(e, s, p) for e, _ in options])))
        moves = forall_all(p, conjoin(cases))
        idle = Not(disjoin([self.head(q, t, r) for q in sorted(self.states)]))
        kept = conjoin([Implies(self.tape(a, t, r), self.tape(a, s, r)) for a in sorted(self.symbols)])
        frame = forall_all(r, Implies(idle, kept))
        return forall_all(t + s, Implies(self.succ(t, s), And(moves, frame)))

    def _blocks(self) -> List[Tuple[str, int]]:
        # the empty signature encodes like one empty unary relation
        return list(self.signature.symbols) or [("", 1)]

    def initial_tape(self) -> Formula:
        t, p, q = self.tuple(), self.tuple(), self.tuple()
        head = exists_all(p, And(all_bottom(p, self.names, self.less), self.head(self.machine.initial, t, p)))
        blocks = self._blocks()
        parts: List[Formula] = [head]
        covered: List[Formula] = []
        powers: List[int] = []
        for name, arity in blocks:
            args = self.names.tuple(arity)
            cell = self.tuple()
            placed = offset_chain(args, cell, powers, self.names, self.less)
            if name:
                bit: Formula = Or(
                    And(RelAtom(name, args), self.tape("1", t, cell)),
                    And(Not(RelAtom(name, args)), self.tape("0", t, cell)),
                )
            else:
                bit = self.tape("0", t, cell)
            parts.append(forall_all(args, exists_all(cell, And(placed, bit))))
            shadow = self.names.tuple(arity)
            covered.append(exists_all(shadow, offset_chain(shadow, q, powers, self.names, self.less)))
            powers = powers + [arity]
        parts.append(forall_all(q, Implies(Not(disjoin(covered)), self.tape(self.machine.blank, t, q))))
        return forall_all(t, Implies(all_bottom(t, self.names, self.less), conjoin(parts)))

    def psi_parts(self) -> Tuple[Tuple[str, Formula], ...]:
        return (
            ("one_symbol_per_cell", self.one_symbol_per_cell()),
            ("one_head_per_time", self.one_head_per_time()),
            ("accepts", self.accepts()),
            ("respects_transitions", self.respects_transitions()),
            ("initial_tape", self.initial_tape()),
        )

    def fired(self, transition: Transition, time: Sequence[str]) -> Formula:
        later, cell = self.tuple(), self.tuple()
        scanned = And(self.head(transition.source, time, cell), self.tape(transition.read, time, cell))
        return exists_all(
            later,
            And(self.succ(time, later), exists_all(cell, And(scanned, self.step(transition, later, cell)))),
        )

    def weights(self) -> Formula:
        t = self.tuple()
        semiring = self.machine.semiring
        terms: List[Formula] = [
            OTimes(self.fired(e, t), Const(semiring.format(weight)))
            for e, weight in sorted(self.machine.weights.items())
        ]
        total: Formula = terms[0] if terms else Const(ZERO_LITERAL)
        for term in terms[1:]:
            total = OPlus(total, term)
        return prod_all(t, Guard(has_successor(t, self.names, self.less), total))


def _check_shape(machine: WeightedTM, signature: Signature, k: int) -> None:
    if k < 1:
        raise MachineError(f"k must be positive, got {k}")
    if k < signature.max_arity:
        raise MachineError(f"k={k} is smaller than the largest arity {signature.max_arity}")
    for bit in ("0", "1"):
        if bit not in machine.input_alphabet:
            raise MachineError(f"The machine must read the bit {bit!r} to take encodings as input")


def _order_axioms(less: OrderAtom, names: NameSupply) -> Formula:
    x, y, z = names.tuple(3)
    irreflexive = ForallFO(x, Not(less(x, x)))
    transitive = forall_all((x, y, z), Implies(And(less(x, y), less(y, z)), less(x, z)))
    total = forall_all((x, y), Implies(Not(Eq(x, y)), Or(less(x, y), less(y, x))))
    return conjoin([irreflexive, transitive, total])


def decompile_parts(machine: WeightedTM, signature: Signature, k: int, *, unordered: bool = False) -> DecompiledFormula:
    _check_shape(machine, signature, k)
    semiring = machine.semiring
    if unordered and not (semiring.is_idempotent and semiring.is_commutative):
        raise SemiringFlagsError(
            f"Summing over all orders needs an idempotent commutative semiring, {semiring.name} is not"
        )
    padded = pad_machine(machine)
    less = relation_less(ORDER_VAR) if unordered else natural_less
    runs = _RunDescription(padded, signature, k, less)
    psi_parts = runs.psi_parts()
    psi = conjoin([conjunct for _, conjunct in psi_parts])
    chi: Formula = OTimes(psi, runs.weights())
    so_vars = [(name, 2 * k) for name in list(runs.symbols.values()) + list(runs.states.values())]
    body = chi
    if unordered:
        body = OTimes(_order_axioms(less, runs.names), chi)
    formula = body
    for var, arity in reversed(so_vars):
        formula = SumSO(var, arity, formula)
    if unordered:
        formula = SumSO(ORDER_VAR, 2, formula)
    logger.info(
        "Machine decompiled | states=%s | symbols=%s | k=%s | unordered=%s",
        len(padded.states),
        len(padded.work_alphabet),
        k,
        unordered,
    )
    return DecompiledFormula(
        formula,
        psi,
        chi,
        tuple(so_vars),
        dict(runs.symbols),
        dict(runs.states),
        padded,
        psi_parts,
    )


def wtm_to_weso(machine: WeightedTM, signature: Signature, k: int) -> Formula:
    """A wESO sentence whose value on A is the machine's behavior on encode(A), runs bounded by n^k - 1 steps."""
    return decompile_parts(machine, signature, k).formula


def wtm_to_weso_unordered(machine: WeightedTM, signature: Signature, k: int) -> Formula:
    """As ``wtm_to_weso`` with the order replaced by a summed binary relation L."""
    return decompile_parts(machine, signature, k, unordered=True).formula


__all__ = [
    "DecompiledFormula",
    "ORDER_VAR",
    "decompile_parts",
    "wtm_to_weso",
    "wtm_to_weso_unordered",
]
