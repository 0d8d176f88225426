"""Compile a wESO sentence into a weighted Turing machine over the bit alphabet.

One machine serves every universe size. It shifts the input one cell to the
right and writes the marker ``#`` on cell 0, then finds n by trying 1, 2, ...
with a unary counter placed after the input: for each candidate it walks the
blocks of the encoding with an odometer of base-n digits and tags every cell
with the number of trailing zero coordinates of its tuple. The guessed
second-order relations and one ruler per first-order binder are appended as
further blocks; a ruler holds its element as the position of its single 1.
Atoms are read by walking a cursor through the tagged cells while a second
cursor steps through the rulers. Every sub-machine starts and ends with the
head on the marker.
"""

from __future__ import annotations

import logging
import string
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from frozendict import frozendict

from core.errors import FragmentViolation, MachineError
from core.types import Fragment, Move
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
    Iff,
    Implies,
    Less,
    Not,
    OPlus,
    OTimes,
    Or,
    ProdFO,
    RelAtom,
    SOAtom,
    SumFO,
    TrueF,
    free_vars,
    is_so_name,
    walk,
)
from logic.fragments import check_signature, ensure_fragment, so_prefix
from machines.model import Transition, WeightedTM
from semirings.base import Semiring, Value
from structures.model import Signature

logger = logging.getLogger(__name__)

MARK = "#"
BLANK = "_"
BITS = ("0", "1")
ACCEPT = "accept"
REJECT = "reject"
START = "start"
CURSORS = ("", "A", "B")

# a free variable with its arity; None marks a first-order variable
FreeVar = Tuple[str, Optional[int]]
# a resolved atom argument: ("block", index) for a ruler, ("const", element) for a numeral
Ref = Tuple[str, int]


def _pool() -> Iterator[str]:
    reserved = set(BITS) | {BLANK, MARK}
    greek = "".join(chr(code) for code in range(0x3B1, 0x3CA))
    cyrillic = "".join(chr(code) for code in range(0x430, 0x450))
    for char in string.ascii_letters + string.digits + greek + cyrillic:
        if char not in reserved:
            yield char


@dataclass(frozen=True)
class BlockCell:
    """A tagged cell of a block; ``level`` is None on the first cell of the block."""

    bit: str
    level: Optional[int]
    cursor: str = ""

    @property
    def first(self) -> bool:
        return self.level is None

    def with_bit(self, bit: str) -> "BlockCell":
        return BlockCell(bit, self.level, self.cursor)

    def with_cursor(self, cursor: str) -> "BlockCell":
        return BlockCell(self.bit, self.level, cursor)


@dataclass(frozen=True)
class CounterCell:
    """A cell of the unary universe counter carrying the odometer digits parked on it."""

    digits: FrozenSet[int]

    def toggle(self, digit: int, present: bool) -> "CounterCell":
        return CounterCell(self.digits | {digit} if present else self.digits - {digit})


Cell = Union[BlockCell, CounterCell]


class TapeAlphabet:
    """Single-character tape symbols for tagged block cells and counter cells."""

    def __init__(self, levels: int):
        self.levels = levels
        pool = _pool()
        self._symbols: Dict[Cell, str] = {}
        self._cells: Dict[str, Cell] = {}
        for bit in BITS:
            for level in [None, *range(levels)]:
                for cursor in CURSORS:
                    self._register(BlockCell(bit, level, cursor), pool)
        for size in range(levels + 1):
            for digits in combinations(range(1, levels + 1), size):
                self._register(CounterCell(frozenset(digits)), pool)

    def _register(self, cell: Cell, pool: Iterator[str]) -> None:
        try:
            char = next(pool)
        except StopIteration:
            raise MachineError(f"Arity {self.levels} needs more tape symbols than are available") from None
        self._symbols[cell] = char
        self._cells[char] = cell

    @property
    def symbols(self) -> Tuple[str, ...]:
        return (*BITS, BLANK, MARK, *self._cells)

    def symbol(self, cell: Cell) -> str:
        return self._symbols[cell]

    def cell(self, char: str) -> Optional[Cell]:
        return self._cells.get(char)

    def blocks(self) -> Iterator[Tuple[str, BlockCell]]:
        for char, cell in self._cells.items():
            if isinstance(cell, BlockCell):
                yield char, cell

    def counters(self) -> Iterator[Tuple[str, CounterCell]]:
        for char, cell in self._cells.items():
            if isinstance(cell, CounterCell):
                yield char, cell

    def is_inner(self, char: str) -> bool:
        cell = self._cells.get(char)
        return isinstance(cell, BlockCell) and not cell.first

    def is_counter(self, char: str) -> bool:
        return isinstance(self._cells.get(char), CounterCell)


class MachineBuilder:
    """Collects transitions of one machine; every continuation is a state name."""

    def __init__(self, semiring: Semiring, alphabet: TapeAlphabet):
        self.semiring = semiring
        self.alphabet = alphabet
        self.weights: Dict[Transition, Value] = {}
        self.states: List[str] = [START, ACCEPT, REJECT]
        self._counter = 0
        self._memo: Dict[tuple, str] = {}

    def fresh(self, tag: str = "q") -> str:
        self._counter += 1
        name = f"{tag}{self._counter}"
        self.states.append(name)
        return name

    def add(self, source: str, read: str, target: str, write: str, move: Move, weight: Optional[Value] = None) -> None:
        transition = Transition(source, read, target, write, move)
        if transition in self.weights:
            raise MachineError(f"Transition {transition} added twice")
        self.weights[transition] = self.semiring.one if weight is None else weight

    def stay(self, source: str, target: str, weight: Optional[Value] = None) -> None:
        self.add(source, MARK, target, MARK, Move.STAY, weight)

    def memoized(self, key: tuple, build: Callable[[], str]) -> str:
        if key not in self._memo:
            self._memo[key] = build()
        return self._memo[key]

    def _each(self, state: str, handle: Callable[[str], Optional[Tuple[str, str, Move]]]) -> None:
        for char in self.alphabet.symbols:
            outcome = handle(char)
            if outcome is not None:
                target, write, move = outcome
                self.add(state, char, target, write, move)

    # walkers

    def home(self, target: str) -> str:
        """Walk left to the marker, then enter ``target``."""

        def build() -> str:
            walker = self.fresh("h")
            self._each(
                walker,
                lambda char: (target, char, Move.STAY) if char == MARK else (walker, char, Move.LEFT),
            )
            return walker

        return self.memoized(("home", target), build)

    def goto_block(self, index: int, then: str) -> str:
        """From the marker to the first cell of block ``index``."""

        def build() -> str:
            entry = self.fresh("g")
            walkers = [self.fresh("g") for _ in range(index + 1)]
            self.add(entry, MARK, walkers[0], MARK, Move.RIGHT)
            for position, walker in enumerate(walkers):
                for char in self.alphabet.symbols:
                    cell = self.alphabet.cell(char)
                    if cell is None:
                        continue
                    if isinstance(cell, BlockCell) and cell.first:
                        if position == index:
                            self.add(walker, char, then, char, Move.STAY)
                        else:
                            self.add(walker, char, walkers[position + 1], char, Move.RIGHT)
                    else:
                        self.add(walker, char, walker, char, Move.RIGHT)
            return entry

        return self.memoized(("block", index, then), build)

    def goto_cursor(self, cursor: str, then: str) -> str:
        """From the marker to the cell carrying ``cursor``."""

        def build() -> str:
            entry = self.fresh("c")
            walker = self.fresh("c")
            self.add(entry, MARK, walker, MARK, Move.RIGHT)
            for char in self.alphabet.symbols:
                if char == BLANK:
                    continue
                cell = self.alphabet.cell(char)
                if isinstance(cell, BlockCell) and cell.cursor == cursor:
                    self.add(walker, char, then, char, Move.STAY)
                else:
                    self.add(walker, char, walker, char, Move.RIGHT)
            return entry

        return self.memoized(("cursor", cursor, then), build)

    def goto_counter(self, then: str) -> str:
        """From the marker to the first counter cell."""

        def build() -> str:
            entry = self.fresh("u")
            walker = self.fresh("u")
            self.add(entry, MARK, walker, MARK, Move.RIGHT)
            self._each(
                walker,
                lambda char: None
                if char == BLANK
                else (then, char, Move.STAY)
                if self.alphabet.is_counter(char)
                else (walker, char, Move.RIGHT),
            )
            return entry

        return self.memoized(("counter", then), build)

    def on_cells(
        self,
        state: str,
        on_block: Callable[[BlockCell], Optional[Tuple[str, BlockCell, Move]]],
        otherwise: Optional[str] = None,
    ) -> None:
        """Dispatch on block cells; every other symbol stays put and walks home into ``otherwise``."""
        for char in self.alphabet.symbols:
            cell = self.alphabet.cell(char)
            if isinstance(cell, BlockCell):
                outcome = on_block(cell)
                if outcome is not None:
                    target, written, move = outcome
                    self.add(state, char, target, self.alphabet.symbol(written), move)
                    continue
            if otherwise is not None and char != MARK:
                self.add(state, char, self.home(otherwise), char, Move.STAY)

    # rulers: one block of n cells holding a single 1

    def ruler_reset(self, ruler: int, then: str) -> str:
        def build() -> str:
            first = self.fresh("z")
            clear = self.fresh("z")
            self.on_cells(first, lambda cell: (clear, cell.with_bit("1"), Move.RIGHT) if cell.first else None)
            self.on_cells(clear, lambda cell: None if cell.first else (clear, cell.with_bit("0"), Move.RIGHT), then)
            return self.goto_block(ruler, first)

        return self.memoized(("reset", ruler, then), build)

    def ruler_next(self, ruler: int, then: str, overflow: str) -> str:
        """Move the 1 one cell right; ``overflow`` once it leaves the ruler."""

        def build() -> str:
            first = self.fresh("i")
            scan = self.fresh("i")
            bump = self.fresh("i")

            def at_first(cell: BlockCell):
                if not cell.first:
                    return None
                if cell.bit == "1":
                    return bump, cell.with_bit("0"), Move.RIGHT
                return scan, cell, Move.RIGHT

            def at_scan(cell: BlockCell):
                if cell.first:
                    return None
                if cell.bit == "1":
                    return bump, cell.with_bit("0"), Move.RIGHT
                return scan, cell, Move.RIGHT

            self.on_cells(first, at_first)
            self.on_cells(scan, at_scan)
            for char, cell in self.alphabet.blocks():
                if not cell.first:
                    self.add(bump, char, self.home(then), self.alphabet.symbol(cell.with_bit("1")), Move.STAY)
            for char in self.alphabet.symbols:
                if char != MARK and not self.alphabet.is_inner(char):
                    self.add(bump, char, self.home(overflow), char, Move.STAY)
            return self.goto_block(ruler, first)

        return self.memoized(("next", ruler, then, overflow), build)

    def ruler_choose(self, ruler: int, then: str) -> str:
        """Put the 1 on any one of the n cells; one run per element."""

        def build() -> str:
            first = self.fresh("p")
            placed = self.fresh("p")
            open_ = self.fresh("p")
            for char, cell in self.alphabet.blocks():
                if cell.first:
                    self.add(first, char, placed, self.alphabet.symbol(cell.with_bit("1")), Move.RIGHT)
                    self.add(first, char, open_, self.alphabet.symbol(cell.with_bit("0")), Move.RIGHT)
                else:
                    self.add(open_, char, placed, self.alphabet.symbol(cell.with_bit("1")), Move.RIGHT)
                    self.add(open_, char, open_, self.alphabet.symbol(cell.with_bit("0")), Move.RIGHT)
            self.on_cells(placed, lambda cell: None if cell.first else (placed, cell.with_bit("0"), Move.RIGHT), then)
            return self.goto_block(ruler, first)

        return self.memoized(("choose", ruler, then), build)

    # cursors

    def place(self, block: int, cursor: str, then: str) -> str:
        def build() -> str:
            mark = self.fresh("m")
            for char, cell in self.alphabet.blocks():
                if cell.first:
                    self.add(mark, char, self.home(then), self.alphabet.symbol(cell.with_cursor(cursor)), Move.STAY)
            return self.goto_block(block, mark)

        return self.memoized(("place", block, cursor, then), build)

    def advance(self, level: int, then: str, outside: str) -> str:
        """Move cursor A to the next cell tagged ``level``; ``outside`` when the enclosing part ends first."""

        def build() -> str:
            lift = self.fresh("a")
            seek = self.fresh("a")
            for char, cell in self.alphabet.blocks():
                if cell.cursor == "A":
                    self.add(lift, char, seek, self.alphabet.symbol(cell.with_cursor("")), Move.RIGHT)

            def at_seek(cell: BlockCell):
                if cell.first or cell.level > level:
                    return None
                if cell.level == level:
                    return self.home(then), cell.with_cursor("A"), Move.STAY
                return seek, cell, Move.RIGHT

            self.on_cells(seek, at_seek, outside)
            return self.goto_cursor("A", lift)

        return self.memoized(("advance", level, then, outside), build)

    def step_ruler(self, then_one: str, then_zero: str) -> str:
        """Look at the cell under cursor B: on a 1 drop the cursor, on a 0 move it right."""

        def build() -> str:
            test = self.fresh("s")
            shift = self.fresh("s")
            for char, cell in self.alphabet.blocks():
                if cell.cursor != "B":
                    continue
                if cell.bit == "1":
                    self.add(test, char, self.home(then_one), self.alphabet.symbol(cell.with_cursor("")), Move.STAY)
                else:
                    self.add(test, char, shift, self.alphabet.symbol(cell.with_cursor("")), Move.RIGHT)
            self.on_cells(shift, lambda cell: None if cell.first else (self.home(then_zero), cell.with_cursor("B"), Move.STAY))
            return self.goto_cursor("B", test)

        return self.memoized(("step", then_one, then_zero), build)

    def fetch(self, on_one: str, on_zero: str) -> str:
        """Read and drop cursor A."""

        def build() -> str:
            take = self.fresh("f")
            for char, cell in self.alphabet.blocks():
                if cell.cursor == "A":
                    target = on_one if cell.bit == "1" else on_zero
                    self.add(take, char, self.home(target), self.alphabet.symbol(cell.with_cursor("")), Move.STAY)
            return self.goto_cursor("A", take)

        return self.memoized(("fetch", on_one, on_zero), build)

    def in_range(self, element: int, then: str, otherwise: str) -> str:
        """``then`` when the counter has more than ``element`` cells."""

        def build() -> str:
            steps = [self.fresh("r") for _ in range(element + 1)]
            for position, state in enumerate(steps):
                for char in self.alphabet.symbols:
                    if char == MARK:
                        continue
                    if not self.alphabet.is_counter(char):
                        self.add(state, char, self.home(otherwise), char, Move.STAY)
                    elif position == element:
                        self.add(state, char, self.home(then), char, Move.STAY)
                    else:
                        self.add(state, char, steps[position + 1], char, Move.RIGHT)
            return self.goto_counter(steps[0])

        return self.memoized(("range", element, then, otherwise), build)

    def link(self, source: str, target: str) -> None:
        self.stay(source, target)


class FormulaCompiler:
    def __init__(self, semiring: Semiring, builder: MachineBuilder, first_ruler: int):
        self.semiring = semiring
        self.builder = builder
        self.rulers: List[int] = []
        self._next_ruler = first_ruler
        self._constants: Dict[str, Value] = {}

    def constant(self, literal: str) -> Value:
        if literal not in self._constants:
            self._constants[literal] = self.semiring.parse(literal)
        return self._constants[literal]

    def allocate(self) -> int:
        ruler = self._next_ruler
        self._next_ruler += 1
        self.rulers.append(ruler)
        return ruler

    @staticmethod
    def resolve(arg: Arg, env: Mapping[str, int]) -> Optional[Ref]:
        if isinstance(arg, int):
            return ("const", arg) if arg >= 0 else None
        if arg in env:
            return ("block", env[arg])
        return None

    # atoms

    def read(self, block: int, args: Sequence[Arg], env: Mapping[str, int], on_true: str, on_false: str) -> str:
        b = self.builder
        refs = [self.resolve(arg, env) for arg in args]
        if any(ref is None for ref in refs):
            return on_false
        if not refs:
            take = b.fresh("f")
            for char, cell in b.alphabet.blocks():
                if cell.first and not cell.cursor:
                    b.add(take, char, b.home(on_true if cell.bit == "1" else on_false), char, Move.STAY)
            return b.goto_block(block, take)
        arity = len(refs)
        following = b.fetch(on_true, on_false)
        for position in reversed(range(arity)):
            level = arity - 1 - position
            kind, value = refs[position]
            if kind == "const":
                for _ in range(value):
                    following = b.advance(level, following, on_false)
            else:
                check = b.fresh("k")
                b.link(check, b.step_ruler(following, b.advance(level, check, on_false)))
                following = b.place(value, "B", check)
        return b.place(block, "A", following)

    def order(self, node: Union[Eq, Less], env: Mapping[str, int], on_true: str, on_false: str) -> str:
        b = self.builder
        left, right = self.resolve(node.left, env), self.resolve(node.right, env)
        if left is None or right is None:
            return on_false
        outcome = {
            "lt": on_true if isinstance(node, Less) else on_false,
            "eq": on_false if isinstance(node, Less) else on_true,
            "gt": on_false,
        }
        if left[0] == "const" and right[0] == "const":
            verdict = "lt" if left[1] < right[1] else "eq" if left[1] == right[1] else "gt"
            return b.in_range(max(left[1], right[1]), outcome[verdict], on_false)
        if left[0] == "block" and right[0] == "block":
            if left[1] == right[1]:
                return outcome["eq"]
            return self.compare_rulers(left[1], right[1], outcome["lt"], outcome["eq"], outcome["gt"])
        if left[0] == "block":
            compare = self.compare_constant(left[1], right[1], outcome["lt"], outcome["eq"], outcome["gt"])
            return b.in_range(right[1], compare, on_false)
        compare = self.compare_constant(right[1], left[1], outcome["gt"], outcome["eq"], outcome["lt"])
        return b.in_range(left[1], compare, on_false)

    def compare_constant(self, ruler: int, element: int, below: str, equal: str, above: str) -> str:
        """Compare the ruler's element with ``element``, which is known to lie in the universe."""
        b = self.builder
        scans = [b.fresh("e") for _ in range(element + 1)]
        for position, scan in enumerate(scans):
            for char, cell in b.alphabet.blocks():
                if cell.first != (position == 0) or cell.cursor:
                    continue
                if cell.bit == "1":
                    b.add(scan, char, b.home(equal if position == element else below), char, Move.STAY)
                elif position == element:
                    b.add(scan, char, b.home(above), char, Move.STAY)
                else:
                    b.add(scan, char, scans[position + 1], char, Move.RIGHT)
        return b.goto_block(ruler, scans[0])

    def compare_rulers(self, left: int, right: int, below: str, equal: str, above: str) -> str:
        """Step cursor A on the left ruler and cursor B on the right one together until either meets its 1."""
        b = self.builder
        loop = b.fresh("l")
        peek = b.fresh("l")
        slide = b.fresh("l")
        verdicts = {("1", "1"): equal, ("1", "0"): below, ("0", "1"): above}
        for bit in BITS:
            judge = b.fresh("l")
            for char, cell in b.alphabet.blocks():
                if cell.cursor == "A" and cell.bit == bit:
                    b.add(peek, char, b.home(b.goto_cursor("B", judge)), char, Move.STAY)
            for char, cell in b.alphabet.blocks():
                if cell.cursor != "B":
                    continue
                plain = b.alphabet.symbol(cell.with_cursor(""))
                verdict = verdicts.get((bit, cell.bit))
                if verdict is None:
                    b.add(judge, char, slide, plain, Move.RIGHT)
                else:
                    b.add(judge, char, b.home(b.fetch(verdict, verdict)), plain, Move.STAY)
        b.on_cells(slide, lambda cell: None if cell.first else (b.home(self._shift_a(loop)), cell.with_cursor("B"), Move.STAY))
        b.link(loop, b.goto_cursor("A", peek))
        return b.place(left, "A", b.place(right, "B", loop))

    def _shift_a(self, then: str) -> str:
        b = self.builder

        def build() -> str:
            lift = b.fresh("l")
            land = b.fresh("l")
            for char, cell in b.alphabet.blocks():
                if cell.cursor == "A":
                    b.add(lift, char, land, b.alphabet.symbol(cell.with_cursor("")), Move.RIGHT)
            b.on_cells(land, lambda cell: None if cell.first else (b.home(then), cell.with_cursor("A"), Move.STAY))
            return b.goto_cursor("A", lift)

        return b.memoized(("shift_a", then), build)

    # formulas

    def boolean(self, node: Formula, env: Mapping[str, int], on_true: str, on_false: str) -> str:
        """Entry of a deterministic weight-one decision that ends in ``on_true`` or ``on_false``."""
        b = self.builder
        if isinstance(node, TrueF):
            return on_true
        if isinstance(node, FalseF):
            return on_false
        if isinstance(node, (Eq, Less)):
            return self.order(node, env, on_true, on_false)
        if isinstance(node, RelAtom):
            return self.read(env[f"@{node.name}"], node.args, env, on_true, on_false)
        if isinstance(node, SOAtom):
            if node.var not in env:
                return on_false
            return self.read(env[node.var], node.args, env, on_true, on_false)
        if isinstance(node, Not):
            return self.boolean(node.body, env, on_false, on_true)
        if isinstance(node, And):
            return self.boolean(node.left, env, self.boolean(node.right, env, on_true, on_false), on_false)
        if isinstance(node, Or):
            return self.boolean(node.left, env, on_true, self.boolean(node.right, env, on_true, on_false))
        if isinstance(node, Implies):
            return self.boolean(node.left, env, self.boolean(node.right, env, on_true, on_false), on_true)
        if isinstance(node, Iff):
            agree = self.boolean(node.right, env, on_true, on_false)
            differ = self.boolean(node.right, env, on_false, on_true)
            return self.boolean(node.left, env, agree, differ)
        if isinstance(node, (ExistsFO, ForallFO)):
            ruler = self.allocate()
            inner = {**env, node.var: ruler}
            following = b.fresh("n")
            if isinstance(node, ExistsFO):
                test = self.boolean(node.body, inner, on_true, following)
                b.link(following, b.ruler_next(ruler, test, on_false))
            else:
                test = self.boolean(node.body, inner, following, on_false)
                b.link(following, b.ruler_next(ruler, test, on_true))
            return b.ruler_reset(ruler, test)
        raise FragmentViolation(f"{type(node).__name__} cannot be compiled", node)

    def _branch(self, entry: str, target: str) -> None:
        hop = self.builder.fresh("o")
        self.builder.stay(entry, hop)
        self.builder.stay(hop, target)

    def weighted(self, node: Formula, env: Mapping[str, int], done: str) -> str:
        """Entry of a sub-machine whose runs into ``done`` carry the value of ``node``."""
        b = self.builder
        if not node.weighted:
            return self.boolean(node, env, done, REJECT)
        if isinstance(node, Const):
            entry = b.fresh()
            b.stay(entry, done, self.constant(node.literal))
            return entry
        if isinstance(node, OPlus):
            entry = b.fresh()
            for side in (node.left, node.right):
                self._branch(entry, self.weighted(side, env, done))
            return entry
        if isinstance(node, OTimes):
            return self.weighted(node.left, env, self.weighted(node.right, env, done))
        if isinstance(node, SumFO):
            ruler = self.allocate()
            return b.ruler_choose(ruler, self.weighted(node.body, {**env, node.var: ruler}, done))
        if isinstance(node, ProdFO):
            ruler = self.allocate()
            following = b.fresh("n")
            body = self.weighted(node.body, {**env, node.var: ruler}, following)
            b.link(following, b.ruler_next(ruler, body, done))
            return b.ruler_reset(ruler, body)
        if isinstance(node, Guard):
            return self.boolean(node.cond, env, self.weighted(node.body, env, done), done)
        raise FragmentViolation(f"{type(node).__name__} cannot be compiled inside the first-order body", node)


class TapeSetup:
    """Shift the input behind the marker, find n and append the work blocks."""

    def __init__(self, builder: MachineBuilder):
        self.builder = builder
        self.alphabet = builder.alphabet

    def _walk_right(self, state: str, stop: Callable[[str], bool], on_stop: Callable[[str], None]) -> None:
        for char in self.alphabet.symbols:
            if char == MARK:
                continue
            if stop(char):
                on_stop(char)
            elif char != BLANK:
                self.builder.add(state, char, state, char, Move.RIGHT)

    def _from_marker(self, walker: str) -> str:
        entry = self.builder.fresh("w")
        self.builder.add(entry, MARK, walker, MARK, Move.RIGHT)
        return entry

    def shift(self, then: str) -> None:
        b = self.builder
        carry = {bit: b.fresh(f"carry{bit}.") for bit in BITS}
        for bit in BITS:
            b.add(START, bit, carry[bit], MARK, Move.RIGHT)
        for held in BITS:
            for bit in BITS:
                b.add(carry[held], bit, carry[bit], held, Move.RIGHT)
            b.add(carry[held], BLANK, b.home(then), held, Move.STAY)

    def append(self, cells: Sequence[Cell], then: str) -> str:
        """Write one of ``cells`` on the first blank, one run per choice."""

        def build() -> str:
            b = self.builder
            walker = b.fresh("w")

            def write(char: str) -> None:
                for cell in cells:
                    b.add(walker, char, b.home(then), self.alphabet.symbol(cell), Move.STAY)

            self._walk_right(walker, lambda char: char == BLANK, write)
            return self._from_marker(walker)

        return self.builder.memoized(("append", tuple(cells), then), build)

    def reset_input(self, then: str) -> str:
        b = self.builder
        walker = b.fresh("w")
        for char in self.alphabet.symbols:
            cell = self.alphabet.cell(char)
            if isinstance(cell, BlockCell):
                b.add(walker, char, walker, cell.bit, Move.RIGHT)
            elif char in BITS:
                b.add(walker, char, walker, char, Move.RIGHT)
            elif isinstance(cell, CounterCell):
                b.add(walker, char, b.home(then), char, Move.STAY)
        return self._from_marker(walker)

    def mark_next(self, level: Optional[int], then: str) -> str:
        """Tag the first untagged input cell; no run survives when the input is used up."""

        def build() -> str:
            b = self.builder
            walker = b.fresh("w")
            for char in self.alphabet.symbols:
                if isinstance(self.alphabet.cell(char), BlockCell):
                    b.add(walker, char, walker, char, Move.RIGHT)
                elif char in BITS:
                    b.add(walker, char, b.home(then), self.alphabet.symbol(BlockCell(char, level)), Move.STAY)
            return self._from_marker(walker)

        return self.builder.memoized(("mark", level, then), build)

    def check_used_up(self, then: str, otherwise: str) -> str:
        b = self.builder
        walker = b.fresh("w")
        for char in self.alphabet.symbols:
            if isinstance(self.alphabet.cell(char), BlockCell):
                b.add(walker, char, walker, char, Move.RIGHT)
            elif char in BITS:
                b.add(walker, char, b.home(otherwise), char, Move.STAY)
            elif self.alphabet.is_counter(char):
                b.add(walker, char, b.home(then), char, Move.STAY)
        return self._from_marker(walker)

    def reset_digits(self, exponent: int, then: str) -> str:
        """Park every odometer digit on the first counter cell."""

        def build() -> str:
            b = self.builder
            first = b.fresh("d")
            wipe = b.fresh("d")
            parked = self.alphabet.symbol(CounterCell(frozenset(range(1, exponent + 1))))
            empty = self.alphabet.symbol(CounterCell(frozenset()))
            for char, _ in self.alphabet.counters():
                b.add(first, char, wipe, parked, Move.RIGHT)
                b.add(wipe, char, wipe, empty, Move.RIGHT)
            for char in self.alphabet.symbols:
                if char != MARK and not self.alphabet.is_counter(char):
                    b.add(wipe, char, b.home(then), char, Move.STAY)
            return b.goto_counter(first)

        return self.builder.memoized(("digits", exponent, then), build)

    def increment(self, exponent: int, on_wraps: Callable[[int], str]) -> str:
        """Add one to the odometer; ``on_wraps(w)`` receives the number of digits that wrapped to 0."""
        b = self.builder
        entries: Dict[int, str] = {}
        for digit in range(1, exponent + 1):
            seek, bump, rewind, wrap = (b.fresh("o") for _ in range(4))
            carry_on = entries[digit - 1] if digit > 1 else on_wraps(exponent)
            for char, cell in self.alphabet.counters():
                if digit in cell.digits:
                    b.add(seek, char, bump, self.alphabet.symbol(cell.toggle(digit, False)), Move.RIGHT)
                else:
                    b.add(seek, char, seek, char, Move.RIGHT)
                b.add(bump, char, b.home(on_wraps(exponent - digit)), self.alphabet.symbol(cell.toggle(digit, True)), Move.STAY)
                b.add(rewind, char, rewind, char, Move.LEFT)
                b.add(wrap, char, b.home(carry_on), self.alphabet.symbol(cell.toggle(digit, True)), Move.STAY)
            for char in self.alphabet.symbols:
                if char == MARK or self.alphabet.is_counter(char):
                    continue
                b.add(bump, char, rewind, char, Move.LEFT)
                b.add(rewind, char, wrap, char, Move.RIGHT)
            entries[digit] = b.goto_counter(seek)
        return entries[exponent]

    def sweep(self, exponent: int, first: Callable[[str], str], cell: Callable[[int, str], str], then: str) -> str:
        """Visit the n**exponent tuples of a block in order; ``cell(level, loop)`` handles all but the first."""
        b = self.builder
        if exponent == 0:
            return first(then)
        loop = b.fresh("t")
        b.link(loop, self.increment(exponent, lambda wraps: cell(wraps, loop) if wraps < exponent else then))
        return self.reset_digits(exponent, first(loop))

    def find_universe(self, exponents: Sequence[int], found: str) -> str:
        """Grow the counter until the tagged blocks use up the input exactly."""
        b = self.builder
        attempt = b.fresh("n")
        grow = self.append([CounterCell(frozenset())], attempt)
        chain = self.check_used_up(found, grow)
        for exponent in reversed(exponents):
            chain = self.sweep(exponent, lambda then: self.mark_next(None, then), self.mark_next, chain)
        b.link(attempt, self.reset_input(chain))
        return grow

    def work_block(self, exponent: int, guess: bool, then: str) -> str:
        bits = BITS if guess else ("0",)
        return self.sweep(
            exponent,
            lambda following: self.append([BlockCell(bit, None) for bit in bits], following),
            lambda level, following: self.append([BlockCell(bit, level) for bit in bits], following),
            then,
        )

    def one_hot(self, block: int, then: str) -> str:
        """Continue only when the block holds exactly one 1."""
        b = self.builder
        none, one = b.fresh("1"), b.fresh("1")
        entry = b.fresh("1")
        for char, cell in self.alphabet.blocks():
            if cell.cursor:
                continue
            if cell.first:
                b.add(entry, char, one if cell.bit == "1" else none, char, Move.RIGHT)
                b.add(one, char, b.home(then), char, Move.STAY)
            else:
                b.add(none, char, one if cell.bit == "1" else none, char, Move.RIGHT)
                if cell.bit == "0":
                    b.add(one, char, one, char, Move.RIGHT)
        for char in self.alphabet.symbols:
            if char == BLANK or self.alphabet.is_counter(char):
                b.add(one, char, b.home(then), char, Move.STAY)
        return b.goto_block(block, entry)


def free_variables(node: Formula) -> List[FreeVar]:
    """Free variables in name order with the arity of their first second-order use."""
    arities: Dict[str, int] = {}
    for sub in walk(node):
        if isinstance(sub, SOAtom):
            arities.setdefault(sub.var, len(sub.args))
    return [(name, arities.get(name) if is_so_name(name) else None) for name in sorted(free_vars(node))]


def formula_to_wtm(
    formula: Formula,
    signature: Signature,
    semiring: Semiring,
    *,
    free: Optional[Sequence[FreeVar]] = None,
) -> WeightedTM:
    """A machine M with ||M||(encode(A, free values)) = [[formula]](A) for every structure A."""
    ensure_fragment(formula, Fragment.WESO)
    check_signature(formula, signature)
    free = list(free_variables(formula) if free is None else free)
    prefix, body = so_prefix(formula)

    relations = [name for name, _ in signature]
    exponents = [arity for _, arity in signature] or [1]
    exponents += [1 if arity is None else arity for _, arity in free]
    if not any(exponents):
        raise MachineError(f"Input length does not determine the universe size over {signature}")
    alphabet = TapeAlphabet(max([1, *exponents, *(node.arity for node in prefix)]))
    b = MachineBuilder(semiring, alphabet)

    env: Dict[str, int] = {f"@{name}": index for index, name in enumerate(relations)}
    first_free = max(len(relations), 1)
    for offset, (name, _) in enumerate(free):
        env[name] = first_free + offset
    first_region = first_free + len(free)
    for offset, node in enumerate(prefix):
        env[node.var] = first_region + offset
    compiler = FormulaCompiler(semiring, b, first_region + len(prefix))
    chain = compiler.weighted(body, frozendict(env), ACCEPT)

    setup = TapeSetup(b)
    for _ in compiler.rulers:
        chain = setup.work_block(1, False, chain)
    for node in reversed(prefix):
        chain = setup.work_block(node.arity, True, chain)
    for offset, (_, arity) in enumerate(free):
        if arity is None:
            chain = setup.one_hot(first_free + offset, chain)
    setup.shift(setup.find_universe(exponents, chain))

    machine = WeightedTM(
        tuple(b.states),
        BITS,
        alphabet.symbols,
        BLANK,
        START,
        frozenset({ACCEPT}),
        b.weights,
        semiring,
    )
    logger.info(
        "Formula compiled | states=%s | transitions=%s | symbols=%s | rulers=%s",
        len(machine.states),
        len(machine.weights),
        len(machine.work_alphabet),
        len(compiler.rulers),
    )
    return machine


__all__ = [
    "ACCEPT",
    "BLANK",
    "FormulaCompiler",
    "FreeVar",
    "MARK",
    "MachineBuilder",
    "REJECT",
    "TapeAlphabet",
    "TapeSetup",
    "formula_to_wtm",
    "free_variables",
]
