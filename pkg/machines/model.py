from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

from frozendict import frozendict

from core.errors import MachineError
from core.types import Move
from semirings.base import Semiring, Value

DEFAULT_BLANK = "_"


@dataclass(frozen=True, order=True)
class Transition:
    """(p, a, q, b, d): in state p reading a, write b, move d and enter q."""

    source: str
    read: str
    target: str
    write: str
    move: Move

    def __post_init__(self) -> None:
        object.__setattr__(self, "move", Move(self.move))

    def __str__(self) -> str:
        return f"({self.source},{self.read},{self.target},{self.write},{int(self.move):+d})"


@dataclass(frozen=True)
class WeightedTM:
    """A single-tape weighted Turing machine on a one-way tape starting at cell 0.

    ``tracked`` holds the states whose exact-length runs count once the machine
    was padded; it is empty for ordinary machines.
    """

    states: Tuple[str, ...]
    input_alphabet: Tuple[str, ...]
    work_alphabet: Tuple[str, ...]
    blank: str
    initial: str
    accepting: FrozenSet[str]
    weights: Mapping[Transition, Value]
    semiring: Semiring
    tracked: FrozenSet[str] = frozenset()
    _index: Mapping[Tuple[str, str], Tuple[Tuple[Transition, Value], ...]] = field(
        default=frozendict(), init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "input_alphabet", tuple(self.input_alphabet))
        object.__setattr__(self, "work_alphabet", tuple(self.work_alphabet))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "tracked", frozenset(self.tracked))
        object.__setattr__(self, "weights", frozendict(self.weights))
        self._validate()
        index: Dict[Tuple[str, str], List[Tuple[Transition, Value]]] = {}
        for transition in sorted(self.weights):
            index.setdefault((transition.source, transition.read), []).append(
                (transition, self.weights[transition])
            )
        object.__setattr__(self, "_index", frozendict({key: tuple(value) for key, value in index.items()}))

    def _validate(self) -> None:
        states = set(self.states)
        gamma = set(self.work_alphabet)
        if len(states) != len(self.states):
            raise MachineError("Duplicate state names")
        for symbol in self.work_alphabet:
            if len(symbol) != 1:
                raise MachineError(f"Tape symbols must be single characters, got {symbol!r}")
        if self.blank not in gamma:
            raise MachineError(f"Blank {self.blank!r} is not a work symbol")
        if self.blank in self.input_alphabet:
            raise MachineError("The blank may not be an input symbol")
        if not set(self.input_alphabet) <= gamma:
            raise MachineError("The input alphabet must be contained in the work alphabet")
        if self.initial not in states:
            raise MachineError(f"Initial state {self.initial} is not a state")
        if not self.accepting <= states or not self.tracked <= states:
            raise MachineError("Accepting and tracked states must be states")
        for transition, weight in self.weights.items():
            if transition.source not in states or transition.target not in states:
                raise MachineError(f"Transition {transition} uses an unknown state")
            if transition.read not in gamma or transition.write not in gamma:
                raise MachineError(f"Transition {transition} uses a symbol outside the work alphabet")
            if transition.source in self.accepting:
                raise MachineError(f"Transition {transition} leaves accepting state {transition.source}")
            if not self.semiring.contains(weight):
                raise MachineError(f"Weight of {transition} lies outside the {self.semiring.name} carrier")

    @property
    def transitions(self) -> Tuple[Transition, ...]:
        return tuple(sorted(self.weights))

    @property
    def final_states(self) -> FrozenSet[str]:
        """States a counted run ends in: the tracked ones after padding, otherwise the accepting ones."""
        return self.tracked or self.accepting

    def outgoing(self, state: str, symbol: str) -> Tuple[Tuple[Transition, Value], ...]:
        return self._index.get((state, symbol), ())

    def weight(self, transition: Transition) -> Value:
        return self.weights[transition]

    def replace_weights(self, weights: Mapping[Transition, Value]) -> "WeightedTM":
        return WeightedTM(
            self.states,
            self.input_alphabet,
            self.work_alphabet,
            self.blank,
            self.initial,
            self.accepting,
            weights,
            self.semiring,
            self.tracked,
        )

    def describe(self) -> Dict[str, object]:
        return {
            "states": len(self.states),
            "transitions": len(self.weights),
            "work_alphabet": "".join(self.work_alphabet),
            "semiring": self.semiring.name,
        }


@dataclass(frozen=True)
class Configuration:
    """State, tape contents without trailing blanks, and head position."""

    state: str
    tape: Tuple[str, ...]
    head: int

    def scanned(self, blank: str) -> str:
        return self.tape[self.head] if self.head < len(self.tape) else blank

    def cells(self) -> int:
        return max(len(self.tape), self.head + 1)

    def __str__(self) -> str:
        return f"{self.state}:{''.join(self.tape)}@{self.head}"


def normalize_tape(cells: Iterable[str], blank: str) -> Tuple[str, ...]:
    tape = list(cells)
    while tape and tape[-1] == blank:
        tape.pop()
    return tuple(tape)


@dataclass(frozen=True)
class Computation:
    """C1 e1 C2 ... en Cn+1."""

    configurations: Tuple[Configuration, ...]
    transitions: Tuple[Transition, ...] = ()

    def __post_init__(self) -> None:
        if len(self.configurations) != len(self.transitions) + 1:
            raise MachineError("A computation alternates configurations and transitions")

    @property
    def length(self) -> int:
        return len(self.transitions)

    @property
    def last(self) -> Configuration:
        return self.configurations[-1]

    def weight(self, machine: WeightedTM) -> Value:
        """Product of the transition weights, left to right."""
        return machine.semiring.product(machine.weight(transition) for transition in self.transitions)


@dataclass(frozen=True)
class SRTM:
    """A machine whose transitions form a finite multiset of (p, a, q, b, d, s) rules."""

    states: Tuple[str, ...]
    input_alphabet: Tuple[str, ...]
    work_alphabet: Tuple[str, ...]
    blank: str
    initial: str
    accepting: FrozenSet[str]
    rules: Tuple[Tuple[Transition, Value], ...]
    semiring: Semiring

    @classmethod
    def from_rules(
        cls,
        semiring: Semiring,
        rules: Sequence[Tuple[str, str, str, str, int, Value]],
        *,
        states: Sequence[str],
        input_alphabet: Sequence[str],
        work_alphabet: Sequence[str],
        initial: str,
        accepting: Iterable[str],
        blank: str = DEFAULT_BLANK,
    ) -> "SRTM":
        built = tuple((Transition(p, a, q, b, Move(d)), weight) for p, a, q, b, d, weight in rules)
        return cls(
            tuple(states), tuple(input_alphabet), tuple(work_alphabet), blank, initial, frozenset(accepting), built, semiring
        )


def build_machine(
    semiring: Semiring,
    transitions: Sequence[Tuple[str, str, str, str, int, Value]],
    *,
    initial: str,
    accepting: Iterable[str],
    input_alphabet: Sequence[str] = ("0", "1"),
    work_alphabet: Sequence[str] = ("0", "1", DEFAULT_BLANK),
    blank: str = DEFAULT_BLANK,
    states: Sequence[str] = (),
) -> WeightedTM:
    """Machine from ``(p, a, q, b, d, weight)`` rows; states default to those mentioned."""
    weights: Dict[Transition, Value] = {}
    seen = list(states)
    for p, a, q, b, d, weight in transitions:
        transition = Transition(p, a, q, b, Move(d))
        if transition in weights:
            raise MachineError(f"Duplicate transition {transition}")
        weights[transition] = weight
        for state in (p, q):
            if state not in seen:
                seen.append(state)
    for state in [initial, *accepting]:
        if state not in seen:
            seen.append(state)
    return WeightedTM(
        tuple(seen),
        tuple(input_alphabet),
        tuple(work_alphabet),
        blank,
        initial,
        frozenset(accepting),
        weights,
        semiring,
    )


__all__ = [
    "Computation",
    "Configuration",
    "DEFAULT_BLANK",
    "SRTM",
    "Transition",
    "WeightedTM",
    "build_machine",
    "normalize_tape",
]
