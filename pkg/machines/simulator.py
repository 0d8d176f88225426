from __future__ import annotations

import logging
from typing import Dict, Iterator, List, Sequence, Tuple

from core.errors import InapplicableTransitionError, LiveBranchesError, MachineError
from core.types import Move
from machines.model import Computation, Configuration, Transition, WeightedTM, normalize_tape
from semirings.base import Value

logger = logging.getLogger(__name__)

Frontier = Dict[Configuration, Value]


def initial_configuration(machine: WeightedTM, word: Sequence[str]) -> Configuration:
    for symbol in word:
        if symbol not in machine.input_alphabet:
            raise MachineError(f"Input symbol {symbol!r} is not in the input alphabet")
    return Configuration(machine.initial, normalize_tape(word, machine.blank), 0)


def step(config: Configuration, transition: Transition, blank: str) -> Configuration:
    """The successor configuration; a left move at cell 0 is not applicable."""
    if config.state != transition.source or config.scanned(blank) != transition.read:
        raise InapplicableTransitionError(f"{transition} does not apply to {config}")
    head = config.head + int(transition.move)
    if head < 0:
        raise InapplicableTransitionError(f"{transition} moves left of cell 0")
    cells = list(config.tape)
    if config.head >= len(cells):
        cells.extend([blank] * (config.head + 1 - len(cells)))
    cells[config.head] = transition.write
    return Configuration(transition.target, normalize_tape(cells, blank), head)


def successors(machine: WeightedTM, config: Configuration) -> List[Tuple[Transition, Value, Configuration]]:
    moves = []
    for transition, weight in machine.outgoing(config.state, config.scanned(machine.blank)):
        if transition.move is Move.LEFT and config.head == 0:
            continue
        moves.append((transition, weight, step(config, transition, machine.blank)))
    return moves


def _report_live(live: int, max_steps: int, strict: bool) -> None:
    if not live:
        return
    if strict:
        raise LiveBranchesError(live, max_steps)
    logger.warning("Enumeration truncated | live=%s | max_steps=%s", live, max_steps)


def _paths(machine: WeightedTM, word: Sequence[str], max_steps: int) -> Iterator[Tuple[List[Configuration], List[Transition], bool]]:
    """Depth-first over every run prefix; the flag marks prefixes still running at the bound."""
    if max_steps < 0:
        raise MachineError(f"max_steps must be non-negative, got {max_steps}")
    start = initial_configuration(machine, word)
    stack: List[Tuple[List[Configuration], List[Transition]]] = [([start], [])]
    while stack:
        configs, transitions = stack.pop()
        moves = successors(machine, configs[-1])
        if len(transitions) == max_steps or not moves:
            yield configs, transitions, bool(moves)
            continue
        for transition, _, following in reversed(moves):
            stack.append((configs + [following], transitions + [transition]))


def computations(
    machine: WeightedTM, word: Sequence[str], max_steps: int, strict: bool = False
) -> List[Computation]:
    """Accepting computations of length at most ``max_steps``."""
    found = []
    live = 0
    for configs, transitions, running in _paths(machine, word, max_steps):
        if configs[-1].state in machine.accepting:
            found.append(Computation(tuple(configs), tuple(transitions)))
        elif running:
            live += 1
    _report_live(live, max_steps, strict)
    return found


def _sweep(machine: WeightedTM, word: Sequence[str], max_steps: int) -> Iterator[Frontier]:
    """Frontiers at times 0, 1, ...; equal configurations merge by adding their prefix weights."""
    if max_steps < 0:
        raise MachineError(f"max_steps must be non-negative, got {max_steps}")
    semiring = machine.semiring
    frontier: Frontier = {initial_configuration(machine, word): semiring.one}
    for time in range(max_steps + 1):
        yield frontier
        if time == max_steps:
            return
        following: Frontier = {}
        for config, value in frontier.items():
            for _, weight, successor in successors(machine, config):
                extended = semiring.mul(value, weight)
                if successor in following:
                    following[successor] = semiring.add(following[successor], extended)
                else:
                    following[successor] = extended
        if not following:
            return
        frontier = following


def _live_count(machine: WeightedTM, frontier: Frontier) -> int:
    return sum(1 for config in frontier if successors(machine, config))


def behavior(machine: WeightedTM, word: Sequence[str], max_steps: int, strict: bool = False) -> Value:
    """Sum of the weights of all accepting computations of length at most ``max_steps``."""
    semiring = machine.semiring
    total = semiring.zero
    frontier: Frontier = {}
    time = 0
    for time, frontier in enumerate(_sweep(machine, word, max_steps)):
        for config, value in frontier.items():
            if config.state in machine.accepting:
                total = semiring.add(total, value)
    if time == max_steps:
        _report_live(_live_count(machine, frontier), max_steps, strict)
    return total


def time_meter(machine: WeightedTM, word: Sequence[str], max_steps: int, strict: bool = False) -> int:
    """Length of a longest computation, accepting or not."""
    longest = 0
    frontier: Frontier = {}
    for longest, frontier in enumerate(_sweep(machine, word, max_steps)):
        pass
    if longest == max_steps:
        _report_live(_live_count(machine, frontier), max_steps, strict)
    return longest


def space_meter(machine: WeightedTM, word: Sequence[str], max_steps: int, strict: bool = False) -> int:
    """Cells from 0 to the rightmost one any computation visits, counting the input."""
    cells = max(len(word), 1)
    frontier: Frontier = {}
    time = 0
    for time, frontier in enumerate(_sweep(machine, word, max_steps)):
        cells = max([cells] + [config.head + 1 for config in frontier])
    if time == max_steps:
        _report_live(_live_count(machine, frontier), max_steps, strict)
    return cells


def exact_length_behavior(machine: WeightedTM, word: Sequence[str], length: int) -> Value:
    """Sum over computations of exactly ``length`` steps ending in a final state."""
    semiring = machine.semiring
    total = semiring.zero
    for time, frontier in enumerate(_sweep(machine, word, length)):
        if time == length:
            for config, value in frontier.items():
                if config.state in machine.final_states:
                    total = semiring.add(total, value)
    return total


def exact_length_computations(machine: WeightedTM, word: Sequence[str], length: int) -> List[Computation]:
    return [
        Computation(tuple(configs), tuple(transitions))
        for configs, transitions, _ in _paths(machine, word, length)
        if len(transitions) == length and configs[-1].state in machine.final_states
    ]


__all__ = [
    "behavior",
    "computations",
    "exact_length_behavior",
    "exact_length_computations",
    "initial_configuration",
    "space_meter",
    "step",
    "successors",
    "time_meter",
]
