from __future__ import annotations

import logging
from typing import Dict, Mapping

from core.errors import MachineError
from core.types import Move
from machines.model import SRTM, Transition, WeightedTM
from semirings.base import Value

logger = logging.getLogger(__name__)


def pad_machine(machine: WeightedTM) -> WeightedTM:
    """Let accepting states idle forever with weight one and track them instead of accepting.

    A run of the original of length l <= T becomes exactly one run of length T of
    the padded machine that ends in a tracked state.
    """
    final = machine.final_states
    weights: Dict[Transition, Value] = dict(machine.weights)
    for state in sorted(machine.accepting):
        for symbol in machine.work_alphabet:
            weights[Transition(state, symbol, state, symbol, Move.STAY)] = machine.semiring.one
    padded = WeightedTM(
        machine.states,
        machine.input_alphabet,
        machine.work_alphabet,
        machine.blank,
        machine.initial,
        frozenset(),
        weights,
        machine.semiring,
        tracked=final,
    )
    logger.debug("Machine padded | tracked=%s | transitions=%s", sorted(final), len(weights))
    return padded


def srtm_to_wtm(srtm: SRTM) -> WeightedTM:
    """Merge rules that share (p, a, q, b, d) by adding their weights."""
    semiring = srtm.semiring
    weights: Dict[Transition, Value] = {}
    for transition, weight in srtm.rules:
        if transition in weights:
            weights[transition] = semiring.add(weights[transition], weight)
        else:
            weights[transition] = weight
    return WeightedTM(
        srtm.states,
        srtm.input_alphabet,
        srtm.work_alphabet,
        srtm.blank,
        srtm.initial,
        srtm.accepting,
        weights,
        semiring,
    )


def is_deterministic(machine: WeightedTM) -> bool:
    seen = set()
    for transition in machine.weights:
        key = (transition.source, transition.read)
        if key in seen:
            return False
        seen.add(key)
    return True


def rename_states(machine: WeightedTM, mapping: Mapping[str, str]) -> WeightedTM:
    """Isomorphic copy; states missing from ``mapping`` keep their names."""
    rename = {state: mapping.get(state, state) for state in machine.states}
    if len(set(rename.values())) != len(rename):
        raise MachineError("State renaming must be injective")
    weights = {
        Transition(rename[t.source], t.read, rename[t.target], t.write, t.move): weight
        for t, weight in machine.weights.items()
    }
    return WeightedTM(
        tuple(rename[state] for state in machine.states),
        machine.input_alphabet,
        machine.work_alphabet,
        machine.blank,
        rename[machine.initial],
        frozenset(rename[state] for state in machine.accepting),
        weights,
        machine.semiring,
        frozenset(rename[state] for state in machine.tracked),
    )


__all__ = ["is_deterministic", "pad_machine", "rename_states", "srtm_to_wtm"]
