from __future__ import annotations

import json
import logging
import os
from typing import Any, Dict, Optional

from core.errors import LiteralError, MachineError
from core.types import Move
from machines.model import DEFAULT_BLANK, SRTM, Transition, WeightedTM
from semirings import build_semiring
from semirings.base import Semiring

logger = logging.getLogger(__name__)


def _semiring_of(data: Dict[str, Any], semiring: Optional[Semiring]) -> Semiring:
    if semiring is not None:
        return semiring
    name = data.get("semiring")
    if not name:
        raise MachineError("Machine document names no semiring")
    return build_semiring(str(name), data.get("semiring_params") or {})


def _rules(data: Dict[str, Any], semiring: Semiring) -> list:
    rules = []
    for row in data.get("transitions") or []:
        if len(row) != 6:
            raise MachineError(f"Transition rows need [p, a, q, b, move, weight], got {row}")
        p, a, q, b, move, literal = row
        try:
            transition = Transition(str(p), str(a), str(q), str(b), Move(int(move)))
        except ValueError as exc:
            raise MachineError(f"Invalid move in transition {row}") from exc
        try:
            weight = semiring.parse(str(literal))
        except LiteralError as exc:
            raise LiteralError(f"Transition {transition}: {exc}") from exc
        rules.append((transition, weight))
    return rules


def _header(data: Dict[str, Any]) -> Dict[str, Any]:
    try:
        return {
            "states": tuple(str(state) for state in data["states"]),
            "input_alphabet": tuple(str(symbol) for symbol in data["input_alphabet"]),
            "work_alphabet": tuple(str(symbol) for symbol in data["work_alphabet"]),
            "blank": str(data.get("blank", DEFAULT_BLANK)),
            "initial": str(data["initial"]),
            "accepting": frozenset(str(state) for state in data.get("accepting") or []),
        }
    except (KeyError, TypeError) as exc:
        raise MachineError(f"Malformed machine document: missing {exc}") from exc


def machine_from_dict(data: Dict[str, Any], semiring: Optional[Semiring] = None) -> WeightedTM:
    handle = _semiring_of(data, semiring)
    weights = {}
    for transition, weight in _rules(data, handle):
        if transition in weights:
            raise MachineError(f"Duplicate transition {transition}; load it as an SRTM to merge weights")
        weights[transition] = weight
    tracked = frozenset(str(state) for state in data.get("tracked") or [])
    return WeightedTM(weights=weights, semiring=handle, tracked=tracked, **_header(data))


def srtm_from_dict(data: Dict[str, Any], semiring: Optional[Semiring] = None) -> SRTM:
    handle = _semiring_of(data, semiring)
    return SRTM(rules=tuple(_rules(data, handle)), semiring=handle, **_header(data))


def machine_to_dict(machine: WeightedTM) -> Dict[str, Any]:
    semiring = machine.semiring
    data: Dict[str, Any] = {
        "states": list(machine.states),
        "input_alphabet": list(machine.input_alphabet),
        "work_alphabet": list(machine.work_alphabet),
        "blank": machine.blank,
        "initial": machine.initial,
        "accepting": sorted(machine.accepting),
        "transitions": [
            [t.source, t.read, t.target, t.write, int(t.move), semiring.format(weight)]
            for t, weight in sorted(machine.weights.items())
        ],
        "semiring": semiring.name,
    }
    if semiring.params():
        data["semiring_params"] = dict(semiring.params())
    if machine.tracked:
        data["tracked"] = sorted(machine.tracked)
    return data


def _read_json(path: str) -> Dict[str, Any]:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Machine file not found: {path}")
    with open(path, "r", encoding="utf-8") as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as exc:
            raise MachineError(f"Machine file {path} is not valid JSON: {exc}") from exc


def load_machine(path: str, semiring: Optional[Semiring] = None) -> WeightedTM:
    machine = machine_from_dict(_read_json(path), semiring)
    logger.debug("Machine loaded | path=%s | %s", path, machine.describe())
    return machine


def load_srtm(path: str, semiring: Optional[Semiring] = None) -> SRTM:
    return srtm_from_dict(_read_json(path), semiring)


def dump_machine(machine: WeightedTM, path: str) -> None:
    payload = json.dumps(machine_to_dict(machine), ensure_ascii=False, indent=2)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(payload + "\n")


__all__ = [
    "dump_machine",
    "load_machine",
    "load_srtm",
    "machine_from_dict",
    "machine_to_dict",
    "srtm_from_dict",
]
