from __future__ import annotations

import json
import logging
import os
from typing import Any, Dict

from frozendict import frozendict

from core.errors import StructureError
from structures.model import Signature, Structure

logger = logging.getLogger(__name__)


def structure_from_dict(data: Dict[str, Any]) -> Structure:
    try:
        universe = int(data["universe"])
        signature = Signature.of(data.get("signature") or {})
        relations = {
            name: frozenset(tuple(int(entry) for entry in row) for row in rows)
            for name, rows in (data.get("relations") or {}).items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError(f"Malformed structure document: {exc}") from exc
    return Structure(universe, signature, frozendict(relations))


def structure_to_dict(structure: Structure) -> Dict[str, Any]:
    return {
        "universe": structure.universe,
        "signature": dict(structure.signature.symbols),
        "relations": {name: [list(row) for row in sorted(rows)] for name, rows in structure.relations.items()},
    }


def load_structure(path: str) -> Structure:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Structure file not found: {path}")
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise StructureError(f"Structure file {path} is not valid JSON: {exc}") from exc
    structure = structure_from_dict(data)
    logger.debug("Structure loaded | path=%s | %s", path, structure)
    return structure


def dump_structure(structure: Structure, path: str) -> None:
    payload = json.dumps(structure_to_dict(structure), ensure_ascii=False, sort_keys=True)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(payload + "\n")


__all__ = ["dump_structure", "load_structure", "structure_from_dict", "structure_to_dict"]
