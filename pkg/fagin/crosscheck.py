from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Callable, List, Optional, Tuple, Union

import pandas as pd

from core.config import Limits
from core.errors import FragmentViolation
from core.parallel import parallel_map
from core.types import CheckStatus
from evaluation.evaluator import Evaluator
from fagin.compiler import formula_to_wtm
from fagin.decompiler import decompile_parts
from logic.ast import Formula, is_sentence
from machines.model import WeightedTM
from machines.simulator import behavior, exact_length_behavior
from semirings.base import Semiring, Value
from structures.encoding import encode
from structures.generators import all_structures
from structures.model import Signature, Structure

logger = logging.getLogger(__name__)

Side = Callable[[Structure], Value]
Pair = Tuple[Side, Side]


@dataclass(frozen=True)
class CrosscheckRow:
    universe: int
    structure: str
    left: str
    right: str
    equal: bool


@dataclass
class CrosscheckReport:
    semiring: str
    left_name: str
    right_name: str
    rows: List[CrosscheckRow] = field(default_factory=list)

    @property
    def counterexample(self) -> Optional[CrosscheckRow]:
        return next((row for row in self.rows if not row.equal), None)

    @property
    def status(self) -> CheckStatus:
        return CheckStatus.PASS if self.counterexample is None else CheckStatus.FAIL

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS

    def to_frame(self) -> pd.DataFrame:
        columns = [item for item in CrosscheckRow.__dataclass_fields__]
        return pd.DataFrame([asdict(row) for row in self.rows], columns=columns)

    def summary(self) -> dict:
        frame = self.to_frame()
        by_size = frame.groupby("universe")["equal"].agg(["count", "sum"]) if len(frame) else None
        return {
            "semiring": self.semiring,
            "left": self.left_name,
            "right": self.right_name,
            "structures": len(self.rows),
            "mismatches": int((~frame["equal"]).sum()) if len(frame) else 0,
            "sizes": {int(n): int(row["count"]) for n, row in by_size.iterrows()} if by_size is not None else {},
            "status": self.status.name,
        }


def formula_pair(
    formula: Formula, signature: Signature, semiring: Semiring, limits: Optional[Limits] = None
) -> Pair:
    """The formula's value against the behavior of the machine compiled from it."""
    if not is_sentence(formula):
        raise FragmentViolation("Crosschecks compare sentences; bind the free variables first", formula)
    limits = limits or Limits()
    machine = formula_to_wtm(formula, signature, semiring)

    def value(structure: Structure) -> Value:
        return Evaluator(structure, semiring, limits).value(formula)

    def run(structure: Structure) -> Value:
        return behavior(machine, encode(structure), limits.max_steps, strict=True)

    return value, run


def machine_pair(
    machine: WeightedTM, signature: Signature, k: int, limits: Optional[Limits] = None, unordered: bool = False
) -> Pair:
    """Runs of at most n^k - 1 steps against the value of the sentence describing them."""
    limits = limits or Limits()
    parts = decompile_parts(machine, signature, k, unordered=unordered)

    def run(structure: Structure) -> Value:
        return exact_length_behavior(parts.machine, encode(structure), structure.universe**k - 1)

    def value(structure: Structure) -> Value:
        return Evaluator(structure, machine.semiring, limits).value(parts.formula)

    return run, value


def crosscheck(
    subject: Union[Formula, WeightedTM, Pair],
    signature: Signature,
    semiring: Semiring,
    size_cap: int,
    *,
    limits: Optional[Limits] = None,
    k: int = 1,
    unordered: bool = False,
    threads: int = 1,
    names: Tuple[str, str] = ("left", "right"),
) -> CrosscheckReport:
    """Compare both sides on every structure over ``signature`` with 1..size_cap elements."""
    limits = limits or Limits()
    if isinstance(subject, Formula):
        left, right = formula_pair(subject, signature, semiring, limits)
        names = ("formula", "machine")
    elif isinstance(subject, WeightedTM):
        left, right = machine_pair(subject, signature, k, limits, unordered=unordered)
        names = ("machine", "formula")
    else:
        left, right = subject

    structures = [
        structure
        for n in range(1, size_cap + 1)
        for structure in all_structures(signature, n, limits.max_subsets)
    ]

    def compare(structure: Structure) -> CrosscheckRow:
        a, b = left(structure), right(structure)
        equal = semiring.equal(a, b)
        if not equal:
            logger.warning(
                "Crosscheck mismatch | structure=%s | left=%s | right=%s",
                structure,
                semiring.format(a),
                semiring.format(b),
            )
        return CrosscheckRow(structure.universe, str(structure), semiring.format(a), semiring.format(b), equal)

    report = CrosscheckReport(semiring.name, names[0], names[1], parallel_map(compare, structures, threads))
    logger.info(
        "Crosscheck done | semiring=%s | structures=%s | status=%s",
        semiring.name,
        len(report.rows),
        report.status.name,
    )
    return report


__all__ = [
    "CrosscheckReport",
    "CrosscheckRow",
    "Pair",
    "crosscheck",
    "formula_pair",
    "machine_pair",
]
