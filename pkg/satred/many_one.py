from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Callable, Generic, List, Optional, Sequence, TypeVar

import pandas as pd

from core.config import Limits
from core.parallel import parallel_map
from core.types import CheckStatus
from evaluation.evaluator import Evaluator
from logic.ast import Formula
from satred.cook_levin import cook_levin_reduce
from satred.prop import PropFormula, format_prop, sat_series
from semirings.base import Semiring, Value
from structures.model import Structure

logger = logging.getLogger(__name__)

Source = TypeVar("Source")
Image = TypeVar("Image")


@dataclass(frozen=True)
class ManyOneRow:
    source: str
    image: str
    left: str
    right: str
    equal: bool


@dataclass
class ManyOneReport:
    semiring: str
    rows: List[ManyOneRow] = field(default_factory=list)

    @property
    def counterexample(self) -> Optional[ManyOneRow]:
        return next((row for row in self.rows if not row.equal), None)

    @property
    def status(self) -> CheckStatus:
        return CheckStatus.PASS if self.counterexample is None else CheckStatus.FAIL

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS

    def to_frame(self) -> pd.DataFrame:
        columns = [item for item in ManyOneRow.__dataclass_fields__]
        return pd.DataFrame([asdict(row) for row in self.rows], columns=columns)


@dataclass(frozen=True)
class Reduction(Generic[Source, Image]):
    """A value on the source side, a value on the image side and the map between them."""

    source_value: Callable[[Source], Value]
    image_value: Callable[[Image], Value]
    transform: Callable[[Source], Image]
    show_source: Callable[[Source], str] = str
    show_image: Callable[[Image], str] = str


def check_many_one(
    reduction: Reduction, inputs: Sequence, semiring: Semiring, threads: int = 1
) -> ManyOneReport:
    """Check that the image of every input under the transform keeps its value."""

    def compare(item) -> ManyOneRow:
        image = reduction.transform(item)
        left, right = reduction.source_value(item), reduction.image_value(image)
        equal = semiring.equal(left, right)
        if not equal:
            logger.warning(
                "Reduction mismatch | input=%s | source=%s | image=%s",
                reduction.show_source(item),
                semiring.format(left),
                semiring.format(right),
            )
        return ManyOneRow(
            reduction.show_source(item),
            reduction.show_image(image),
            semiring.format(left),
            semiring.format(right),
            equal,
        )

    report = ManyOneReport(semiring.name, parallel_map(compare, list(inputs), threads))
    logger.info(
        "Reduction checked | semiring=%s | inputs=%s | status=%s",
        semiring.name,
        len(report.rows),
        report.status.name,
    )
    return report


def identity_reduction(value: Callable[[Source], Value]) -> Reduction:
    return Reduction(value, value, lambda item: item)


def cook_levin_reduction(formula: Formula, semiring: Semiring, limits: Optional[Limits] = None) -> Reduction:
    """Structures to ground propositional formulas; value against SAT series."""
    limits = limits or Limits()

    def value(structure: Structure) -> Value:
        return Evaluator(structure, semiring, limits).value(formula)

    def series(prop: PropFormula) -> Value:
        return sat_series(prop, semiring, limits.max_prop_vars)

    return Reduction(value, series, lambda structure: cook_levin_reduce(formula, structure), str, format_prop)


__all__ = [
    "ManyOneReport",
    "ManyOneRow",
    "Reduction",
    "check_many_one",
    "cook_levin_reduction",
    "identity_reduction",
]
