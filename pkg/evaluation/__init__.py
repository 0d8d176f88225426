from __future__ import annotations

from evaluation.assignment import Assignment, free_values, parse_assignment
from evaluation.evaluator import (
    EvalContext,
    EvalStats,
    Evaluator,
    eval_bool,
    eval_closure,
    eval_fixpoint,
    eval_weighted,
)
from evaluation.pruning import block_assignments, kleene, so_block

__all__ = [
    "Assignment",
    "EvalContext",
    "EvalStats",
    "Evaluator",
    "block_assignments",
    "eval_bool",
    "eval_closure",
    "eval_fixpoint",
    "eval_weighted",
    "free_values",
    "kleene",
    "parse_assignment",
    "so_block",
]
