from __future__ import annotations

from typing import Any, Optional


class WorkbenchError(Exception):
    """Base class for every error raised by the workbench."""

    exit_code = 1


class ParseError(WorkbenchError, ValueError):
    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class LiteralError(ParseError):
    """A weight literal does not belong to the chosen semiring."""


class UnknownSemiringError(WorkbenchError, ValueError):
    exit_code = 2


class StructureError(WorkbenchError, ValueError):
    exit_code = 2


class EncodingError(StructureError):
    """A bitstring does not have the length its signature requires."""


class TermError(WorkbenchError, ValueError):
    """A term leaf cannot be resolved or lies outside its generator set."""

    exit_code = 2


class MachineError(WorkbenchError, ValueError):
    exit_code = 2


class CapExceededError(WorkbenchError, RuntimeError):
    exit_code = 3

    def __init__(self, what: str, value: int, cap: int):
        self.what = what
        self.value = value
        self.cap = cap
        super().__init__(f"{what} needs {value}, cap is {cap}")


class LiveBranchesError(WorkbenchError, RuntimeError):
    exit_code = 4

    def __init__(self, live: int, max_steps: int):
        self.live = live
        self.max_steps = max_steps
        super().__init__(f"live branches: {live} configuration(s) still running after {max_steps} steps")


class InapplicableTransitionError(WorkbenchError, ValueError):
    exit_code = 2


class FragmentViolation(WorkbenchError, ValueError):
    exit_code = 5

    def __init__(self, message: str, subformula: Any = None):
        self.subformula = subformula
        super().__init__(message)


class ShapeViolation(FragmentViolation):
    """The formula does not have the prefix shape a translation expects."""


class SemiringFlagsError(WorkbenchError, ValueError):
    exit_code = 5


__all__ = [
    "CapExceededError",
    "EncodingError",
    "FragmentViolation",
    "InapplicableTransitionError",
    "LiteralError",
    "LiveBranchesError",
    "MachineError",
    "ParseError",
    "SemiringFlagsError",
    "ShapeViolation",
    "StructureError",
    "TermError",
    "UnknownSemiringError",
    "WorkbenchError",
]
