from __future__ import annotations

from fagin.compiler import formula_to_wtm, free_variables
from fagin.crosscheck import CrosscheckReport, CrosscheckRow, crosscheck, formula_pair, machine_pair
from fagin.decompiler import DecompiledFormula, decompile_parts, wtm_to_weso, wtm_to_weso_unordered

__all__ = [
    "CrosscheckReport",
    "CrosscheckRow",
    "DecompiledFormula",
    "crosscheck",
    "decompile_parts",
    "formula_pair",
    "formula_to_wtm",
    "free_variables",
    "machine_pair",
    "wtm_to_weso",
    "wtm_to_weso_unordered",
]
