from __future__ import annotations

from logic.ast import Formula, free_vars, is_sentence, relation_symbols
from logic.fragments import (
    check_fragment,
    check_monadic,
    check_positive,
    check_signature,
    check_well_formed,
    ensure_fragment,
    ensure_monadic,
    ensure_positive,
    so_prefix,
)
from logic.parser import Macro, load_formula, parse_formula, parse_program
from logic.printer import format_formula
from logic.transform import desugar, substitute

__all__ = [
    "Formula",
    "Macro",
    "check_fragment",
    "check_monadic",
    "check_positive",
    "check_signature",
    "check_well_formed",
    "desugar",
    "ensure_fragment",
    "ensure_monadic",
    "ensure_positive",
    "format_formula",
    "free_vars",
    "is_sentence",
    "load_formula",
    "parse_formula",
    "parse_program",
    "relation_symbols",
    "so_prefix",
    "substitute",
]
