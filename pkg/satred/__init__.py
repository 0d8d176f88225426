from __future__ import annotations

from satred.cook_levin import cook_levin_reduce, prop_variable
from satred.many_one import (
    ManyOneReport,
    ManyOneRow,
    Reduction,
    check_many_one,
    cook_levin_reduction,
    identity_reduction,
)
from satred.prop import (
    NegVar,
    PAnd,
    PConst,
    POr,
    PropFormula,
    Var,
    eval_prop,
    format_prop,
    parse_prop,
    prop_size,
    sat_series,
    variables,
)

__all__ = [
    "ManyOneReport",
    "ManyOneRow",
    "NegVar",
    "PAnd",
    "PConst",
    "POr",
    "PropFormula",
    "Reduction",
    "Var",
    "check_many_one",
    "cook_levin_reduce",
    "cook_levin_reduction",
    "eval_prop",
    "format_prop",
    "identity_reduction",
    "parse_prop",
    "prop_size",
    "prop_variable",
    "sat_series",
    "variables",
]
