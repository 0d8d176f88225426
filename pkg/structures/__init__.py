from __future__ import annotations

from structures.encoding import decode, encode, encoding_length, universe_for_length
from structures.generators import all_structures, random_structure
from structures.io import dump_structure, load_structure, structure_from_dict, structure_to_dict
from structures.model import Relation, Row, Signature, Structure, parse_signature
from structures.orders import (
    DEFAULT_SUBSET_CAP,
    bottom,
    relation_at,
    relation_index,
    star_less,
    subsets_star,
    successor_pairs,
    top,
    tuple_at,
    tuple_index,
    tuples_lex,
)

__all__ = [
    "DEFAULT_SUBSET_CAP",
    "Relation",
    "Row",
    "Signature",
    "Structure",
    "all_structures",
    "bottom",
    "decode",
    "dump_structure",
    "encode",
    "encoding_length",
    "load_structure",
    "parse_signature",
    "random_structure",
    "relation_at",
    "relation_index",
    "star_less",
    "structure_from_dict",
    "structure_to_dict",
    "subsets_star",
    "successor_pairs",
    "top",
    "tuple_at",
    "tuple_index",
    "tuples_lex",
    "universe_for_length",
]
