from __future__ import annotations

import random
from itertools import product
from typing import Iterator

from frozendict import frozendict

from structures.model import Signature, Structure
from structures.orders import check_subset_base, relation_at, tuples_lex


def all_structures(signature: Signature, n: int, cap: int = 20) -> Iterator[Structure]:
    """Every structure of the signature over {0..n-1}, relation numbers counting up."""
    bases = [check_subset_base(n, arity, cap) for _, arity in signature]
    check_subset_base(sum(bases), 1, cap)
    for codes in product(*(range(1 << base) for base in bases)):
        relations = {
            name: relation_at(code, n, arity) for (name, arity), code in zip(signature, codes)
        }
        yield Structure(n, signature, frozendict(relations))


def random_structure(signature: Signature, n: int, rng: random.Random, density: float = 0.5) -> Structure:
    relations = {
        name: frozenset(row for row in tuples_lex(n, arity) if rng.random() < density)
        for name, arity in signature
    }
    return Structure(n, signature, frozendict(relations))


__all__ = ["all_structures", "random_structure"]
