"""Brute-force reference answers, independent of the logic and machine code."""

from __future__ import annotations

from itertools import combinations, product
from math import comb
from typing import Callable, Dict, FrozenSet, Iterable, Set, Tuple

from structures.model import Structure


def _edges(structure: Structure) -> FrozenSet[Tuple[int, int]]:
    return structure.relation("edge")


def is_clique(structure: Structure, members: Iterable[int]) -> bool:
    edges = _edges(structure)
    members = list(members)
    return all((a, b) in edges for a in members for b in members if a != b)


def max_clique(structure: Structure) -> int:
    n = structure.universe
    return max(
        size
        for size in range(n + 1)
        for members in combinations(range(n), size)
        if is_clique(structure, members)
    )


def clique_count(structure: Structure, size: int) -> int:
    return sum(1 for members in combinations(range(structure.universe), size) if is_clique(structure, members))


def min_cut(structure: Structure):
    """Fewest crossing edges over partitions with every source inside and every sink outside; None if no such partition."""
    n = structure.universe
    edges = _edges(structure)
    sources = {a for a in range(n) if not any((b, a) in edges for b in range(n))}
    sinks = {a for a in range(n) if not any((a, b) in edges for b in range(n))}
    best = None
    for bits in product((False, True), repeat=n):
        if any(not bits[a] for a in sources) or any(bits[a] for a in sinks):
            continue
        crossing = sum(1 for a, b in edges if bits[a] and not bits[b])
        best = crossing if best is None else min(best, crossing)
    return best


def transitive_closure(structure: Structure) -> Set[Tuple[int, int]]:
    n = structure.universe
    reach = {pair for pair in _edges(structure)}
    for middle in range(n):
        for a in range(n):
            for b in range(n):
                if (a, middle) in reach and (middle, b) in reach:
                    reach.add((a, b))
    return reach


def model_count(clauses: Callable[[Dict[str, bool]], bool], names) -> int:
    names = list(names)
    return sum(1 for flags in product((False, True), repeat=len(names)) if clauses(dict(zip(names, flags))))


def subsets_weighted(n: int, inside: int, outside: int = 1) -> int:
    return sum(comb(n, k) * inside**k * outside ** (n - k) for k in range(n + 1))


def srtm_behavior(srtm, word, max_steps: int):
    """Sum over every sequence of rule occurrences that ends accepting; duplicate rules stay separate."""
    semiring = srtm.semiring
    total = semiring.zero
    pending = [(srtm.initial, dict(enumerate(word)), 0, 0, semiring.one)]
    while pending:
        state, tape, head, steps, weight = pending.pop()
        if state in srtm.accepting:
            total = semiring.add(total, weight)
        if steps == max_steps:
            continue
        scanned = tape.get(head, srtm.blank)
        for transition, rule_weight in srtm.rules:
            if (transition.source, transition.read) != (state, scanned):
                continue
            moved = head + int(transition.move)
            if moved < 0:
                continue
            written = {**tape, head: transition.write}
            pending.append((transition.target, written, moved, steps + 1, semiring.mul(weight, rule_weight)))
    return total
