from __future__ import annotations

import random
from pathlib import Path

import pytest

from semirings import build_semiring
from structures.model import Structure, parse_signature

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(*parts: str) -> str:
    return str(FIXTURES.joinpath(*parts))


def graph(n: int, edges) -> Structure:
    return Structure(n, parse_signature("edge:2"), {"edge": frozenset(map(tuple, edges))})


def unary(n: int, marked) -> Structure:
    return Structure(n, parse_signature("p:1"), {"p": frozenset((a,) for a in marked)})


def random_graphs(count: int, max_n: int, seed: int, density: float = 0.5, dag: bool = False):
    rng = random.Random(seed)
    graphs = []
    for _ in range(count):
        n = rng.randint(1, max_n)
        edges = [
            (a, b)
            for a in range(n)
            for b in range(n)
            if a != b and (not dag or a < b) and rng.random() < density
        ]
        if not dag:
            edges = sorted({(a, b) for a, b in edges} | {(b, a) for a, b in edges})
        graphs.append(graph(n, edges))
    return graphs


@pytest.fixture
def nat():
    return build_semiring("nat")


@pytest.fixture
def boolean():
    return build_semiring("bool")


@pytest.fixture
def nat_max():
    return build_semiring("nat_max")


@pytest.fixture
def langs():
    return build_semiring("langs")


@pytest.fixture
def triangle() -> Structure:
    return graph(3, [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)])
