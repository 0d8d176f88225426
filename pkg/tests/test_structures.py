from __future__ import annotations

import random

import pytest

from core.errors import CapExceededError, EncodingError, StructureError
from structures.encoding import decode, encode, encoding_length, universe_for_length
from structures.generators import all_structures, random_structure
from structures.io import dump_structure, load_structure
from structures.model import Signature, Structure, parse_signature
from structures.orders import (
    relation_at,
    relation_index,
    star_less,
    subsets_star,
    successor_pairs,
    tuple_at,
    tuple_index,
    tuples_lex,
)
from tests.conftest import fixture_path, graph, unary


def test_parse_signature():
    sig = parse_signature("edge:2, p:1")
    assert sig.symbols == (("edge", 2), ("p", 1))
    assert sig.max_arity == 2
    assert len(parse_signature("")) == 0
    with pytest.raises(StructureError):
        parse_signature("edge")
    with pytest.raises(StructureError):
        parse_signature("Edge:2")


def test_encoding_of_a_triangle():
    triangle = graph(3, [(0, 1), (1, 2), (2, 0)])
    assert encode(triangle) == "010001100"
    assert decode("010001100", triangle.signature, 3) == triangle


def test_encoding_concatenates_relations_in_signature_order():
    sig = parse_signature("p:1,edge:2")
    structure = Structure(2, sig, {"p": {(1,)}, "edge": {(0, 0)}})
    assert encode(structure) == "01" + "1000"
    assert encoding_length(sig, 2) == 6


def test_empty_signature_encodes_as_zeros():
    empty = Structure(3)
    assert encode(empty) == "000"
    assert decode("000", Signature(), 3) == empty
    with pytest.raises(EncodingError):
        decode("010", Signature(), 3)


def test_free_values_follow_the_structure():
    structure = unary(2, [0])
    assert encode(structure, [1]) == "10" + "01"
    assert encode(structure, [(1, {(0,), (1,)})]) == "10" + "11"
    with pytest.raises(EncodingError):
        encode(structure, [2])


def test_decode_rejects_wrong_lengths():
    with pytest.raises(EncodingError):
        decode("0101", parse_signature("edge:2"), 3)


def test_universe_for_length():
    sig = parse_signature("edge:2")
    assert universe_for_length(9, sig, 4) == 3
    with pytest.raises(EncodingError):
        universe_for_length(5, sig, 4)


def test_decode_inverts_encode_on_all_small_structures():
    sig = parse_signature("edge:2,p:1")
    for n in (1, 2):
        for structure in all_structures(sig, n):
            assert decode(encode(structure), sig, n) == structure


def test_tuple_order_is_lexicographic():
    rows = list(tuples_lex(3, 2))
    assert rows[:4] == [(0, 0), (0, 1), (0, 2), (1, 0)]
    for position, row in enumerate(rows):
        assert tuple_index(row, 3) == position
        assert tuple_at(position, 3, 2) == row
    with pytest.raises(StructureError):
        tuple_at(9, 3, 2)


def test_relation_index_is_a_bijection_ordered_by_star():
    subsets = list(subsets_star(2, 2))
    assert len(subsets) == 16
    for code, rows in enumerate(subsets):
        assert relation_index(rows, 2) == code
        assert relation_at(code, 2, 2) == rows
    for left, right in zip(subsets, subsets[1:]):
        assert star_less(left, right, 2)
        assert not star_less(right, left, 2)


def test_star_order_decides_by_largest_difference():
    # the largest tuple where they differ is (1,) and it lies in the right set
    assert star_less({(0,)}, {(1,)}, 2)
    assert not star_less({(0,), (1,)}, {(1,)}, 2)


def test_subset_enumeration_respects_cap():
    with pytest.raises(CapExceededError):
        list(subsets_star(5, 2, cap=20))


def test_all_structures_counts():
    assert sum(1 for _ in all_structures(parse_signature("p:1"), 3)) == 8
    assert sum(1 for _ in all_structures(parse_signature("edge:2"), 2)) == 16
    assert sum(1 for _ in all_structures(Signature(), 2)) == 1


def test_successor_pairs():
    assert successor_pairs(3) == ((0, 1), (1, 2))
    assert successor_pairs(1) == ()


def test_transport_moves_every_tuple():
    structure = graph(3, [(0, 1)])
    moved = structure.transport([2, 0, 1])
    assert moved.relation("edge") == {(2, 0)}
    with pytest.raises(StructureError):
        structure.transport([0, 0, 1])


def test_structures_reject_bad_tuples():
    with pytest.raises(StructureError):
        graph(2, [(0, 2)])
    with pytest.raises(StructureError):
        Structure(0)


def test_random_structure_is_seeded():
    sig = parse_signature("edge:2")
    first = random_structure(sig, 4, random.Random(3))
    second = random_structure(sig, 4, random.Random(3))
    assert first == second


def test_structure_files(tmp_path):
    triangle = load_structure(fixture_path("structures", "triangle.json"))
    assert triangle.universe == 3 and len(triangle.relation("edge")) == 6
    target = tmp_path / "copy.json"
    dump_structure(triangle, str(target))
    assert load_structure(str(target)) == triangle
    with pytest.raises(FileNotFoundError):
        load_structure(str(tmp_path / "missing.json"))
