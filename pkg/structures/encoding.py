from __future__ import annotations

from typing import AbstractSet, Iterable, Sequence, Tuple, Union

from frozendict import frozendict

from core.errors import EncodingError
from structures.model import Row, Signature, Structure
from structures.orders import tuple_at, tuple_index

# a free first-order value is an element, a free second-order value is (arity, rows)
FreeValue = Union[int, Tuple[int, AbstractSet[Row]]]


def encode_relation(rows: Iterable[Row], n: int, arity: int) -> str:
    bits = ["0"] * n**arity
    for row in rows:
        bits[tuple_index(row, n)] = "1"
    return "".join(bits)


def _encode_free(value: FreeValue, n: int) -> str:
    if isinstance(value, int):
        if not 0 <= value < n:
            raise EncodingError(f"Free element {value} outside the universe of size {n}")
        return encode_relation([(value,)], n, 1)
    arity, rows = value
    for row in rows:
        if len(row) != arity or any(not 0 <= entry < n for entry in row):
            raise EncodingError(f"Free tuple {row} is not an {arity}-tuple over size {n}")
    return encode_relation(rows, n, arity)


def encode(structure: Structure, free_assign: Sequence[FreeValue] = ()) -> str:
    """enc(A) followed by one block per free value; the empty signature encodes as 0^n."""
    n = structure.universe
    if len(structure.signature) == 0:
        body = "0" * n
    else:
        body = "".join(
            encode_relation(structure.relation(name), n, arity) for name, arity in structure.signature
        )
    return body + "".join(_encode_free(value, n) for value in free_assign)


def encoding_length(signature: Signature, n: int, free_arities: Sequence[int] = ()) -> int:
    body = sum(n**arity for _, arity in signature) if len(signature) else n
    return body + sum(n**arity for arity in free_arities)


def decode(bits: str, signature: Signature, n: int) -> Structure:
    expected = encoding_length(signature, n)
    if len(bits) != expected:
        raise EncodingError(f"Encoding has length {len(bits)}, signature {signature} at n={n} needs {expected}")
    if set(bits) - {"0", "1"}:
        raise EncodingError(f"Encoding must be a bitstring: {bits!r}")
    if len(signature) == 0:
        if "1" in bits:
            raise EncodingError("The empty signature encodes as all zeros")
        return Structure(n, signature)
    relations = {}
    offset = 0
    for name, arity in signature:
        size = n**arity
        block = bits[offset : offset + size]
        relations[name] = frozenset(tuple_at(j, n, arity) for j, bit in enumerate(block) if bit == "1")
        offset += size
    return Structure(n, signature, frozendict(relations))


def universe_for_length(length: int, signature: Signature, max_universe: int) -> int:
    """The n <= max_universe whose encoding has this length, or raise."""
    for n in range(1, max_universe + 1):
        if encoding_length(signature, n) == length:
            return n
    raise EncodingError(f"No universe size up to {max_universe} encodes to length {length}")


__all__ = [
    "FreeValue",
    "decode",
    "encode",
    "encode_relation",
    "encoding_length",
    "universe_for_length",
]
