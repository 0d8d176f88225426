from __future__ import annotations

from typing import Any, Dict, List, Optional

from core.errors import UnknownSemiringError
from semirings.base import ONE_LITERAL, ZERO_LITERAL, Semiring, Value
from semirings.instances import (
    NEG_INF,
    POS_INF,
    ArcticSemiring,
    BooleanSemiring,
    ExtendedNaturalSemiring,
    IntegerSemiring,
    LanguageSemiring,
    ModularSemiring,
    MultisetSemiring,
    NatMaxSemiring,
    NatMinSemiring,
    NaturalSemiring,
    ProductTNormSemiring,
    RadixMaxSemiring,
    RadixMinSemiring,
    RationalSemiring,
    TropicalSemiring,
)

_PLAIN = {
    "bool": BooleanSemiring,
    "nat": NaturalSemiring,
    "nat_inf": ExtendedNaturalSemiring,
    "int": IntegerSemiring,
    "rat": RationalSemiring,
    "arctic": ArcticSemiring,
    "nat_max": NatMaxSemiring,
    "trop": TropicalSemiring,
    "nat_min": NatMinSemiring,
    "radix_max": RadixMaxSemiring,
    "radix_min": RadixMinSemiring,
}

SEMIRING_NAMES = tuple(sorted([*_PLAIN, "int_mod", "tnorm_product", "langs", "multiset"]))


def registry_lookup(
    name: str,
    *,
    modulus: Optional[int] = None,
    alphabet: Optional[str] = None,
    tnorm: Optional[str] = None,
) -> Semiring:
    key = name.strip()
    if key in _PLAIN:
        return _PLAIN[key]()
    if key == "int_mod":
        if modulus is None:
            raise UnknownSemiringError("int_mod needs a modulus parameter")
        try:
            return ModularSemiring(int(modulus))
        except ValueError as exc:
            raise UnknownSemiringError(str(exc)) from exc
    if key == "tnorm_product":
        if tnorm not in (None, "product"):
            raise UnknownSemiringError(f"Unsupported t-norm: {tnorm}")
        return ProductTNormSemiring()
    if key in ("langs", "multiset"):
        cls = LanguageSemiring if key == "langs" else MultisetSemiring
        try:
            return cls(alphabet) if alphabet else cls()
        except ValueError as exc:
            raise UnknownSemiringError(str(exc)) from exc
    raise UnknownSemiringError(f"Unknown semiring: {name} (known: {', '.join(SEMIRING_NAMES)})")


def build_semiring(name: str, params: Optional[Dict[str, Any]] = None) -> Semiring:
    """Build a semiring from a config ``semiring`` section."""
    params = params or {}
    return registry_lookup(
        name,
        modulus=params.get("modulus"),
        alphabet=params.get("alphabet"),
        tnorm=params.get("tnorm"),
    )


def registered_semirings() -> List[Semiring]:
    """One handle per registered name; parameterised instances use small defaults."""
    handles = []
    for name in SEMIRING_NAMES:
        handles.append(registry_lookup(name, modulus=2 if name == "int_mod" else None))
    return handles


__all__ = [
    "NEG_INF",
    "ONE_LITERAL",
    "POS_INF",
    "SEMIRING_NAMES",
    "Semiring",
    "Value",
    "ZERO_LITERAL",
    "build_semiring",
    "registered_semirings",
    "registry_lookup",
]
