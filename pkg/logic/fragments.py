from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from core.errors import FragmentViolation, ParseError
from core.types import ClosureKind, FixpointKind, Fragment
from logic.ast import (
    SO_BINDERS,
    Closure,
    ExistsSO,
    Fixpoint,
    Formula,
    Guard,
    Iff,
    Implies,
    Not,
    ProdSO,
    RelAtom,
    SOAtom,
    SumSO,
    children,
    walk,
)
from structures.model import Signature


def check_well_formed(node: Formula) -> None:
    """Weighted nodes never sit inside Boolean ones; arities are used consistently."""
    relations: Dict[str, int] = {}
    free_so: Dict[str, int] = {}

    def visit(sub: Formula, boolean: bool, scope: Dict[str, int]) -> None:
        if boolean and sub.weighted:
            raise ParseError(f"Weighted subformula inside a Boolean context: {type(sub).__name__}")
        if isinstance(sub, RelAtom):
            expected = relations.setdefault(sub.name, len(sub.args))
            if expected != len(sub.args):
                raise ParseError(f"Relation {sub.name} used with arities {expected} and {len(sub.args)}")
        elif isinstance(sub, SOAtom):
            arity = scope.get(sub.var)
            if arity is None:
                arity = free_so.setdefault(sub.var, len(sub.args))
            if arity != len(sub.args):
                raise ParseError(f"Second-order variable {sub.var} has arity {arity}, used with {len(sub.args)}")
        if isinstance(sub, SO_BINDERS):
            scope = {**scope, sub.var: sub.arity}
            if sub.arity < 1:
                raise ParseError(f"Second-order variable {sub.var} needs a positive arity")
        elif isinstance(sub, Fixpoint):
            scope = {**scope, sub.rel: len(sub.variables)}
        if isinstance(sub, Guard):
            visit(sub.cond, True, scope)
            visit(sub.body, False, scope)
            return
        for child in children(sub):
            visit(child, boolean or not sub.weighted, scope)

    visit(node, False, {})


def check_signature(node: Formula, signature: Signature) -> None:
    for sub in walk(node):
        if isinstance(sub, RelAtom):
            if sub.name not in signature:
                raise ParseError(f"Relation {sub.name} is not in the signature {signature}")
            if signature.arity(sub.name) != len(sub.args):
                raise ParseError(
                    f"Relation {sub.name} has arity {signature.arity(sub.name)}, used with {len(sub.args)}"
                )


def so_prefix(node: Formula) -> Tuple[List[SumSO], Formula]:
    """Split off the leading block of second-order sums."""
    prefix: List[SumSO] = []
    while isinstance(node, SumSO):
        prefix.append(node)
        node = node.body
    return prefix, node


def _first(node: Formula, banned: tuple) -> Optional[Formula]:
    for sub in walk(node):
        if isinstance(sub, banned):
            return sub
    return None


def _closures(*kinds: ClosureKind) -> tuple:
    return tuple(cls for cls in Closure.__subclasses__() if cls.kind in kinds)


def _fixpoints(*kinds: FixpointKind) -> tuple:
    return tuple(cls for cls in Fixpoint.__subclasses__() if cls.kind in kinds)


_ALL_CLOSURES = _closures(ClosureKind.TC, ClosureKind.DTC)
_ALL_FIXPOINTS = _fixpoints(*FixpointKind)

_BANNED = {
    Fragment.WFO: SO_BINDERS + _ALL_FIXPOINTS + _ALL_CLOSURES,
    Fragment.WSO: _ALL_FIXPOINTS + _ALL_CLOSURES,
    Fragment.WLFP: SO_BINDERS + _ALL_CLOSURES + _fixpoints(FixpointKind.PFP),
    Fragment.WPFP: SO_BINDERS + _ALL_CLOSURES,
    Fragment.WDTC: SO_BINDERS + _ALL_FIXPOINTS + _closures(ClosureKind.TC),
    Fragment.WPFP_SOQ: (ExistsSO,) + _ALL_CLOSURES,
}


def check_fragment(node: Formula, fragment: Fragment) -> Optional[FragmentViolation]:
    """None when the formula lies in the fragment, else a violation naming the offending subformula."""
    if fragment is Fragment.WESO:
        _, body = so_prefix(node)
        offender = _first(body, _BANNED[Fragment.WFO])
    else:
        offender = _first(node, _BANNED[fragment])
    if offender is None:
        return None
    return FragmentViolation(f"{type(offender).__name__} is not allowed in {fragment.value}", offender)


def ensure_fragment(node: Formula, fragment: Fragment) -> None:
    violation = check_fragment(node, fragment)
    if violation is not None:
        raise violation


def check_positive(node: Formula) -> Optional[FragmentViolation]:
    """Every lfp/gfp body mentions its bound relation only under an even number of negations."""

    def occurrences(sub: Formula, rel: str, positive: bool, found: List[bool]) -> None:
        if isinstance(sub, SOAtom) and sub.var == rel:
            found.append(positive)
            return
        if isinstance(sub, (SO_BINDERS, Fixpoint)) and getattr(sub, "var", getattr(sub, "rel", None)) == rel:
            return
        if isinstance(sub, Not):
            occurrences(sub.body, rel, not positive, found)
        elif isinstance(sub, Implies):
            occurrences(sub.left, rel, not positive, found)
            occurrences(sub.right, rel, positive, found)
        elif isinstance(sub, Iff):
            for child in (sub.left, sub.right):
                occurrences(child, rel, positive, found)
                occurrences(child, rel, not positive, found)
        elif isinstance(sub, Guard):
            occurrences(sub.cond, rel, positive, found)
            occurrences(sub.cond, rel, not positive, found)
            occurrences(sub.body, rel, positive, found)
        else:
            for child in children(sub):
                occurrences(child, rel, positive, found)

    for sub in walk(node):
        if isinstance(sub, Fixpoint) and sub.kind in (FixpointKind.LFP, FixpointKind.GFP):
            polarities: List[bool] = []
            occurrences(sub.body, sub.rel, True, polarities)
            if not all(polarities):
                return FragmentViolation(
                    f"{sub.rel} occurs negatively in the body of {sub.kind.value} {sub.rel}", sub
                )
    return None


def ensure_positive(node: Formula) -> None:
    violation = check_positive(node)
    if violation is not None:
        raise violation


def check_monadic(node: Formula) -> Optional[FragmentViolation]:
    """Second-order variables are sets; fixpoint relations keep their arity."""

    def visit(sub: Formula, fixed: frozenset) -> Optional[FragmentViolation]:
        if isinstance(sub, SO_BINDERS):
            if sub.arity != 1:
                return FragmentViolation(f"{sub.var} has arity {sub.arity} in monadic mode", sub)
            fixed = fixed - {sub.var}
        elif isinstance(sub, Fixpoint):
            fixed = fixed | {sub.rel}
        elif isinstance(sub, SOAtom) and sub.var not in fixed and len(sub.args) != 1:
            return FragmentViolation(f"{sub.var} is used with arity {len(sub.args)} in monadic mode", sub)
        for child in children(sub):
            violation = visit(child, fixed)
            if violation is not None:
                return violation
        return None

    return visit(node, frozenset())


def ensure_monadic(node: Formula) -> None:
    violation = check_monadic(node)
    if violation is not None:
        raise violation


__all__ = [
    "check_fragment",
    "check_monadic",
    "check_positive",
    "check_signature",
    "check_well_formed",
    "ensure_fragment",
    "ensure_monadic",
    "ensure_positive",
    "so_prefix",
]
