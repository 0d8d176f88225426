from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Callable, ClassVar, Dict, FrozenSet, Iterator, Tuple, Union

from core.types import ClosureKind, FixpointKind

# a term is a variable name or a numeral denoting an element
Arg = Union[str, int]


class Formula:
    """Base of every AST node. Nodes are frozen dataclasses and compare structurally."""

    weighted: ClassVar[bool] = False


def is_variable(arg: Arg) -> bool:
    return isinstance(arg, str)


def is_so_name(name: str) -> bool:
    return name[:1].isupper()


# Boolean nodes


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class Eq(Formula):
    left: Arg
    right: Arg


@dataclass(frozen=True)
class Less(Formula):
    left: Arg
    right: Arg


@dataclass(frozen=True)
class RelAtom(Formula):
    name: str
    args: Tuple[Arg, ...]


@dataclass(frozen=True)
class SOAtom(Formula):
    var: str
    args: Tuple[Arg, ...]


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ExistsFO(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForallFO(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ExistsSO(Formula):
    var: str
    arity: int
    body: Formula


@dataclass(frozen=True)
class Closure(Formula):
    """[tc (x..)->(y..). body](u.., v..): a path of one or more body steps."""

    sources: Tuple[str, ...]
    targets: Tuple[str, ...]
    body: Formula
    start: Tuple[Arg, ...]
    end: Tuple[Arg, ...]

    kind: ClassVar[ClosureKind] = ClosureKind.TC


@dataclass(frozen=True)
class Tc(Closure):
    kind: ClassVar[ClosureKind] = ClosureKind.TC


@dataclass(frozen=True)
class Dtc(Closure):
    kind: ClassVar[ClosureKind] = ClosureKind.DTC


@dataclass(frozen=True)
class Fixpoint(Formula):
    """[op R(x..). body](t..) with R bound as a relation of arity len(variables)."""

    rel: str
    variables: Tuple[str, ...]
    body: Formula
    args: Tuple[Arg, ...]

    kind: ClassVar[FixpointKind] = FixpointKind.LFP


@dataclass(frozen=True)
class Lfp(Fixpoint):
    kind: ClassVar[FixpointKind] = FixpointKind.LFP


@dataclass(frozen=True)
class Gfp(Fixpoint):
    kind: ClassVar[FixpointKind] = FixpointKind.GFP


@dataclass(frozen=True)
class Ifp(Fixpoint):
    kind: ClassVar[FixpointKind] = FixpointKind.IFP


@dataclass(frozen=True)
class Pfp(Fixpoint):
    kind: ClassVar[FixpointKind] = FixpointKind.PFP


# weighted nodes


@dataclass(frozen=True)
class Const(Formula):
    literal: str

    weighted: ClassVar[bool] = True


@dataclass(frozen=True)
class OPlus(Formula):
    left: Formula
    right: Formula

    weighted: ClassVar[bool] = True


@dataclass(frozen=True)
class OTimes(Formula):
    left: Formula
    right: Formula

    weighted: ClassVar[bool] = True


@dataclass(frozen=True)
class SumFO(Formula):
    var: str
    body: Formula

    weighted: ClassVar[bool] = True


@dataclass(frozen=True)
class ProdFO(Formula):
    var: str
    body: Formula

    weighted: ClassVar[bool] = True


@dataclass(frozen=True)
class SumSO(Formula):
    var: str
    arity: int
    body: Formula

    weighted: ClassVar[bool] = True


@dataclass(frozen=True)
class ProdSO(Formula):
    var: str
    arity: int
    body: Formula

    weighted: ClassVar[bool] = True


@dataclass(frozen=True)
class Guard(Formula):
    """cond ? body: the body's value when cond holds, one otherwise."""

    cond: Formula
    body: Formula

    weighted: ClassVar[bool] = True


FIXPOINT_NODES: Dict[FixpointKind, type] = {
    FixpointKind.LFP: Lfp,
    FixpointKind.GFP: Gfp,
    FixpointKind.IFP: Ifp,
    FixpointKind.PFP: Pfp,
}
CLOSURE_NODES: Dict[ClosureKind, type] = {ClosureKind.TC: Tc, ClosureKind.DTC: Dtc}
FO_BINDERS = (ExistsFO, ForallFO, SumFO, ProdFO)
SO_BINDERS = (ExistsSO, SumSO, ProdSO)


def children(node: Formula) -> Tuple[Formula, ...]:
    return tuple(
        getattr(node, item.name) for item in fields(node) if isinstance(getattr(node, item.name), Formula)
    )


def map_children(node: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    changes = {
        item.name: fn(getattr(node, item.name))
        for item in fields(node)
        if isinstance(getattr(node, item.name), Formula)
    }
    return replace(node, **changes) if changes else node


def walk(node: Formula) -> Iterator[Formula]:
    """Pre-order traversal."""
    yield node
    for child in children(node):
        yield from walk(child)


def arg_vars(args: Tuple[Arg, ...]) -> FrozenSet[str]:
    return frozenset(arg for arg in args if isinstance(arg, str))


def free_vars(node: Formula) -> FrozenSet[str]:
    """Free first- and second-order variables; relation symbols are not variables."""
    if isinstance(node, (Eq, Less)):
        return arg_vars((node.left, node.right))
    if isinstance(node, RelAtom):
        return arg_vars(node.args)
    if isinstance(node, SOAtom):
        return arg_vars(node.args) | {node.var}
    if isinstance(node, FO_BINDERS + SO_BINDERS):
        return free_vars(node.body) - {node.var}
    if isinstance(node, Closure):
        inner = free_vars(node.body) - set(node.sources) - set(node.targets)
        return inner | arg_vars(node.start) | arg_vars(node.end)
    if isinstance(node, Fixpoint):
        inner = free_vars(node.body) - {node.rel} - set(node.variables)
        return inner | arg_vars(node.args)
    result: FrozenSet[str] = frozenset()
    for child in children(node):
        result |= free_vars(child)
    return result


def is_sentence(node: Formula) -> bool:
    return not free_vars(node)


def all_names(node: Formula) -> FrozenSet[str]:
    """Every identifier used anywhere in the formula, bound or free."""
    names = set()
    for sub in walk(node):
        for item in fields(sub):
            value = getattr(sub, item.name)
            if isinstance(value, str) and item.name != "literal":
                names.add(value)
            elif isinstance(value, tuple):
                names.update(entry for entry in value if isinstance(entry, str))
    return frozenset(names)


def relation_symbols(node: Formula) -> Dict[str, int]:
    """Relation symbols with the arity of their first use."""
    found: Dict[str, int] = {}
    for sub in walk(node):
        if isinstance(sub, RelAtom):
            found.setdefault(sub.name, len(sub.args))
    return found


def size(node: Formula) -> int:
    return sum(1 for _ in walk(node))


def depth(node: Formula) -> int:
    return 1 + max((depth(child) for child in children(node)), default=0)


__all__ = [
    "And",
    "Arg",
    "CLOSURE_NODES",
    "Closure",
    "Const",
    "Dtc",
    "Eq",
    "ExistsFO",
    "ExistsSO",
    "FIXPOINT_NODES",
    "FO_BINDERS",
    "FalseF",
    "Fixpoint",
    "ForallFO",
    "Formula",
    "Gfp",
    "Guard",
    "Iff",
    "Ifp",
    "Implies",
    "Less",
    "Lfp",
    "Not",
    "OPlus",
    "OTimes",
    "Or",
    "Pfp",
    "ProdFO",
    "ProdSO",
    "RelAtom",
    "SOAtom",
    "SO_BINDERS",
    "SumFO",
    "SumSO",
    "Tc",
    "TrueF",
    "all_names",
    "arg_vars",
    "children",
    "depth",
    "free_vars",
    "is_sentence",
    "is_so_name",
    "is_variable",
    "map_children",
    "relation_symbols",
    "size",
    "walk",
]
