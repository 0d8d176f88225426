from __future__ import annotations

from dataclasses import replace
from typing import AbstractSet, Dict, Mapping, Sequence, Tuple

from logic.ast import (
    FO_BINDERS,
    SO_BINDERS,
    And,
    Arg,
    Closure,
    Const,
    Dtc,
    Eq,
    ExistsFO,
    FalseF,
    Fixpoint,
    ForallFO,
    Formula,
    Guard,
    Iff,
    Implies,
    Less,
    Not,
    OPlus,
    OTimes,
    Or,
    RelAtom,
    SOAtom,
    Tc,
    TrueF,
    all_names,
    free_vars,
    map_children,
)
from semirings.base import ONE_LITERAL


def fresh_name(base: str, avoid: AbstractSet[str]) -> str:
    """``base`` itself if unused, else ``base1``, ``base2``, ... keeping the initial's case."""
    if base not in avoid:
        return base
    index = 1
    while f"{base}{index}" in avoid:
        index += 1
    return f"{base}{index}"


def _sub_args(args: Tuple[Arg, ...], mapping: Mapping[str, Arg]) -> Tuple[Arg, ...]:
    return tuple(mapping.get(arg, arg) if isinstance(arg, str) else arg for arg in args)


def _incoming(mapping: Mapping[str, Arg]) -> set:
    return {value for value in mapping.values() if isinstance(value, str)}


def _rebind(
    bound: Sequence[str], body: Formula, mapping: Mapping[str, Arg]
) -> Tuple[Tuple[str, ...], Formula, Dict[str, Arg]]:
    """Drop bound names from the mapping and rename binders that would capture."""
    inner = {key: value for key, value in mapping.items() if key not in bound}
    inner = {key: value for key, value in inner.items() if key in free_vars(body)}
    incoming = _incoming(inner)
    avoid = set(all_names(body)) | incoming | set(inner) | set(bound)
    renamed = []
    renaming: Dict[str, Arg] = {}
    for name in bound:
        if name in incoming:
            fresh = fresh_name(name, avoid)
            avoid.add(fresh)
            renaming[name] = fresh
            renamed.append(fresh)
        else:
            renamed.append(name)
    if renaming:
        body = substitute(body, renaming)
    return tuple(renamed), body, inner


def substitute(node: Formula, mapping: Mapping[str, Arg]) -> Formula:
    """Capture-avoiding substitution of free variables.

    First-order variables map to variables or numerals, second-order variables
    to other second-order variable names.
    """
    if not mapping:
        return node
    if isinstance(node, (Eq, Less)):
        return replace(node, left=_sub_args((node.left,), mapping)[0], right=_sub_args((node.right,), mapping)[0])
    if isinstance(node, RelAtom):
        return replace(node, args=_sub_args(node.args, mapping))
    if isinstance(node, SOAtom):
        return SOAtom(str(mapping.get(node.var, node.var)), _sub_args(node.args, mapping))
    if isinstance(node, FO_BINDERS + SO_BINDERS):
        (var,), body, inner = _rebind((node.var,), node.body, mapping)
        return replace(node, var=var, body=substitute(body, inner))
    if isinstance(node, Closure):
        start = _sub_args(node.start, mapping)
        end = _sub_args(node.end, mapping)
        width = len(node.sources)
        bound, body, inner = _rebind(node.sources + node.targets, node.body, mapping)
        return replace(
            node, sources=bound[:width], targets=bound[width:], body=substitute(body, inner), start=start, end=end
        )
    if isinstance(node, Fixpoint):
        args = _sub_args(node.args, mapping)
        bound, body, inner = _rebind((node.rel,) + node.variables, node.body, mapping)
        return replace(node, rel=bound[0], variables=bound[1:], body=substitute(body, inner), args=args)
    return map_children(node, lambda child: substitute(child, mapping))


def _equal_tuples(left: Sequence[Arg], right: Sequence[Arg]) -> Formula:
    parts = [Eq(a, b) for a, b in zip(left, right)]
    result: Formula = TrueF()
    for part in reversed(parts):
        result = part if isinstance(result, TrueF) else And(part, result)
    return result


def functional_step(node: Closure) -> Tuple[Tuple[str, ...], Formula]:
    """Step of a deterministic closure: body(x,y) and every body(x,z) has z = y."""
    avoid = set(all_names(node.body)) | set(node.sources) | set(node.targets)
    fresh = []
    for target in node.targets:
        name = fresh_name(f"{target}_z", avoid)
        avoid.add(name)
        fresh.append(name)
    shifted = substitute(node.body, dict(zip(node.targets, fresh)))
    unique: Formula = Implies(shifted, _equal_tuples(fresh, node.targets))
    for name in reversed(fresh):
        unique = ForallFO(name, unique)
    return tuple(fresh), And(node.body, unique)


def desugar(node: Formula) -> Formula:
    """Rewrite into the core constructs: false, atoms, !, |, exists, the weighted
    operators, tc and the fixpoints."""
    if isinstance(node, TrueF):
        return Not(FalseF())
    if isinstance(node, And):
        return Not(Or(Not(desugar(node.left)), Not(desugar(node.right))))
    if isinstance(node, ForallFO):
        return Not(ExistsFO(node.var, Not(desugar(node.body))))
    if isinstance(node, Implies):
        return Or(Not(desugar(node.left)), desugar(node.right))
    if isinstance(node, Iff):
        left, right = desugar(node.left), desugar(node.right)
        forward = Or(Not(left), right)
        backward = Or(Not(right), left)
        return Not(Or(Not(forward), Not(backward)))
    if isinstance(node, Guard):
        cond = desugar(node.cond)
        return OPlus(OTimes(cond, desugar(node.body)), OTimes(Not(cond), Const(ONE_LITERAL)))
    if isinstance(node, Dtc):
        _, step = functional_step(node)
        return desugar(Tc(node.sources, node.targets, step, node.start, node.end))
    return map_children(node, desugar)


__all__ = ["desugar", "fresh_name", "functional_step", "substitute"]
