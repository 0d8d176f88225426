from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

from lark import Lark, Token, Transformer, Tree, v_args
from lark.exceptions import UnexpectedInput, VisitError

from core.errors import ParseError, WorkbenchError
from core.types import ClosureKind, FixpointKind
from logic.ast import (
    CLOSURE_NODES,
    FIXPOINT_NODES,
    And,
    Arg,
    Const,
    Eq,
    ExistsFO,
    ExistsSO,
    FalseF,
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
    ProdFO,
    ProdSO,
    RelAtom,
    SOAtom,
    SumFO,
    SumSO,
    TrueF,
    free_vars,
)
from logic.fragments import check_well_formed
from logic.transform import substitute

logger = logging.getLogger(__name__)

# Levels, loosest first: guard ?, (+), (*), <->, ->, |, &, then unary.
# Quantifiers take a unary-level body; parenthesise anything looser.
FORMULA_GRAMMAR = r"""
    start: definition* formula

    definition: "def" LNAME "(" [params] ")" ":=" formula ";"
    params: param ("," param)*
    param: LNAME                                    -> fo_param
         | UNAME ":" INT                            -> so_param

    ?formula: guard

    ?guard: oplus
          | oplus "?" guard                         -> guard

    ?oplus: otimes
          | oplus "(+)" otimes                      -> oplus

    ?otimes: iff
           | otimes "(*)" iff                       -> otimes

    ?iff: imp
        | imp "<->" imp                             -> iff

    ?imp: disj
        | disj "->" imp                             -> implies

    ?disj: conj
         | disj "|" conj                            -> or_

    ?conj: unary
         | conj "&" unary                           -> and_

    ?unary: "!" unary                               -> not_
          | "exists" LNAME "." unary                -> exists_fo
          | "forall" LNAME "." unary                -> forall_fo
          | "sum" LNAME "." unary                   -> sum_fo
          | "prod" LNAME "." unary                  -> prod_fo
          | ("exists" | "existsSO") UNAME ":" INT "." unary -> exists_so
          | ("sum" | "sumSO") UNAME ":" INT "." unary       -> sum_so
          | ("prod" | "prodSO") UNAME ":" INT "." unary     -> prod_so
          | atom

    ?atom: "true"                                   -> true
         | "false"                                  -> false
         | CONST                                    -> const
         | LNAME "(" [args] ")"                     -> call
         | UNAME "(" [args] ")"                     -> so_atom
         | term "=" term                            -> eq
         | term "!=" term                           -> neq
         | term "<" term                            -> less
         | "[" closure_op "(" names ")" "->" "(" names ")" "." formula "]" "(" args ")" -> closure
         | "[" fixpoint_op UNAME "(" names ")" "." formula "]" "(" args ")"            -> fixpoint
         | "(" formula ")"

    !closure_op: "tc" | "dtc"
    !fixpoint_op: "lfp" | "gfp" | "ifp" | "pfp"

    names: LNAME ("," LNAME)*
    args: arg ("," arg)*
    ?arg: LNAME | UNAME | INT
    ?term: LNAME | INT

    CONST.2: /c\([^()\s]*\)/
    LNAME: /[a-z][A-Za-z0-9_]*/
    UNAME: /[A-Z][A-Za-z0-9_]*/
    COMMENT: /#[^\n]*/

    %import common.INT
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_PARSER = Lark(FORMULA_GRAMMAR, parser="lalr")


@dataclass(frozen=True)
class Macro:
    """``def name(params) := body;`` where an SO parameter carries its arity."""

    name: str
    params: Tuple[Tuple[str, Optional[int]], ...]
    body: Formula


def _arg(token: Token) -> Arg:
    return int(token) if token.type == "INT" else str(token)


def _fo_args(name: str, args: Tuple[Arg, ...]) -> Tuple[Arg, ...]:
    for arg in args:
        if isinstance(arg, str) and arg[:1].isupper():
            raise ParseError(f"{name} takes element arguments, got second-order variable {arg}")
    return args


@v_args(inline=True)
class FormulaBuilder(Transformer):
    """Turns a parse tree into AST nodes, expanding macro calls on the way."""

    def __init__(self, macros: Optional[Mapping[str, Macro]] = None):
        super().__init__()
        self.macros: Dict[str, Macro] = dict(macros or {})

    def build(self, tree: Tree) -> Formula:
        try:
            return self.transform(tree)
        except VisitError as exc:
            if isinstance(exc.orig_exc, WorkbenchError):
                raise exc.orig_exc from None
            raise

    def define(self, tree: Tree) -> Macro:
        name_token, params_tree, body_tree = tree.children
        name = str(name_token)
        params = self.build(params_tree) if params_tree is not None else ()
        body = self.build(body_tree)
        names = [param for param, _ in params]
        if len(set(names)) != len(names):
            raise ParseError(f"Macro {name} repeats a parameter")
        stray = free_vars(body) - set(names)
        if stray:
            raise ParseError(f"Macro {name} uses variables that are not parameters: {', '.join(sorted(stray))}")
        macro = Macro(name, tuple(params), body)
        self.macros[name] = macro
        logger.debug("Macro defined | name=%s | params=%s", name, params)
        return macro

    # parameters and argument lists

    def params(self, *items):
        return tuple(items)

    def fo_param(self, name):
        return (str(name), None)

    def so_param(self, name, arity):
        return (str(name), int(arity))

    def names(self, *items):
        return tuple(str(item) for item in items)

    def args(self, *items):
        return tuple(_arg(item) for item in items)

    def closure_op(self, token):
        return str(token)

    def fixpoint_op(self, token):
        return str(token)

    # connectives

    def guard(self, cond, body):
        return Guard(cond, body)

    def oplus(self, left, right):
        return OPlus(left, right)

    def otimes(self, left, right):
        return OTimes(left, right)

    def iff(self, left, right):
        return Iff(left, right)

    def implies(self, left, right):
        return Implies(left, right)

    def or_(self, left, right):
        return Or(left, right)

    def and_(self, left, right):
        return And(left, right)

    def not_(self, body):
        return Not(body)

    # quantifiers

    def exists_fo(self, var, body):
        return ExistsFO(str(var), body)

    def forall_fo(self, var, body):
        return ForallFO(str(var), body)

    def sum_fo(self, var, body):
        return SumFO(str(var), body)

    def prod_fo(self, var, body):
        return ProdFO(str(var), body)

    def exists_so(self, var, arity, body):
        return ExistsSO(str(var), int(arity), body)

    def sum_so(self, var, arity, body):
        return SumSO(str(var), int(arity), body)

    def prod_so(self, var, arity, body):
        return ProdSO(str(var), int(arity), body)

    # atoms

    def true(self):
        return TrueF()

    def false(self):
        return FalseF()

    def const(self, token):
        return Const(str(token)[2:-1])

    def eq(self, left, right):
        return Eq(_arg(left), _arg(right))

    def neq(self, left, right):
        return Not(Eq(_arg(left), _arg(right)))

    def less(self, left, right):
        return Less(_arg(left), _arg(right))

    def so_atom(self, var, args):
        return SOAtom(str(var), _fo_args(str(var), args or ()))

    def call(self, name, args):
        name = str(name)
        args = args or ()
        macro = self.macros.get(name)
        if macro is None:
            return RelAtom(name, _fo_args(name, args))
        return self._expand(macro, args)

    def closure(self, op, sources, targets, body, args):
        if len(sources) != len(targets):
            raise ParseError(f"{op} needs as many source as target variables")
        width = len(sources)
        if len(args) != 2 * width:
            raise ParseError(f"{op} over {width}-tuples takes {2 * width} arguments, got {len(args)}")
        args = _fo_args(op, args)
        node = CLOSURE_NODES[ClosureKind(op)]
        return node(sources, targets, body, args[:width], args[width:])

    def fixpoint(self, op, rel, variables, body, args):
        if len(args) != len(variables):
            raise ParseError(f"{op} {rel} binds {len(variables)} variables but takes {len(args)} arguments")
        node = FIXPOINT_NODES[FixpointKind(op)]
        return node(str(rel), variables, body, _fo_args(op, args))

    def _expand(self, macro: Macro, args: Tuple[Arg, ...]) -> Formula:
        if len(args) != len(macro.params):
            raise ParseError(f"Macro {macro.name} takes {len(macro.params)} arguments, got {len(args)}")
        mapping: Dict[str, Arg] = {}
        for (param, arity), arg in zip(macro.params, args):
            is_so_arg = isinstance(arg, str) and arg[:1].isupper()
            if (arity is not None) != is_so_arg:
                kind = "a second-order variable" if arity is not None else "an element"
                raise ParseError(f"Macro {macro.name} expects {kind} for parameter {param}, got {arg}")
            mapping[param] = arg
        return substitute(macro.body, mapping)


def _parse_tree(text: str) -> Tree:
    try:
        return _PARSER.parse(text)
    except UnexpectedInput as exc:
        line = getattr(exc, "line", None)
        column = getattr(exc, "column", None)
        if line is not None and line < 0:
            line = column = None
        raise ParseError(f"Syntax error: {str(exc).splitlines()[0]}", line, column) from exc


def parse_program(text: str, macros: Optional[Mapping[str, Macro]] = None) -> Tuple[Dict[str, Macro], Formula]:
    """Parse definitions followed by one formula; returns the macro table and the formula."""
    tree = _parse_tree(text)
    builder = FormulaBuilder(macros)
    *definitions, body = tree.children
    for definition in definitions:
        builder.define(definition)
    formula = builder.build(body)
    check_well_formed(formula)
    return builder.macros, formula


def parse_formula(text: str, macros: Optional[Mapping[str, Macro]] = None) -> Formula:
    return parse_program(text, macros)[1]


def load_formula(path: str, macros: Optional[Mapping[str, Macro]] = None) -> Formula:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    formula = parse_formula(text, macros)
    logger.debug("Formula loaded | path=%s", path)
    return formula


__all__ = ["FORMULA_GRAMMAR", "FormulaBuilder", "Macro", "load_formula", "parse_formula", "parse_program"]
