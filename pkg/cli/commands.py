"""Verbs of the ``wdc`` command. Results go to stdout, logs to stderr."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional

import pandas as pd

from core.config import WorkbenchSettings, load_settings
from core.errors import WorkbenchError
from evaluation.assignment import Assignment, parse_assignment
from evaluation.evaluator import EvalContext
from fagin.compiler import formula_to_wtm
from fagin.crosscheck import crosscheck, machine_pair
from fagin.decompiler import decompile_parts
from logic.ast import Formula
from logic.fragments import check_signature, ensure_monadic
from logic.library import library_formula, library_signature
from logic.parser import load_formula, parse_formula
from logic.printer import format_formula
from machines.io import load_machine, machine_to_dict
from machines.simulator import behavior, space_meter, time_meter
from satred.cook_levin import cook_levin_reduce
from satred.prop import format_prop, parse_prop, sat_series
from semirings import build_semiring, registered_semirings
from semirings.base import Semiring
from structures.io import load_structure
from structures.model import Signature, parse_signature

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2


def setup_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT, stream=sys.stderr)


def exit_code(exc: BaseException) -> int:
    """0 success, 1 mismatch, 2 bad input, 3 cap exceeded, 4 live branches, 5 fragment or shape."""
    if isinstance(exc, WorkbenchError):
        return exc.exit_code
    if isinstance(exc, (FileNotFoundError, ValueError)):
        return EXIT_INPUT
    return EXIT_MISMATCH


def _params(items: Optional[List[str]]) -> Dict[str, str]:
    params = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"Semiring parameters take the form key=value, got {item!r}")
        params[key.strip()] = value.strip()
    return params


def _semiring(args: argparse.Namespace, settings: WorkbenchSettings) -> Semiring:
    name = args.semiring or settings.semiring
    params = dict(settings.semiring_params) if not args.semiring else {}
    params.update(_params(args.param))
    return build_semiring(name, params)


def _limits(args: argparse.Namespace, settings: WorkbenchSettings):
    return settings.limits.override(
        max_steps=getattr(args, "max_steps", None),
        max_subsets=getattr(args, "max_subsets", None),
        max_stages=getattr(args, "max_stages", None),
        max_prop_vars=getattr(args, "max_prop_vars", None),
    )


def _formula(args: argparse.Namespace, settings: WorkbenchSettings) -> Formula:
    if getattr(args, "library", None):
        formula = library_formula(args.library)
    elif getattr(args, "text", None):
        formula = parse_formula(args.text)
    elif args.formula:
        formula = load_formula(args.formula)
    else:
        raise ValueError("Give a formula with --formula, --text or --library")
    if settings.so_mode == "monadic":
        ensure_monadic(formula)
    return formula


def _signature(args: argparse.Namespace) -> Signature:
    if args.signature is not None:
        return parse_signature(args.signature)
    if getattr(args, "library", None):
        return library_signature(args.library)
    return parse_signature("")


def _write(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
        logger.info("Output written | path=%s", output)
    else:
        print(text)


def _print_frame(frame: pd.DataFrame) -> None:
    with pd.option_context("display.max_columns", None, "display.width", None):
        print(frame.to_string(index=False))


def cmd_eval(args: argparse.Namespace, settings: WorkbenchSettings) -> int:
    semiring = _semiring(args, settings)
    structure = load_structure(args.structure)
    formula = _formula(args, settings)
    check_signature(formula, structure.signature)
    assignment = parse_assignment(args.assign) if args.assign else Assignment()
    ctx = EvalContext(structure, semiring, assignment, _limits(args, settings), settings.threads)
    evaluator = ctx.evaluator(prune=not args.no_prune)
    value = evaluator.value(formula, ctx.assignment)
    print(semiring.format(value))
    if args.stats:
        for key, count in evaluator.stats.as_dict().items():
            print(f"{key}={count}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace, settings: WorkbenchSettings) -> int:
    semiring = _semiring(args, settings) if args.semiring else None
    machine = load_machine(args.machine, semiring)
    limits = _limits(args, settings)
    word = list(args.input)
    value = behavior(machine, word, limits.max_steps, strict=args.strict)
    print(machine.semiring.format(value))
    if args.meters:
        print(f"time={time_meter(machine, word, limits.max_steps, strict=args.strict)}")
        print(f"space={space_meter(machine, word, limits.max_steps, strict=args.strict)}")
    return EXIT_OK


def cmd_compile(args: argparse.Namespace, settings: WorkbenchSettings) -> int:
    semiring = _semiring(args, settings)
    formula = _formula(args, settings)
    limits = _limits(args, settings)
    machine = formula_to_wtm(formula, _signature(args), semiring)
    logger.info("Formula compiled | %s", machine.describe())
    _write(json.dumps(machine_to_dict(machine), ensure_ascii=False, indent=2), args.output)
    return EXIT_OK


def cmd_decompile(args: argparse.Namespace, settings: WorkbenchSettings) -> int:
    semiring = _semiring(args, settings) if args.semiring else None
    machine = load_machine(args.machine, semiring)
    parts = decompile_parts(machine, _signature(args), args.k, unordered=args.unordered)
    _write(format_formula(parts.formula), args.output)
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace, settings: WorkbenchSettings) -> int:
    formula = _formula(args, settings)
    structure = load_structure(args.structure)
    check_signature(formula, structure.signature)
    _write(format_prop(cook_levin_reduce(formula, structure)), args.output)
    return EXIT_OK


def cmd_sat(args: argparse.Namespace, settings: WorkbenchSettings) -> int:
    semiring = _semiring(args, settings)
    if args.text is not None:
        text = args.text
    else:
        with open(args.prop, "r", encoding="utf-8") as handle:
            text = handle.read()
    limits = _limits(args, settings)
    value = sat_series(parse_prop(text), semiring, limits.max_prop_vars, settings.threads)
    print(semiring.format(value))
    return EXIT_OK


def cmd_check(args: argparse.Namespace, settings: WorkbenchSettings) -> int:
    semiring = _semiring(args, settings)
    limits = _limits(args, settings)
    signature = _signature(args)
    if args.machine:
        machine = load_machine(args.machine, semiring)
        subject = machine_pair(machine, signature, args.k, limits, unordered=args.unordered)
        report = crosscheck(
            subject, signature, semiring, args.size_cap, limits=limits, threads=settings.threads, names=("machine", "formula")
        )
    else:
        report = crosscheck(_formula(args, settings), signature, semiring, args.size_cap, limits=limits, threads=settings.threads)
    _print_frame(report.to_frame())
    print(f"status: {report.status.name}")
    witness = report.counterexample
    if witness is not None:
        print(f"counterexample: {witness.structure} {report.left_name}={witness.left} {report.right_name}={witness.right}")
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_semirings(args: argparse.Namespace, settings: WorkbenchSettings) -> int:
    _print_frame(pd.DataFrame([semiring.describe() for semiring in registered_semirings()]))
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, WorkbenchSettings], int]] = {
    "eval": cmd_eval,
    "run": cmd_run,
    "compile": cmd_compile,
    "decompile": cmd_decompile,
    "reduce": cmd_reduce,
    "sat": cmd_sat,
    "check": cmd_check,
    "semirings": cmd_semirings,
}


def _semiring_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-s", "--semiring", help="Semiring name, see the semirings verb.")
    parser.add_argument(
        "-p", "--param", action="append", metavar="KEY=VALUE", help="Semiring parameter such as modulus=3."
    )


def _formula_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("-f", "--formula", help="Path to a .wl formula file.")
    group.add_argument("--text", help="Formula text.")
    group.add_argument("--library", help="Name of a built-in example formula.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wdc", description="Weighted logics and weighted Turing machines workbench.")
    parser.add_argument("-c", "--config", default=None, help="Path to the workbench configuration file.")
    parser.add_argument("--max-steps", type=int, dest="max_steps", help="Longest computation simulated.")
    parser.add_argument("--max-subsets", type=int, dest="max_subsets", help="Largest n^arity enumerated as sets.")
    parser.add_argument("--max-stages", type=int, dest="max_stages", help="Fixed-point stage cap.")
    parser.add_argument("--max-prop-vars", type=int, dest="max_prop_vars", help="Largest SAT enumeration.")
    verbs = parser.add_subparsers(dest="verb", required=True)

    p_eval = verbs.add_parser("eval", help="Evaluate a formula on a structure.")
    _semiring_flags(p_eval)
    _formula_flags(p_eval)
    p_eval.add_argument("--structure", required=True, help="Path to a structure JSON file.")
    p_eval.add_argument("--assign", help='Free variable values, e.g. "x=0,X={(0),(1)}".')
    p_eval.add_argument("--stats", action="store_true", help="Print evaluation counters.")
    p_eval.add_argument("--no-prune", action="store_true", dest="no_prune", help="Enumerate every SO assignment.")

    p_run = verbs.add_parser("run", help="Compute a machine's behavior on one input.")
    _semiring_flags(p_run)
    p_run.add_argument("-m", "--machine", required=True, help="Path to a machine JSON file.")
    p_run.add_argument("-i", "--input", default="", help="Input word, one symbol per character.")
    p_run.add_argument("--strict", action="store_true", help="Fail when runs are still live at the step cap.")
    p_run.add_argument("--meters", action="store_true", help="Also print the time and space meters.")

    p_compile = verbs.add_parser("compile", help="Compile a wESO sentence into a weighted machine.")
    _semiring_flags(p_compile)
    _formula_flags(p_compile)
    p_compile.add_argument("--signature", default=None, help='Signature such as "edge:2,p:1".')
    p_compile.add_argument("-o", "--output", help="Write the machine JSON here instead of stdout.")

    p_decompile = verbs.add_parser("decompile", help="Describe a machine's runs by a wESO sentence.")
    _semiring_flags(p_decompile)
    p_decompile.add_argument("-m", "--machine", required=True, help="Path to a machine JSON file.")
    p_decompile.add_argument("--signature", default=None, help='Signature such as "p:1".')
    p_decompile.add_argument("-k", "--k", type=int, default=1, help="Width of time and cell tuples.")
    p_decompile.add_argument("--unordered", action="store_true", help="Sum over all linear orders instead.")
    p_decompile.add_argument("-o", "--output", help="Write the formula here instead of stdout.")

    p_reduce = verbs.add_parser("reduce", help="Ground a sum-prefix sentence into propositional logic.")
    _formula_flags(p_reduce)
    p_reduce.add_argument("--structure", required=True, help="Path to a structure JSON file.")
    p_reduce.add_argument("-o", "--output", help="Write the propositional formula here instead of stdout.")

    p_sat = verbs.add_parser("sat", help="Sum a propositional formula over all truth assignments.")
    _semiring_flags(p_sat)
    source = p_sat.add_mutually_exclusive_group(required=True)
    source.add_argument("--prop", help="Path to a propositional formula file.")
    source.add_argument("--text", help="Propositional formula text.")

    p_check = verbs.add_parser("check", help="Crosscheck a formula or a machine against its translation.")
    _semiring_flags(p_check)
    _formula_flags(p_check)
    p_check.add_argument("-m", "--machine", help="Crosscheck this machine against its decompiled sentence.")
    p_check.add_argument("--signature", default=None, help='Signature such as "p:1".')
    p_check.add_argument("--size-cap", type=int, default=2, dest="size_cap", help="Largest structure compared.")
    p_check.add_argument("-k", "--k", type=int, default=1, help="Width of time and cell tuples for machines.")
    p_check.add_argument("--unordered", action="store_true", help="Use the order-free sentence for machines.")

    verbs.add_parser("semirings", help="List the registered semirings and their flags.")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(args.config)
    except (FileNotFoundError, ValueError) as exc:
        setup_logging("INFO")
        logger.error("Configuration failed | %s", exc)
        return EXIT_INPUT
    setup_logging(settings.log_level)
    try:
        return COMMANDS[args.verb](args, settings)
    except (WorkbenchError, FileNotFoundError, ValueError) as exc:
        code = exit_code(exc)
        logger.error("Command failed | verb=%s | exit=%s | %s", args.verb, code, exc)
        return code


__all__ = ["COMMANDS", "build_parser", "exit_code", "main", "setup_logging"]
