from __future__ import annotations

import logging
import random
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from core.config import Limits, build_settings, load_config
from fagin.crosscheck import CrosscheckReport, crosscheck
from logic.ast import Formula
from logic.generators import FormulaGenerator
from logic.library import library_formula, library_signature
from logic.parser import load_formula
from machines.io import load_machine
from reporters import Reporter, build_reporter
from satred.many_one import ManyOneReport, check_many_one, cook_levin_reduction
from semirings import build_semiring
from semirings.base import Semiring
from structures.generators import all_structures
from structures.model import Signature, parse_signature

logger = logging.getLogger(__name__)

JOB_KINDS = ("formula", "random", "machine", "reduction")


@dataclass
class SuiteJob:
    name: str
    kind: str
    signature: Signature
    semirings: List[Tuple[str, Dict[str, Any]]]
    size_cap: int = 2
    formula: Optional[str] = None
    library: Optional[str] = None
    machine: Optional[str] = None
    k: int = 1
    unordered: bool = False
    count: int = 5
    depth: int = 2
    seed: int = 0


@dataclass(frozen=True)
class JobResult:
    job: str
    kind: str
    semiring: str
    subject: str
    checked: int
    mismatches: int
    status: str
    counterexample: str = ""


@dataclass
class SuiteResult:
    rows: List[JobResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(row.status == "PASS" for row in self.rows)

    def to_frame(self) -> pd.DataFrame:
        columns = [item for item in JobResult.__dataclass_fields__]
        return pd.DataFrame([asdict(row) for row in self.rows], columns=columns)


def _semiring_entries(raw: Any) -> List[Tuple[str, Dict[str, Any]]]:
    entries = []
    for item in raw or ["nat"]:
        if isinstance(item, dict):
            entries.append((str(item["name"]), dict(item.get("params") or {})))
        else:
            entries.append((str(item), {}))
    return entries


def parse_job(raw: Dict[str, Any], defaults: Dict[str, Any]) -> SuiteJob:
    kind = str(raw.get("kind", "formula"))
    if kind not in JOB_KINDS:
        raise ValueError(f"Unknown job kind: {kind} (known: {', '.join(JOB_KINDS)})")
    library = raw.get("library")
    if "signature" in raw:
        signature = parse_signature(str(raw.get("signature") or ""))
    elif library:
        signature = library_signature(str(library))
    else:
        signature = parse_signature("")
    return SuiteJob(
        name=str(raw.get("name", kind)),
        kind=kind,
        signature=signature,
        semirings=_semiring_entries(raw.get("semirings", defaults.get("semirings"))),
        size_cap=int(raw.get("size_cap", defaults.get("size_cap", 2))),
        formula=raw.get("formula"),
        library=library,
        machine=raw.get("machine"),
        k=int(raw.get("k", 1)),
        unordered=bool(raw.get("unordered", False)),
        count=int(raw.get("count", 5)),
        depth=int(raw.get("depth", 2)),
        seed=int(raw.get("seed", defaults.get("seed", 0))),
    )


def _job_formula(job: SuiteJob) -> Formula:
    if job.library:
        return library_formula(job.library)
    if job.formula:
        return load_formula(job.formula)
    raise ValueError(f"Job {job.name} names neither a formula file nor a library formula")


def _report_rows(report, job: SuiteJob, semiring: Semiring, subject: str, reporter: Reporter) -> JobResult:
    for row in report.rows:
        reporter.send_row({"job": job.name, "semiring": semiring.name, "subject": subject, **asdict(row)})
    witness = report.counterexample
    if witness is not None:
        reporter.send_alert(
            f"Mismatch in {job.name}",
            {"semiring": semiring.name, "subject": subject, "left": witness.left, "right": witness.right},
        )
    return JobResult(
        job=job.name,
        kind=job.kind,
        semiring=semiring.name,
        subject=subject,
        checked=len(report.rows),
        mismatches=sum(1 for row in report.rows if not row.equal),
        status=report.status.name,
        counterexample=str(witness.structure if isinstance(report, CrosscheckReport) else witness.source)
        if witness is not None
        else "",
    )


def run_job(job: SuiteJob, limits: Limits, threads: int, reporter: Reporter) -> List[JobResult]:
    results: List[JobResult] = []
    for name, params in job.semirings:
        semiring = build_semiring(name, params)
        logger.info("Suite job | job=%s | kind=%s | semiring=%s", job.name, job.kind, semiring.name)
        if job.kind == "random":
            generator = FormulaGenerator.for_semiring(
                job.signature, random.Random(job.seed), semiring, max_arity=max(job.signature.max_arity, 1)
            )
            for index in range(job.count):
                formula = generator.weso(job.depth)
                report = crosscheck(formula, job.signature, semiring, job.size_cap, limits=limits, threads=threads)
                results.append(_report_rows(report, job, semiring, f"random[{index}]", reporter))
        elif job.kind == "formula":
            report = crosscheck(_job_formula(job), job.signature, semiring, job.size_cap, limits=limits, threads=threads)
            results.append(_report_rows(report, job, semiring, job.library or str(job.formula), reporter))
        elif job.kind == "machine":
            if not job.machine:
                raise ValueError(f"Job {job.name} needs a machine file")
            machine = load_machine(job.machine, semiring)
            report = crosscheck(
                machine, job.signature, semiring, job.size_cap, limits=limits, k=job.k, unordered=job.unordered, threads=threads
            )
            results.append(_report_rows(report, job, semiring, job.machine, reporter))
        else:
            structures = [
                structure
                for n in range(1, job.size_cap + 1)
                for structure in all_structures(job.signature, n, limits.max_subsets)
            ]
            reduction = cook_levin_reduction(_job_formula(job), semiring, limits)
            many_one: ManyOneReport = check_many_one(reduction, structures, semiring, threads)
            results.append(_report_rows(many_one, job, semiring, job.library or str(job.formula), reporter))
    return results


def run_suite(config_path: str = "config/suite.yaml") -> SuiteResult:
    config = load_config(config_path)
    settings = build_settings(config)
    defaults = config.section("suite", {})
    jobs = [parse_job(raw, defaults) for raw in config.section("jobs", [])]
    reporter = build_reporter(settings.reporting)

    result = SuiteResult()
    try:
        for job in jobs:
            result.rows.extend(run_job(job, settings.limits, settings.threads, reporter))
    finally:
        reporter.close()

    frame = result.to_frame()
    if len(frame):
        print("Suite Summary:")
        with pd.option_context("display.max_columns", None, "display.width", None):
            print(frame.to_string(index=False))
    logger.info("Suite done | jobs=%s | rows=%s | passed=%s", len(jobs), len(result.rows), result.passed)
    return result


__all__ = ["JOB_KINDS", "JobResult", "SuiteJob", "SuiteResult", "parse_job", "run_job", "run_suite"]
