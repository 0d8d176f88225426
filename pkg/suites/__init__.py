from __future__ import annotations

from suites.runner import JobResult, SuiteJob, SuiteResult, parse_job, run_job, run_suite

__all__ = ["JobResult", "SuiteJob", "SuiteResult", "parse_job", "run_job", "run_suite"]
