from __future__ import annotations

from typing import Dict, Optional

from reporters.base import CompositeReporter, CsvReporter, NullReporter, PrintReporter, Reporter


def build_reporter(config: Optional[Dict]) -> Reporter:
    if not config:
        return NullReporter()

    reporters = []

    if config.get("table"):
        reporters.append(PrintReporter())

    csv_path = config.get("csv")
    if csv_path:
        reporters.append(CsvReporter(str(csv_path)))

    if not reporters:
        return NullReporter()

    if len(reporters) == 1:
        return reporters[0]
    return CompositeReporter(reporters)


__all__ = [
    "CompositeReporter",
    "CsvReporter",
    "NullReporter",
    "PrintReporter",
    "Reporter",
    "build_reporter",
]
