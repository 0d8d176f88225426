from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, List, Optional

import pandas as pd

logger = logging.getLogger(__name__)


class Reporter:
    def send_row(self, payload: dict) -> None:
        """Record one compared structure or input."""

    def send_alert(self, message: str, extra: Optional[dict] = None) -> None:
        """Report a mismatch or a failed job."""

    def close(self) -> None:
        """Flush whatever the sink buffered."""


class PrintReporter(Reporter):
    def send_row(self, payload: dict) -> None:
        print(f"[ROW] {payload}")

    def send_alert(self, message: str, extra: Optional[dict] = None) -> None:
        print(f"[ALERT] {message} | {extra or {}}")


class CsvReporter(Reporter):
    """Buffers rows and writes them as one CSV file on close."""

    def __init__(self, path: str):
        self.path = Path(path)
        self._rows: List[dict] = []

    def send_row(self, payload: dict) -> None:
        self._rows.append(dict(payload))

    def send_alert(self, message: str, extra: Optional[dict] = None) -> None:
        self._rows.append({"alert": message, **(extra or {})})

    def close(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame(self._rows).to_csv(self.path, index=False)
        logger.info("Rows written | path=%s | rows=%s", self.path, len(self._rows))


class CompositeReporter(Reporter):
    def __init__(self, reporters: Iterable[Reporter]):
        self._reporters = list(reporters)

    def send_row(self, payload: dict) -> None:
        for reporter in self._reporters:
            reporter.send_row(payload)

    def send_alert(self, message: str, extra: Optional[dict] = None) -> None:
        for reporter in self._reporters:
            reporter.send_alert(message, extra)

    def close(self) -> None:
        for reporter in self._reporters:
            reporter.close()


class NullReporter(Reporter):
    pass
