"""
Structured diagnostics for one CLI run.

Events, stage timings and metrics are collected here and emitted on stderr,
keeping stdout reports free of timestamps.
"""

import time
from contextlib import contextmanager
from datetime import datetime, timezone


class RunLog:
    """Timestamped events, stage timings and metrics for one command."""

    def __init__(self, command: str = ""):
        self.command = command
        self.events: list[dict] = []
        self.metrics: dict = {}
        self.stages: dict[str, float] = {}
        self._start = time.monotonic()

    def _record(self, level: str, msg: str, fields: dict) -> None:
        event = {"ts": self._now(), "level": level, "msg": msg}
        event.update((key, value) for key, value in fields.items() if value is not None)
        self.events.append(event)

    def info(self, msg: str, **fields) -> None:
        self._record("info", msg, fields)

    def warn(self, msg: str, **fields) -> None:
        self._record("warn", msg, fields)

    def error(self, msg: str, detail: str | None = None) -> None:
        self._record("error", msg, {"detail": detail})

    def set_metric(self, key: str, value) -> None:
        self.metrics[key] = value

    @contextmanager
    def stage(self, name: str):
        """Time a block; repeated stages accumulate, each pass logs an info event."""
        started = time.monotonic()
        try:
            yield
        finally:
            elapsed = time.monotonic() - started
            self.stages[name] = self.stages.get(name, 0.0) + elapsed
            self.info("stage finished", stage=name, seconds=round(elapsed, 3))

    def record_notes(self, labeling: str, notes) -> None:
        """Bound-report notes (clamped points, inapplicable closed forms) as warnings."""
        for note in notes:
            self.warn(note, labeling=labeling)

    def record_verification(self, report) -> None:
        """Discrepancies of a VerificationReport become warnings, failures one error."""
        self.set_metric("checks_run", report.checks_run)
        self.set_metric("skipped", report.skipped)
        for item in report.discrepancies:
            self.warn("printed value differs", check=item["check"], report=item.get("report"))
        if report.failures:
            first = report.failures[0]
            self.error(f"{len(report.failures)} checks failed", detail=first["check"])

    @property
    def failed(self) -> bool:
        return any(e["level"] == "error" for e in self.events)

    def to_summary(self) -> dict:
        return {
            "command": self.command,
            "log_events": self.events,
            "stage_seconds": {name: round(secs, 3) for name, secs in self.stages.items()},
            "duration_seconds": round(time.monotonic() - self._start, 3),
            **self.metrics,
        }

    @staticmethod
    def _now() -> str:
        return datetime.now(timezone.utc).isoformat(timespec="seconds")
