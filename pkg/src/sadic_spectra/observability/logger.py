"""JSONL audit logger for CLI runs.

Failures to write never interrupt a computation; they are reported through
the standard ``logging`` channel and swallowed.
"""

from __future__ import annotations

import hashlib
import json
import logging
from collections.abc import Callable
from pathlib import Path
from types import TracebackType
from typing import IO, Any

from sadic_spectra.observability.schema import RunLogEntry

logger = logging.getLogger(__name__)

Clock = Callable[[], float]


def _zero_clock() -> float:
    return 0.0


def run_id_for(header: dict[str, Any]) -> str:
    """First 12 hex digits of the sha256 of the canonical config JSON."""
    canonical = json.dumps(header, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


class RunLogger:
    """Writes ``RunLogEntry`` records to a JSONL file, one entry per line.

    The file is truncated on ``setup`` so a rerun of the same config yields
    an identical audit file.
    """

    def __init__(
        self,
        path: Path | str,
        run_id: str,
        subcommand: str,
        *,
        clock: Clock = _zero_clock,
    ) -> None:
        self._path = Path(path)
        self._run_id = run_id
        self._subcommand = subcommand
        self._clock = clock
        self._file: IO[str] | None = None
        self._seq = 0

    @property
    def file_path(self) -> Path:
        return self._path

    @property
    def is_setup(self) -> bool:
        return self._file is not None

    def setup(self) -> None:
        try:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._file = self._path.open("w", encoding="utf-8")
            self._seq = 0
        except OSError as e:
            logger.warning("Audit log setup failed for %s: %s", self._path, e)
            self._file = None

    def log(self, stage: str, **metrics: Any) -> RunLogEntry | None:
        """Append one entry; returns it, or None when nothing was written."""
        if self._file is None:
            logger.debug("Audit log not set up; skipping stage '%s'", stage)
            return None

        entry = RunLogEntry(
            ts=self._clock(),
            run_id=self._run_id,
            seq=self._seq + 1,
            subcommand=self._subcommand,
            stage=stage,
            metrics=metrics,
        )
        try:
            self._file.write(entry.to_json() + "\n")
            self._file.flush()
        except (OSError, TypeError, ValueError) as e:
            logger.warning("Audit log write failed: %s", e)
            return None
        self._seq = entry.seq
        return entry

    def close(self) -> None:
        """Safe to call more than once."""
        if self._file is None:
            return
        try:
            self._file.close()
        except OSError as e:
            logger.warning("Audit log close failed: %s", e)
        finally:
            self._file = None

    def __enter__(self) -> RunLogger:
        self.setup()
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_val: BaseException | None,
        exc_tb: TracebackType | None,
    ) -> None:
        self.close()


__all__ = ["Clock", "RunLogger", "run_id_for"]
