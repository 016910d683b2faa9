"""Run audit trail: JSONL entries per pipeline stage."""

from sadic_spectra.observability.logger import Clock, RunLogger, run_id_for
from sadic_spectra.observability.schema import RunLogEntry

__all__ = [
    "Clock",
    "RunLogEntry",
    "RunLogger",
    "run_id_for",
]
