"""Run audit log schema.

One ``RunLogEntry`` per pipeline stage of a CLI run (config loaded,
estimate finished, artifact written). Entries are JSON lines.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass(frozen=True, slots=True)
class RunLogEntry:
    """A single audit record.

    All top-level fields always exist; ``metrics`` holds stage-specific
    numbers and may be empty.

    Attributes:
        ts: Timestamp from the logger's clock (0 unless a clock is injected).
        run_id: Deterministic id derived from the run config.
        seq: Sequence number within the run, starting at 1.
        subcommand: CLI subcommand that produced the entry.
        stage: Pipeline stage name.
        metrics: Stage-specific values.
    """

    ts: float
    run_id: str
    seq: int
    subcommand: str
    stage: str
    metrics: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True, indent=indent)


__all__ = ["RunLogEntry"]
