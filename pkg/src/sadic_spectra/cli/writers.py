"""Artifact writers.

Every artifact starts with the run header: the artifact version and the
full ``RunConfig`` as canonical JSON. Text formats put it on ``#`` comment
lines; JSON reports carry it under ``"header"``. Nothing time-dependent is
written, so equal configs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from collections.abc import Iterable, Sequence
from itertools import groupby
from pathlib import Path
from typing import IO, Any

from sadic_spectra.config.models import RunConfig
from sadic_spectra.core.patch import Patch

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """Shortest round-trip text for floats; ``str`` for everything else."""
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def header_lines(config: RunConfig) -> list[str]:
    canonical = json.dumps(config.header(), sort_keys=True, separators=(",", ":"))
    return [f"# {config.artifact_version}", f"# config: {canonical}"]


# ═══════════════════════════════════════════════════════════════════════════════
# Renderers (text in memory)
# ═══════════════════════════════════════════════════════════════════════════════


def render_csv(
    config: RunConfig,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
) -> str:
    buffer = io.StringIO()
    for line in header_lines(config):
        buffer.write(line + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def render_json(config: RunConfig, payload: dict[str, Any]) -> str:
    document = {"header": config.header(), **payload}
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_rle_patch(config: RunConfig, patch: Patch) -> str:
    """Run-length encoded patch.

    One text line per lattice line along the last axis, in row-major order
    of the leading axes. A run is written ``count:letter``.
    """
    lines = header_lines(config)
    lines.append(f"# extent: {','.join(str(n) for n in patch.extent)}")
    lines.append(f"# word: {''.join(str(s) for s in patch.word)}")
    for row in patch.cells.reshape(-1, patch.extent[-1]):
        runs = (f"{len(list(group))}:{int(letter)}" for letter, group in groupby(row.tolist()))
        lines.append(" ".join(runs))
    return "\n".join(lines) + "\n"


def render_plot_script(config: RunConfig, data_file: str, dim: int) -> str | None:
    """gnuplot script for 1-D and 2-D intensity maps; None for higher dimensions."""
    lines = header_lines(config)
    lines += [
        "set datafile separator ','",
        "set key off",
    ]
    if dim == 1:
        lines += [
            "set xlabel 't'",
            "set ylabel 'intensity'",
            f"plot '{data_file}' every ::1 using 1:2 with impulses",
        ]
    elif dim == 2:
        lines += [
            "set xlabel 't1'",
            "set ylabel 't2'",
            "set view map",
            f"splot '{data_file}' every ::1 using 1:2:3 with points pt 5 ps 0.3 palette",
        ]
    else:
        return None
    return "\n".join(lines) + "\n"


# ═══════════════════════════════════════════════════════════════════════════════
# Emission
# ═══════════════════════════════════════════════════════════════════════════════


def emit(text: str, path: Path | None, stream: IO[str]) -> None:
    """Write ``text`` to ``path``, or to ``stream`` when no path is given."""
    if path is None:
        stream.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("Wrote %s", path)


__all__ = [
    "emit",
    "format_value",
    "header_lines",
    "render_csv",
    "render_json",
    "render_plot_script",
    "render_rle_patch",
]
