"""Deterministic CSV and JSON rendering with a '#' provenance header."""
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from share_relay import __version__

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """Render one cell. Floats use the shortest round-trip repr."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def header_lines(command: str, seed: int, config_json: str) -> list[str]:
    return [
        f"# share-relay {__version__}",
        f"# command: {command}",
        f"# seed: {seed}",
        f"# config: {config_json}",
    ]


def render_csv(
    columns: Sequence[str],
    rows: Iterable[dict],
    header: Sequence[str] = (),
) -> str:
    """Header comment lines, then a CSV table with ``columns`` in order."""
    buffer = io.StringIO()
    for line in header:
        buffer.write(line + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(col)) for col in columns])
    return buffer.getvalue()


def render_json(document: dict, command: str, seed: int, config_json: str) -> str:
    payload = {
        "tool": f"share-relay {__version__}",
        "command": command,
        "seed": seed,
        "config": json.loads(config_json),
        **document,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def emit(text: str, out: Optional[Path]) -> None:
    """Write to ``out`` or stdout."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {len(text)} bytes to {out}")
