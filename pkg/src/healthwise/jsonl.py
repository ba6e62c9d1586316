"""Append-only JSON-lines persistence.

Each store is a UTF-8 file with one JSON object per line. Appends flush and
fsync before returning so a committed record survives a crash; replay
truncates a torn trailing line (the one write that may have been cut short)
with a warning instead of refusing to start.
"""

import json
import logging
import os
from pathlib import Path

from .errors import StorageFailure

logger = logging.getLogger(__name__)


def append_record(path: Path, record: dict) -> None:
    """Durably append one record.

    Raises:
        StorageFailure: the file cannot be written
    """
    line = json.dumps(record, ensure_ascii=False, separators=(",", ":"))
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())
    except OSError as exc:
        raise StorageFailure(f"cannot append to {path}: {exc}") from exc


def replay(path: Path) -> list[dict]:
    """Read every record; truncate a corrupt trailing line, warn, and continue.

    A corrupt line that is *not* the last one means real damage, and raises.
    """
    if not path.exists():
        return []
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise StorageFailure(f"cannot read {path}: {exc}") from exc

    records = []
    offset = 0
    lines = raw.splitlines(keepends=True)
    for index, line in enumerate(lines):
        stripped = line.strip()
        if not stripped:
            offset += len(line)
            continue
        try:
            records.append(json.loads(stripped))
        except json.JSONDecodeError as exc:
            if index != len(lines) - 1:
                raise StorageFailure(f"{path} is corrupt at line {index + 1}") from exc
            logger.warning("truncating corrupt trailing line of %s", path)
            with open(path, "rb+") as fh:
                fh.truncate(offset)
            break
        offset += len(line)
    return records


def rewrite(path: Path, records: list[dict]) -> None:
    """Atomically replace the file with the given records."""
    tmp = path.with_suffix(path.suffix + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp, "w", encoding="utf-8") as fh:
            for record in records:
                fh.write(json.dumps(record, ensure_ascii=False, separators=(",", ":")) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except OSError as exc:
        raise StorageFailure(f"cannot rewrite {path}: {exc}") from exc
