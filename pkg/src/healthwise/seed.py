"""Starter catalog shipped with the package.

A fresh data directory gets a copy of the packaged seed file so the server
is usable out of the box; an existing catalog file is never touched.
"""

from importlib import resources
from pathlib import Path

from .errors import StorageFailure


def seed_catalog_bytes() -> bytes:
    return resources.files("healthwise").joinpath("data/seed_catalog.jsonl").read_bytes()


def seed_catalog_if_missing(path: Path) -> bool:
    """Copy the packaged seed catalog to path unless it already exists."""
    if path.exists():
        return False
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(seed_catalog_bytes())
    except OSError as exc:
        raise StorageFailure(f"cannot write seed catalog to {path}: {exc}") from exc
    return True
