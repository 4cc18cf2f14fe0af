"""Deterministic CSV / manifest writing.

All numeric output uses ``repr`` of the Python float: the shortest
decimal that round-trips to the exact double, so files are both
full-precision and byte-stable across runs.  Manifests are flat
``key=value`` text files holding everything needed to re-execute a run.
"""

from __future__ import annotations

import os
from collections.abc import Iterable


def format_value(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(path: str, header: Iterable[str], rows: Iterable[tuple]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")


def write_manifest(path: str, entries: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        for key, value in entries.items():
            fh.write(f"{key}={format_value(value)}\n")


def read_manifest(path: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            entries[key.strip()] = value.strip()
    return entries


def parse_kv(text: str) -> tuple[str, str]:
    """Split one ``key=value`` assignment."""
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise ValueError(f"expected key=value, got {text!r}")
    return key.strip(), value.strip()


def read_config(path: str) -> dict[str, str]:
    """Plain-text config: one ``key=value`` per line, # comments allowed."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"config file not found: {path}")
    return read_manifest(path)
