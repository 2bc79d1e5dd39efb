"""Atomic artifact writing and JSON helpers."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(data, indent: int | None = 2) -> str:
    return json.dumps(data, indent=indent, default=_default, sort_keys=False) + "\n"


def write_text(path, text: str) -> Path:
    """Write ``text`` to ``path`` via a temporary file and rename.

    A reader never sees a half-written file: either the old contents or
    the complete new ones.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_json(path, data) -> Path:
    return write_text(path, dumps(data))


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
