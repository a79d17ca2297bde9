"""Atomic JSON and CSV writers for command outputs."""
import csv
import json
import logging
import os
import tempfile
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np

from orbitlab import __version__

logger = logging.getLogger(__name__)


def envelope(command: str, digest: str, body: Dict[str, Any]) -> Dict[str, Any]:
    """Wrap a command result with the library version and config digest."""
    return {
        "command": command,
        "orbitlab_version": __version__,
        "config_digest": digest,
        **body,
    }


def _atomic_write(path: str, write) -> str:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            write(f)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    logger.debug(f"Wrote {path}")
    return path


def to_jsonable(value: Any) -> Any:
    """json.dumps default hook for numpy scalars and arrays."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_json(path: str, payload: Dict[str, Any]) -> str:
    """Write canonical JSON (sorted keys, two-space indent, trailing newline)."""
    text = json.dumps(payload, sort_keys=True, indent=2, default=to_jsonable) + "\n"
    return _atomic_write(path, lambda f: f.write(text))


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Write a header row and data rows with '\\n' line endings; missing values are empty cells."""
    rows = [[_cell(v) for v in row] for row in rows]

    def write(f):
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)

    return _atomic_write(path, write)


def output_path(out_dir: str, name: str, suffix: Optional[str] = None) -> str:
    return os.path.join(out_dir, name if suffix is None else f"{name}.{suffix}")
