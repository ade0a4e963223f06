"""Byte-stable CSV/JSON output helpers and run manifests."""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

SIGNIFICANT_DIGITS = 12


def format_number(x) -> str:
    """Locale-independent text for one value.

    Integers print as integers. Floats carry 12 significant digits, in
    scientific notation when ``0 < |x| < 1e-4`` and fixed notation otherwise.
    """
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return repr(x)
    if x == 0.0:
        x = 0.0  # drops the sign of -0.0
        return f"{x:.{SIGNIFICANT_DIGITS - 1}f}"
    ax = abs(x)
    if ax < 1e-4:
        return f"{x:.{SIGNIFICANT_DIGITS - 1}e}"
    exponent = math.floor(math.log10(ax))
    decimals = max(0, SIGNIFICANT_DIGITS - 1 - exponent)
    return f"{x:.{decimals}f}"


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_number(v) for v in row))
    return "\n".join(lines) + "\n"


def atomic_write(path, text: str) -> Path:
    """Write ``text`` to ``path`` through a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(path, config: dict, files, version: str, wall_time: float) -> Path:
    entries = [{"path": Path(f).name, "sha256": sha256_file(f)} for f in files]
    doc = {
        "tool": "spinchan",
        "version": version,
        "config": config,
        "wall_time_s": round(wall_time, 6),
        "files": entries,
    }
    return atomic_write(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def validate_manifest(path) -> bool:
    """True when every file listed in the manifest exists with its checksum."""
    path = Path(path)
    doc = json.loads(path.read_text())
    for entry in doc["files"]:
        target = path.parent / entry["path"]
        if not target.exists() or sha256_file(target) != entry["sha256"]:
            return False
    return True
