"""Deterministic artifact serialization and run manifests.

All floats are rounded to six significant digits before serialization,
JSON objects use sorted keys, and every file is written to a temporary
name then atomically renamed, so two runs with identical inputs and
configuration produce byte-identical artifacts.  Each pipeline stage also
writes a manifest recording its configuration, seed, and the SHA-256 of
every input and output file.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import os
from enum import Enum
from io import StringIO
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SIGNIFICANT_DIGITS",
    "round_sig",
    "format_number",
    "canonical",
    "write_json_atomic",
    "write_csv_atomic",
    "write_text_atomic",
    "sha256_file",
    "StageManifest",
]

SIGNIFICANT_DIGITS = 6


def round_sig(value: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    """Round to ``digits`` significant digits; passes zero/inf/nan through."""
    if value == 0.0 or not math.isfinite(value):
        return float(value)
    return float(f"{value:.{digits}g}")


def format_number(value: object, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Fixed-significance text form for CSV cells."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
        return f"{v:.{digits}g}"
    return str(value)


def canonical(obj: object, digits: int = SIGNIFICANT_DIGITS) -> object:
    """Recursively convert to JSON-safe types with rounded floats."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return round_sig(v, digits)
    if isinstance(obj, np.ndarray):
        return canonical(obj.tolist(), digits)
    if isinstance(obj, Enum):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: canonical(getattr(obj, f.name), digits)
            for f in dataclasses.fields(obj)
            if not f.name.startswith("_")
        }
    if isinstance(obj, dict):
        return {str(k): canonical(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [canonical(v, digits) for v in items]
    return obj


def _atomic_write_bytes(path: Path, payload: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(payload)
    os.replace(tmp, path)


def write_text_atomic(path: str | Path, text: str) -> Path:
    path = Path(path)
    _atomic_write_bytes(path, text.encode("utf-8"))
    return path


def write_json_atomic(
    path: str | Path, payload: object, digits: int = SIGNIFICANT_DIGITS
) -> Path:
    """Serialize with sorted keys, rounded floats, and atomic replace."""
    text = json.dumps(canonical(payload, digits), sort_keys=True, indent=2)
    return write_text_atomic(path, text + "\n")


def write_csv_atomic(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[Sequence[object]],
    digits: int = SIGNIFICANT_DIGITS,
) -> Path:
    """Write an RFC-4180-style CSV with deterministic number formatting."""
    buffer = StringIO()
    import csv as _csv

    writer = _csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([format_number(cell, digits) for cell in row])
    return write_text_atomic(path, buffer.getvalue())


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


class StageManifest:
    """Provenance record for one pipeline stage.

    Collects the resolved configuration, the seed, input files (hashed
    immediately) and output files (hashed when the manifest is written).
    Output paths, and input paths that live inside the output directory
    (artifacts produced by earlier stages), are stored relative to the
    output directory so manifest content does not depend on where the
    pipeline happens to run.
    """

    def __init__(self, subcommand: str, seed: int, config: dict[str, object]) -> None:
        self.subcommand = subcommand
        self.seed = seed
        self.config = config
        self.inputs: dict[str, str] = {}
        self.outputs: list[str] = []

    def add_input(self, path: str | Path, out_dir: str | Path | None = None) -> None:
        key = str(path)
        if out_dir is not None:
            try:
                key = Path(path).relative_to(out_dir).as_posix()
            except ValueError:
                pass
        self.inputs[key] = sha256_file(path)

    def add_output(self, path: Path, out_dir: Path) -> None:
        self.outputs.append(path.relative_to(out_dir).as_posix())

    def write(self, out_dir: str | Path, filename: str | None = None) -> Path:
        out_dir = Path(out_dir)
        name = filename or f"manifest_{self.subcommand}.json"
        payload = {
            "subcommand": self.subcommand,
            "seed": self.seed,
            "config": self.config,
            "inputs": self.inputs,
            "outputs": {
                rel: sha256_file(out_dir / rel) for rel in sorted(self.outputs)
            },
        }
        return write_json_atomic(out_dir / name, payload)
