"""CSV and JSON writers with locale-independent, deterministic output."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

__all__ = ["SCHEMA_VERSION", "clean", "format_value", "csv_text", "json_text", "write_csv", "write_json"]

SCHEMA_VERSION = 1


def clean(obj):
    """Convert numpy scalars, tuples and non-finite floats to plain JSON values.

    Infinities become the strings ``"inf"``/``"-inf"`` and NaN becomes ``None``.
    """
    if isinstance(obj, Mapping):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def format_value(v) -> str:
    if isinstance(v, (np.floating, float)):
        return repr(float(v))
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return str(int(v))
    return str(v)


def csv_text(rows: Iterable[Mapping], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(row[c]) for c in columns])
    return buf.getvalue()


def json_text(payload: Mapping, kind: Optional[str] = None) -> str:
    body = {"schema": SCHEMA_VERSION}
    if kind is not None:
        body["kind"] = kind
    body.update(clean(payload))
    return json.dumps(body, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_csv(path, rows: Iterable[Mapping], columns: Sequence[str]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(rows, columns), encoding="utf-8")
    return path


def write_json(path, payload: Mapping, kind: Optional[str] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json_text(payload, kind), encoding="utf-8")
    return path
