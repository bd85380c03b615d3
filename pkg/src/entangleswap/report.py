"""Deterministic JSON and CSV emitters.

Floats are written with 17 significant digits so every double survives a
round trip; complex numbers become ``[real, imag]`` pairs.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

SCHEMA_VERSION = 1


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def plain(obj):
    """Convert numpy scalars/arrays and complex values to JSON-able Python."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps_json(obj, indent: int = 2) -> str:
    return _encode(plain(obj), 0, indent) + "\n"


def _encode(v, level, indent):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(x, level + 1, indent)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, list):
        if not v:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in v):
            return "[" + ", ".join(_encode(x, level, indent) for x in v) + "]"
        return "[\n" + ",\n".join(pad + _encode(x, level + 1, indent) for x in v) + "\n" + end + "]"
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, float):
        return fmt_float(v)
    return json.dumps(v)


def _cell(v):
    v = plain(v)
    if isinstance(v, list):
        return " ".join(_cell(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    if v is None:
        return ""
    return str(v)


def dumps_csv(rows, columns) -> str:
    """RFC 4180 CSV: header row, CRLF line ends, minimal quoting."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()
