"""CSV and JSON writers with fixed number formatting."""

from __future__ import annotations

import csv
import io
import json
import sys

import numpy as np


def format_number(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return "%.17g" % float(x)


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def to_json(columns, rows, meta=None) -> str:
    doc = {
        "columns": list(columns),
        "rows": [[_jsonable(v) for v in row] for row in rows],
    }
    if meta:
        doc["meta"] = meta
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def render(columns, rows, fmt: str, meta=None) -> str:
    if fmt == "json":
        return to_json(columns, rows, meta)
    return to_csv(columns, rows)


def write(text: str, path=None) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
