"""Delimited and JSON output for the command line.

Floats are written with 17 significant digits (lossless for binary64) and
infinities as ``inf``; integers are written as integers. Parsing an emitted
CSV file with :func:`read_csv` and writing it again reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from typing import List, Sequence

from .extended import format_ext, parse_ext

_INT_RE = re.compile(r"^[+-]?\d+$")


@dataclass
class Table:
    columns: Sequence[str]
    rows: List[Sequence] = field(default_factory=list)

    def append(self, *row):
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} cells, table has {len(self.columns)} columns")
        self.rows.append(tuple(row))

    def records(self):
        return [dict(zip(self.columns, r)) for r in self.rows]


def _cell(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format_ext(v)
    return str(v)


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _parse_cell(text):
    if _INT_RE.match(text):
        return int(text)
    try:
        return parse_ext(text)
    except ValueError:
        return text


def read_csv(text: str) -> Table:
    reader = csv.reader(io.StringIO(text))
    columns = next(reader)
    return Table(columns, [tuple(_parse_cell(c) for c in row) for row in reader])


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def _dump(v) -> str:
    return json.dumps(_json_value(v), allow_nan=False, separators=(", ", ": "))


def _dump_records(records, indent) -> str:
    if not records:
        return "[]"
    pad = " " * (indent + 2)
    return "[\n" + ",\n".join(pad + _dump(r) for r in records) + "\n" + " " * indent + "]"


def to_json(payload) -> str:
    """Serialize tables (one record per line) and plain values; ``inf`` as a string."""
    if isinstance(payload, Table):
        return _dump_records(payload.records(), 0) + "\n"
    if isinstance(payload, dict):
        parts = []
        for k, v in payload.items():
            if isinstance(v, Table):
                body = _dump_records(v.records(), 2)
            elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
                body = _dump_records(v, 2)
            else:
                body = _dump(v)
            parts.append(f"  {_dump(k)}: {body}")
        return "{\n" + ",\n".join(parts) + "\n}\n"
    return _dump(payload) + "\n"
