"""Deterministic CSV and JSON tables.

CSV layout: ``# key=value`` metadata lines, one header row, then rows of
numbers in ``.16e`` notation (17 significant digits, exact round trip).
"""
from __future__ import annotations

import json
import math

import numpy as np

__all__ = ["Table", "format_number", "to_csv", "from_csv", "to_json"]


class Table:
    def __init__(self, meta, columns):
        self.meta = [(str(k), str(v)) for k, v in meta]
        self.columns = {name: np.asarray(col, dtype=float) for name, col in columns.items()}
        sizes = {col.size for col in self.columns.values()}
        if len(sizes) > 1:
            raise ValueError("columns differ in length")

    def __len__(self):
        return next(iter(self.columns.values())).size if self.columns else 0


def format_number(value: float) -> str:
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.16e}"


def to_csv(table: Table) -> str:
    lines = [f"# {k}={v}" for k, v in table.meta]
    names = list(table.columns)
    lines.append(",".join(names))
    cols = [table.columns[n] for n in names]
    for i in range(len(table)):
        lines.append(",".join(format_number(c[i]) for c in cols))
    return "\n".join(lines) + "\n"


def from_csv(text: str) -> Table:
    meta, header, rows = [], None, []
    for line in text.splitlines():
        if header is None and line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta.append((key, value))
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise ValueError("no header row")
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return Table(meta, {name: data[:, i] for i, name in enumerate(header)})


def to_json(table: Table) -> str:
    payload = {
        "meta": dict(table.meta),
        "columns": {name: [float(v) for v in col] for name, col in table.columns.items()},
    }
    return json.dumps(payload, indent=2) + "\n"
