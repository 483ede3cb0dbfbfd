"""Report rendering: human tables, CSV and JSON with a single output writer."""

from __future__ import annotations

import csv
import io
import json
import math


def sig(x, digits: int = 6) -> str:
    """Six significant digits (or fewer), the human-report number format."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return f"{x:.{digits}g}"


def table(rows: list[dict], columns: list[str] | None = None) -> str:
    """Fixed-width text table."""
    if not rows:
        return "(no rows)\n"
    columns = columns or list(rows[0])
    cells = [[sig(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths)),
             "  ".join("-" * w for w in widths)]
    for row in cells:
        lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def to_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    columns = columns or list(rows[0])
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({c: sig(r.get(c), 17) if isinstance(r.get(c), float) else r.get(c) for c in columns})
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def to_json(payload) -> str:
    return json.dumps(_jsonable(payload), indent=1, sort_keys=False)


def render(rows: list[dict], fmt: str, columns: list[str] | None = None, title: str | None = None) -> str:
    if fmt == "csv":
        return to_csv(rows, columns)
    if fmt == "json":
        return to_json(rows if columns is None else [{c: r.get(c) for c in columns} for r in rows]) + "\n"
    head = f"{title}\n" if title else ""
    return head + table(rows, columns)
