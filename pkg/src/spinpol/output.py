"""CSV and JSON emission of scenario records."""
from __future__ import annotations

import io
import json
import sys
from pathlib import Path
from typing import Sequence

from .scenarios import TimeSeriesRecord

FORMATS = ("csv", "json")


def format_number(x: float) -> str:
    """12 significant digits, locale independent, no negative zero."""
    s = f"{float(x):.12g}"
    return "0" if s == "-0" else s


def rows_of(records: Sequence[TimeSeriesRecord], layout: str = "timeseries") -> list[dict[str, float]]:
    return [r.row(layout) for r in records]


def render(records: Sequence[TimeSeriesRecord], fmt: str = "csv", layout: str = "timeseries") -> str:
    if not records:
        raise ValueError("no records to emit")
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    rows = rows_of(records, layout)
    header = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(format_number(row[k]) for k in header) + "\n")
        return buf.getvalue()
    objs = [{k: float(format_number(row[k])) for k in header} for row in rows]
    return json.dumps(objs, indent=1) + "\n"


def emit(
    records: Sequence[TimeSeriesRecord],
    fmt: str = "csv",
    destination: str | Path | None = None,
    layout: str = "timeseries",
) -> None:
    """Write records to ``destination`` (a path) or standard output (``None`` or ``-``)."""
    text = render(records, fmt, layout)
    if destination is None or str(destination) == "-":
        sys.stdout.write(text)
        return
    path = Path(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
