"""CSV/JSON table output.  Values are rendered with :func:`numeric.render`, so
exact results come out as "a/b" and floats with 15 significant digits."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

from .numeric import render


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    if v is None:
        return ""
    return render(v)


def format_table(header: Sequence[str], rows: Iterable[Sequence], fmt: str = "csv") -> str:
    cells: List[List[str]] = [[_cell(v) for v in row] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(cells)
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([dict(zip(header, row)) for row in cells], indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit(text: str, out: Optional[str], stream) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        stream.write(text)
