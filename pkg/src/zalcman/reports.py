"""CSV/JSON report writing with lossless float formatting."""
from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import math
import sys
from typing import Any, Iterable, Optional, Sequence, TextIO

from . import __version__


def fmt(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return "%.17g" % x
    return str(x)


def _clean(obj):
    """Make report payloads JSON-safe (non-finite floats become strings)."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return fmt(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def header_line(command: str) -> str:
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return f"# zalcman {__version__} {command} generated {stamp}\n"


def write_csv(
    stream: TextIO,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    command: str = "",
    deterministic: bool = False,
) -> None:
    if not deterministic:
        stream.write(header_line(command))
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])


def write_json(stream: TextIO, payload: dict, command: str = "", deterministic: bool = False) -> None:
    doc = dict(payload)
    if not deterministic:
        doc = {"generated": header_line(command)[2:].strip(), **doc}
    json.dump(_clean(doc), stream, indent=2, allow_nan=False)
    stream.write("\n")


def rows_to_dicts(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> list[dict]:
    return [dict(zip(columns, row)) for row in rows]


def read_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def open_output(path: Optional[str]):
    if path is None or path == "-":
        return _NoClose(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="")


class _NoClose:
    def __init__(self, stream):
        self._s = stream

    def __enter__(self):
        return self._s

    def __exit__(self, *exc):
        self._s.flush()
        return False
