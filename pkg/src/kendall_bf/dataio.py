"""Reading paired data and sweep configs, writing result tables."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .errors import KendallBFError

MISSING_TOKENS = frozenset({"", "na", "n/a", "nan", "null", "none"})
FLOAT_FORMAT = ".12g"


class InputError(KendallBFError, ValueError):
    """Bad user input: unreadable file, malformed cell or config entry."""


@dataclass(frozen=True)
class LoadedPairs:
    xs: list[float]
    ys: list[float]
    col_x: str
    col_y: str
    dropped: int


def read_paired_csv(path: str | Path, col_x: str | None = None,
                    col_y: str | None = None) -> LoadedPairs:
    """Two numeric columns from a CSV with a header row.

    Rows missing either selected value are dropped (and counted); any other
    non-numeric cell is an error that names its line and column.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InputError(f"{path}: empty file, a header row is required")
    header = [h.strip() for h in rows[0]]
    if len(header) < 2 and (col_x is None or col_y is None):
        raise InputError(f"{path}: need at least two columns")
    cx = col_x if col_x is not None else header[0]
    cy = col_y if col_y is not None else header[1]
    idx = []
    for name in (cx, cy):
        if name not in header:
            raise InputError(f"{path}: no column named {name!r} (have {', '.join(header)})")
        idx.append(header.index(name))

    xs, ys, dropped = [], [], 0
    for line_no, row in enumerate(rows[1:], start=2):
        if not any(cell.strip() for cell in row):
            continue
        cells = []
        for name, j in zip((cx, cy), idx):
            raw = row[j].strip() if j < len(row) else ""
            if raw.lower() in MISSING_TOKENS:
                cells.append(None)
                continue
            try:
                val = float(raw)
            except ValueError:
                raise InputError(
                    f"{path}: line {line_no}, column {name!r}: non-numeric value {raw!r}"
                ) from None
            if not math.isfinite(val):
                raise InputError(f"{path}: line {line_no}, column {name!r}: non-finite value {raw!r}")
            cells.append(val)
        if None in cells:
            dropped += 1
            continue
        xs.append(cells[0])
        ys.append(cells[1])
    if len(xs) < 2:
        raise InputError(f"{path}: need at least 2 complete rows, found {len(xs)}")
    return LoadedPairs(xs, ys, cx, cy, dropped)


def format_value(v: Any) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, FLOAT_FORMAT)
    return str(v)


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def dataclass_rows(items: Iterable[Any], fields: Sequence[str]) -> list[list[Any]]:
    return [[getattr(item, f) for f in fields] for item in items]


def write_text(path: str | Path | None, text: str, stream=None) -> None:
    if path is None or str(path) == "-":
        (stream or sys.stdout).write(text)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def parse_number_list(text: str, key: str, cast=float) -> list:
    """Comma-separated values or an inclusive ``start:stop:step`` range."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(p) for p in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError("need step > 0 and stop >= start")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            vals = [round(start + i * step, 10) for i in range(count)]
        else:
            vals = [float(p) for p in text.split(",") if p.strip()]
        if cast is int:
            if any(v != int(v) for v in vals):
                raise ValueError("expected integers")
            return [int(v) for v in vals]
        return vals
    except ValueError as exc:
        raise InputError(f"config key {key!r}: cannot parse {text!r} ({exc})") from None


# config key -> (is_list, element type)
PLAN_KEYS = {
    "n_values": (True, int),
    "tau_grid": (True, float),
    "lambda_grid": (True, float),
    "kappa_grid": (True, float),
    "tau0": (False, float),
    "replicates": (False, int),
    "seed": (False, int),
    "threshold": (False, float),
}


def _coerce(key: str, value: Any) -> Any:
    is_list, cast = PLAN_KEYS[key]
    if is_list:
        if isinstance(value, str):
            return parse_number_list(value, key, cast)
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            value = [value]
        if not isinstance(value, list):
            raise InputError(f"config key {key!r}: expected a list, got {type(value).__name__}")
        out = []
        for v in value:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise InputError(f"config key {key!r}: non-numeric entry {v!r}")
            if cast is int and v != int(v):
                raise InputError(f"config key {key!r}: expected integers, got {v!r}")
            out.append(cast(v))
        return out
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            raise InputError(f"config key {key!r}: cannot parse {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"config key {key!r}: expected a number, got {value!r}")
    if cast is int:
        if value != int(value):
            raise InputError(f"config key {key!r}: expected an integer, got {value!r}")
        return int(value)
    return float(value)


def parse_config(text: str, source: str = "config") -> dict[str, Any]:
    """Sweep config as JSON (an object) or ``key = value`` lines.

    Unknown keys and unparsable values raise :class:`InputError` naming the key.
    """
    stripped = text.strip()
    raw: dict[str, Any]
    if stripped.startswith("{"):
        try:
            raw = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InputError(f"{source}: invalid JSON ({exc})") from None
        if not isinstance(raw, dict):
            raise InputError(f"{source}: JSON config must be an object")
    else:
        raw = {}
        for line_no, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{source}: line {line_no}: expected key = value, got {line!r}")
            key, value = (p.strip() for p in line.split("=", 1))
            if not key:
                raise InputError(f"{source}: line {line_no}: empty key")
            raw[key] = value
    out = {}
    for key, value in raw.items():
        if key not in PLAN_KEYS:
            raise InputError(f"{source}: unknown config key {key!r}")
        out[key] = _coerce(key, value)
    return out


def to_jsonable(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def dumps_json(obj: Any) -> str:
    """Stable JSON; floats are written with Python's round-trip repr."""
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=True) + "\n"
