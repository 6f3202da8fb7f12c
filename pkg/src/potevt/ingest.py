"""
Loading and validating loss series from CSV text.

Values are parsed as plain decimal text (scientific notation allowed). Lines
starting with ``#`` are comments; a first row whose value column is not a
number is treated as a header. Timestamps in the two-column format are kept
as opaque strings and never interpreted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import InputError

_DECIMAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")

FORMATS = {"single": "single", "single-column": "single", "ts": "ts", "timestamp-value": "ts"}
SIGNS = ("as-is", "negate")


@dataclass(frozen=True)
class LossSeries:
    """Finite observations in loss units (larger is worse), kept in source order."""

    values: np.ndarray
    label: str = ""
    timestamps: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        arr = np.array(self.values, dtype=float).ravel()
        if arr.size < 1:
            raise InputError("a loss series needs at least one observation")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise InputError(f"non-finite value at position {bad}")
        if self.timestamps is not None and len(self.timestamps) != arr.size:
            raise InputError("timestamps and values differ in length")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def negated(self) -> "LossSeries":
        return LossSeries(-self.values, self.label, self.timestamps)


def parse_series(text: str, format: str = "single", sign: str = "as-is",
                 label: str = "") -> LossSeries:
    """Parse CSV text into a :class:`LossSeries`.

    Raises
    ------
    InputError
        On a malformed row (the message names the 1-based line number) or
        when no data rows are present.
    """
    try:
        fmt = FORMATS[format]
    except KeyError:
        raise InputError(f"unknown format {format!r}; expected one of {sorted(FORMATS)}") from None
    if sign not in SIGNS:
        raise InputError(f"unknown sign {sign!r}; expected one of {SIGNS}")

    rows = _fast_rows(text, fmt)
    if rows is not None:
        stamps, arr = rows
    else:
        stamps, arr = _slow_rows(text, fmt)
    if arr.size == 0:
        raise InputError("no data rows found")
    if sign == "negate":
        arr = -arr
    return LossSeries(arr, label, tuple(stamps) if fmt == "ts" else None)


def _fast_rows(text: str, fmt: str):
    # vectorized parse; None means "fall back to the line-by-line parser"
    if not text.isascii():
        return None
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if fmt == "single":
        stamps, cells = None, lines
    else:
        parts = [ln.split(",") for ln in lines]
        if any(len(p) != 2 for p in parts):
            return None
        stamps = [p[0].strip() for p in parts]
        cells = [p[1].strip() for p in parts]
    if cells and _DECIMAL.fullmatch(cells[0]) is None:
        cells = cells[1:]
        stamps = stamps[1:] if stamps is not None else None
    if any("_" in c for c in cells):
        return None
    try:
        arr = np.array(cells, dtype=float)
    except ValueError:
        return None
    if not np.all(np.isfinite(arr)):
        return None
    return stamps, arr


def _slow_rows(text: str, fmt: str):
    values = []
    stamps = []
    seen_row = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if fmt == "single":
            stamp, cell = None, line
        else:
            parts = line.split(",")
            if len(parts) != 2:
                raise InputError(f"line {lineno}: expected 'timestamp,value', got {raw!r}")
            stamp, cell = parts[0].strip(), parts[1].strip()
        if _DECIMAL.fullmatch(cell) is None:
            if not seen_row:
                seen_row = True
                continue  # header
            raise InputError(f"line {lineno}: value {cell!r} is not a decimal number")
        seen_row = True
        v = float(cell)
        if not np.isfinite(v):
            raise InputError(f"line {lineno}: value {cell!r} overflows to infinity")
        values.append(v)
        stamps.append(stamp)

    return stamps, np.asarray(values, dtype=float)


def load_series(path, format: str = "single", sign: str = "as-is") -> LossSeries:
    """Read a CSV file of losses (or returns, with ``sign="negate"``)."""
    path = Path(path)
    try:
        text = path.read_bytes().decode("utf-8-sig")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_series(text, format=format, sign=sign, label=path.stem)


def format_values(values: Sequence[float]) -> str:
    # repr gives the shortest string that round-trips exactly
    return "".join(f"{float(v)!r}\n" for v in values)


def write_series(series: LossSeries, path) -> None:
    """Write values in single-column format; :func:`load_series` reads them back exactly."""
    Path(path).write_text(format_values(series.values), encoding="utf-8")
