"""CSV schemas produced by the propagation CLI.

Two layouts:

* fig1: header ``deg,t<t1>,t<t2>,...`` — one row per truncation degree,
  one distance column per time horizon.
* fig2: header ``time,U<u>ell<l>,...`` — one row per time step, one
  hole-density column per (interaction strength, truncation degree) cell.

Lines starting with ``#`` are comments (config echo) and are skipped.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass

__all__ = ["SchemaError", "Fig1Data", "Fig2Data", "read_fig1_csv", "read_fig2_csv"]

_FIG1_COL = re.compile(r"t\d+(\.\d+)?$")
_FIG2_COL = re.compile(r"U(\d+(\.\d+)?)ell(\d+)$")


class SchemaError(ValueError):
    """Input CSV does not match the expected column layout."""


def _read_rows(path: str) -> list[list[str]]:
    with open(path, newline="") as f:
        rows = [r for r in csv.reader(f) if r and not r[0].startswith("#")]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


@dataclass(frozen=True)
class Fig1Data:
    times: tuple[str, ...]  # column labels, e.g. ("t0.2", "t0.4")
    degrees: tuple[int, ...]
    distances: dict[str, tuple[float, ...]]  # per time column, one per degree


@dataclass(frozen=True)
class Fig2Data:
    times: tuple[float, ...]
    columns: tuple[str, ...]  # e.g. ("U0.0ell4", ...)
    u_of: dict[str, float]
    ell_of: dict[str, int]
    series: dict[str, tuple[float, ...]]


def read_fig1_csv(path: str) -> Fig1Data:
    rows = _read_rows(path)
    header = rows[0]
    if not header or header[0] != "deg":
        raise SchemaError(f"{path}: missing column 'deg' (got {header[:1] or 'nothing'})")
    bad = [c for c in header[1:] if not _FIG1_COL.match(c)]
    if bad:
        raise SchemaError(f"{path}: unexpected columns {bad}, expected t<time>")
    if len(header) < 2:
        raise SchemaError(f"{path}: missing time columns after 'deg'")
    degrees = []
    dists: dict[str, list[float]] = {c: [] for c in header[1:]}
    for row in rows[1:]:
        if len(row) != len(header):
            raise SchemaError(f"{path}: row has {len(row)} fields, header has {len(header)}")
        degrees.append(int(row[0]))
        for c, v in zip(header[1:], row[1:]):
            dists[c].append(float(v))
    return Fig1Data(
        tuple(header[1:]), tuple(degrees),
        {c: tuple(v) for c, v in dists.items()},
    )


def read_fig2_csv(path: str) -> Fig2Data:
    rows = _read_rows(path)
    header = rows[0]
    if not header or header[0] != "time":
        raise SchemaError(f"{path}: missing column 'time' (got {header[:1] or 'nothing'})")
    bad = [c for c in header[1:] if not _FIG2_COL.match(c)]
    if bad:
        raise SchemaError(f"{path}: unexpected columns {bad}, expected U<u>ell<l>")
    if len(header) < 2:
        raise SchemaError(f"{path}: missing data columns after 'time'")
    u_of, ell_of = {}, {}
    for c in header[1:]:
        m = _FIG2_COL.match(c)
        u_of[c] = float(m.group(1))
        ell_of[c] = int(m.group(3))
    times = []
    series: dict[str, list[float]] = {c: [] for c in header[1:]}
    for row in rows[1:]:
        if len(row) != len(header):
            raise SchemaError(f"{path}: row has {len(row)} fields, header has {len(header)}")
        times.append(float(row[0]))
        for c, v in zip(header[1:], row[1:]):
            series[c].append(float(v))
    return Fig2Data(
        tuple(times), tuple(header[1:]), u_of, ell_of,
        {c: tuple(v) for c, v in series.items()},
    )
