"""CSV and JSON report emission."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import List, Optional, Sequence

from .bench import ReportRow, VectorRecord

COLUMNS = ("mode", "count", "avg_sw_cycles", "avg_hw_cycles", "avg_total", "speedup_vs_software")
RECORD_COLUMNS = ("id", "category", "mode", "sw_cycles", "hw_cycles", "total",
                  "result", "flags", "authoritative", "error")


def fixed(value: Optional[Fraction], places: int) -> str:
    """Exact half-even decimal rendering of a rational."""
    if value is None:
        return "n/a"
    scaled = round(Fraction(value) * 10 ** places)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    if not places:
        return sign + digits
    return "%s%s.%s" % (sign, digits[:-places], digits[-places:])


def _row_fields(row: ReportRow, clock_hz: Optional[float]) -> List[str]:
    out = [row.mode.value, str(row.count), fixed(row.avg_sw_cycles, 6), fixed(row.avg_hw_cycles, 6),
           fixed(row.avg_total, 6), fixed(row.speedup_vs_software, 2)]
    if clock_hz:
        out.append(fixed(row.avg_total / Fraction(clock_hz), 12))
    return out


def _header(clock_hz: Optional[float]) -> List[str]:
    return list(COLUMNS) + (["avg_time_s"] if clock_hz else [])


def _hex(rec: VectorRecord, width: Optional[int]) -> str:
    if rec.result_bits is None:
        return ""
    return "%0*X" % (width or 0, rec.result_bits)


def render_csv(rows: Sequence[ReportRow], clock_hz: Optional[float] = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_header(clock_hz))
    for row in rows:
        w.writerow(_row_fields(row, clock_hz))
    return buf.getvalue()


def render_records_csv(records: Sequence[VectorRecord], hex_width: Optional[int] = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_COLUMNS)
    for r in records:
        w.writerow([r.id, r.category, r.mode.value, r.sw_cycles, r.hw_cycles, r.total,
                    _hex(r, hex_width), "|".join(r.flags.names()), int(r.authoritative),
                    r.error or ""])
    return buf.getvalue()


def render_json(rows: Sequence[ReportRow], records: Optional[Sequence[VectorRecord]] = None,
                clock_hz: Optional[float] = None, hex_width: Optional[int] = None) -> str:
    header = _header(clock_hz)
    doc = {"rows": []}
    for row in rows:
        item = dict(zip(header, _row_fields(row, clock_hz)))
        item["count"] = row.count
        item["errors"] = row.errors
        doc["rows"].append(item)
    if clock_hz:
        doc["clock_hz"] = clock_hz
    if records is not None:
        doc["records"] = [
            {"id": r.id, "category": r.category, "mode": r.mode.value,
             "sw_cycles": r.sw_cycles, "hw_cycles": r.hw_cycles, "total": r.total,
             "result": _hex(r, hex_width), "flags": r.flags.names(),
             "authoritative": r.authoritative, "error": r.error}
            for r in records]
    return json.dumps(doc, indent=2) + "\n"


def emit_report(rows: Sequence[ReportRow], records: Optional[Sequence[VectorRecord]], fmt: str,
                path, clock_hz: Optional[float] = None, hex_width: Optional[int] = None) -> None:
    """Write the summary as ``csv`` or ``json``.

    With CSV, records (when given) go to a sibling file ``<path>.records.csv``;
    JSON embeds them.  Averages keep six decimals and speedups two, rounded
    half-even from the exact rationals.  ``clock_hz`` adds a cycles-to-seconds
    time proxy column.
    """
    if not rows:
        raise ValueError("cannot emit an empty report")
    if fmt == "csv":
        text = render_csv(rows, clock_hz)
    elif fmt == "json":
        text = render_json(rows, records, clock_hz, hex_width)
    else:
        raise ValueError("report format must be csv or json, not %r" % fmt)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    if fmt == "csv" and records is not None:
        with open(str(path) + ".records.csv", "w", newline="") as fh:
            fh.write(render_records_csv(records, hex_width))
