"""
Reports printed by every subcommand, rendered as text, JSON or CSV.

Rendering is deterministic: identical reports render to identical bytes.
"""
import csv
import io
import json
from collections import namedtuple
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Tuple

import mpmath

from cmtaylor.arith import QuadRat, ResidueQuad, format_value


SCHEMA = "cm-taylor/1"
PASS, FAIL, DISCREPANCY = "PASS", "FAIL", "DISCREPANCY"
FORMATS = ("text", "json", "csv")

Row = namedtuple("Row", "name printed computed status")


def as_text(x: Any) -> str:
    if isinstance(x, (int, Fraction, QuadRat)) and not isinstance(x, bool):
        return format_value(x)
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(x, 30)
    if isinstance(x, (list, tuple)):
        return ", ".join(as_text(v) for v in x)
    return str(x)

def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    return as_text(x)

@dataclass
class Report:
    command: str
    rows: List[Row] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    # (exponent, coefficient) pairs of a q-expansion
    terms: List[Tuple[Any, Any]] = field(default_factory=list)

    def add(self, name: str, computed: Any, printed: Any = "", status: str = ""):
        self.rows.append(Row(name, as_text(printed), as_text(computed), status))

    def check(self, name: str, computed: Any, printed: Any, passed: bool = None, mismatch: str = FAIL):
        if passed is None:
            passed = computed == printed
        self.add(name, computed, printed, PASS if passed else mismatch)

    def exit_code(self) -> int:
        statuses = {row.status for row in self.rows}
        if FAIL in statuses:
            return 1
        if DISCREPANCY in statuses:
            return 3
        return 0

def _as_json(report: Report) -> str:
    document = dict(schema=SCHEMA, command=report.command, rows=[dict(row._asdict()) for row in report.rows],
                    data=_jsonable(report.data), notes=list(report.notes))
    if report.terms:
        document.update(terms=[[as_text(e), _jsonable(c)] for e, c in report.terms])
    return json.dumps(document, indent=2, sort_keys=True) + "\n"

def _as_csv(report: Report) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(Row._fields)
    for row in report.rows:
        writer.writerow(row)
    for exponent, coefficient in report.terms:
        writer.writerow([as_text(exponent), "", as_text(coefficient), ""])
    for key, value in report.data.items():
        writer.writerow([key, "", as_text(_jsonable(value)), ""])
    for note in report.notes:
        writer.writerow(["note", "", note, ""])
    return out.getvalue()

def _as_text(report: Report) -> str:
    lines = [f"# {report.command}"]
    lines.extend(f"{as_text(e)}\t{as_text(c)}" for e, c in report.terms)
    for row in report.rows:
        status = f"[{row.status}] " if row.status else ""
        printed = f"  (printed: {row.printed})" if row.printed else ""
        lines.append(f"{status}{row.name}: {row.computed}{printed}")
    for key, value in report.data.items():
        lines.append(f"{key}: {as_text(_jsonable(value))}")
    lines.extend(f"note: {note}" for note in report.notes)
    return "\n".join(lines) + "\n"

def render(report: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return _as_json(report)
    if fmt == "csv":
        return _as_csv(report)
    if fmt == "text":
        return _as_text(report)
    raise ValueError(f"unknown output format '{fmt}'")
