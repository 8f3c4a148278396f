"""JSON and CSV output of scan reports, and reading the CSV back."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import fields
from pathlib import Path

from .conj25 import Report, ReportRow
from .star import StarRow, star_summary

SCHEMA_VERSION = 1

ROW_TYPES = {"conj25": ReportRow, "table1": ReportRow, "star": StarRow}


def _row_class(rep: Report):
    return ROW_TYPES.get(rep.kind, ReportRow)


def header(rep: Report) -> list[str]:
    return [f.name for f in fields(_row_class(rep))]


def summary(rep: Report) -> dict:
    return star_summary(rep) if rep.kind == "star" else rep.summary


def to_json(rep: Report) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": rep.kind,
        "config": rep.config,
        "fields": header(rep),
        "rows": [r.as_dict() for r in rep.rows],
        "skipped": [{"label": s.label, "D": s.D, "reason": s.reason} for s in rep.skipped],
        "summary": summary(rep),
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def to_csv(rep: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = header(rep)
    w.writerow(cols)
    for r in rep.rows:
        d = r.as_dict()
        w.writerow([_cell(d[c]) for c in cols])
    return buf.getvalue()


def emit(rep: Report, fmt: str = "json", path=None) -> str:
    """Render the report; write it to path when given.  Returns the text."""
    if fmt == "json":
        text = to_json(rep)
    elif fmt == "csv":
        text = to_csv(rep)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def _parse(value: str, typ):
    typ = str(typ)
    if typ.startswith("bool"):
        return None if value == "" else value == "true"
    if typ.startswith("int"):
        return None if value == "" else int(value)
    if "None" in typ and value == "":
        return None
    return value


def read_csv(text: str, kind: str = "conj25") -> list:
    """Rows of an emitted CSV as row objects of the given report kind."""
    cls = ROW_TYPES[kind]
    types = {f.name: f.type for f in fields(cls)}
    rd = csv.reader(io.StringIO(text))
    cols = next(rd, None)
    if cols is None:
        return []
    if cols != list(types):
        raise ValueError("CSV header does not match the row schema")
    return [cls(**{c: _parse(v, types[c]) for c, v in zip(cols, line)}) for line in rd]

