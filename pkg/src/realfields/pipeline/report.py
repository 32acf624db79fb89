"""Serialization of classification reports (JSON document or CSV table)."""

from __future__ import annotations

import csv
import io
import json

from .classify import ClassificationReport, FieldRecord

FORMATS = ("json", "csv")
_CSV_FIELDS = ["label", "degree", "disc", "poly", "source", "stage", "passed", "counterexample", "certificate"]
_JSON_CELLS = ("poly", "counterexample", "certificate")


def _document(report: ClassificationReport) -> dict:
    return {
        "degree": report.degree,
        "pythagoras": report.pythagoras,
        "summary": report.summary,
        "biquadratic": report.biquadratic,
        "records": [r.to_json() for r in report.sorted_records()],
    }


def emit_report(report: ClassificationReport, fmt: str = "json") -> bytes:
    """Records in (disc, label) order; `fmt` is json or csv."""
    if fmt == "json":
        return (json.dumps(_document(report), sort_keys=True, indent=1) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for r in report.sorted_records():
            row = r.to_json()
            for k in _JSON_CELLS:
                row[k] = json.dumps(row[k], sort_keys=True)
            row["passed"] = int(row["passed"])
            w.writerow(row)
        return buf.getvalue().encode()
    raise ValueError(f"unknown report format {fmt!r} (expected one of {', '.join(FORMATS)})")


def emit_jsonl(report: ClassificationReport) -> str:
    """One JSON record per field followed by a summary record."""
    lines = [json.dumps({"type": "field", **r.to_json()}, sort_keys=True) for r in report.sorted_records()]
    tail = {"type": "summary", "degree": report.degree, "pythagoras": report.pythagoras, **report.summary}
    if report.biquadratic:
        tail["biquadratic"] = report.biquadratic
    lines.append(json.dumps(tail, sort_keys=True))
    return "\n".join(lines) + "\n"


def parse_report(data: bytes, fmt: str = "json") -> ClassificationReport:
    text = data.decode() if isinstance(data, (bytes, bytearray)) else data
    if fmt == "json":
        doc = json.loads(text)
        return ClassificationReport(
            doc.get("degree"),
            doc.get("pythagoras"),
            [FieldRecord.from_json(r) for r in doc.get("records", [])],
            doc.get("biquadratic", {}),
        )
    if fmt == "csv":
        recs = []
        for row in csv.DictReader(io.StringIO(text)):
            for k in _JSON_CELLS:
                row[k] = json.loads(row[k])
            row["degree"] = int(row["degree"])
            row["disc"] = int(row["disc"])
            row["passed"] = bool(int(row["passed"]))
            recs.append(FieldRecord.from_json(row))
        degree = recs[0].degree if recs else None
        return ClassificationReport(degree, None, recs)
    raise ValueError(f"unknown report format {fmt!r} (expected one of {', '.join(FORMATS)})")
