"""Run records: assertions, tables and their JSON/CSV serialization."""

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

PASS_VERDICT = "pass"
FAIL_VERDICT = "fail"
NEGATIVE_CONFIRMED = "negative control confirmed"
NEGATIVE_MISSED = "negative control not confirmed"


@dataclass
class Assertion:
    name: str
    anchor: str
    measured: Any
    threshold: Any
    verdict: bool

    def as_dict(self):
        return {
            "name": self.name,
            "anchor": self.anchor,
            "measured": self.measured,
            "threshold": self.threshold,
            "verdict": "pass" if self.verdict else "fail",
        }


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError("row width does not match the columns")
        self.rows.append(list(values))


@dataclass
class RunRecord:
    suite: str
    anchor: str
    version: str
    config: dict
    mode: str
    assertions: list
    diagnostics: list
    table: Table
    notes: list
    duration: float = 0.0
    utc: str = ""

    @property
    def passed(self):
        return all(a.verdict for a in self.assertions)

    @property
    def status(self):
        return 0 if self.passed else 1

    @property
    def verdict(self):
        if self.mode == "expect-fail":
            return NEGATIVE_CONFIRMED if self.passed else NEGATIVE_MISSED
        return PASS_VERDICT if self.passed else FAIL_VERDICT

    def as_dict(self, timestamp=True):
        out = {
            "suite": self.suite,
            "anchor": self.anchor,
            "version": self.version,
            "config": self.config,
            "mode": self.mode,
            "verdict": self.verdict,
            "status": self.status,
            "assertions": [a.as_dict() for a in self.assertions],
            "diagnostics": [a.as_dict() for a in self.diagnostics],
            "notes": list(self.notes),
            "table": {"columns": list(self.table.columns), "rows": self.table.rows},
        }
        if timestamp:
            out["timestamp"] = {"utc": self.utc, "duration_s": self.duration}
        return out

    def to_json(self, timestamp=True):
        return dumps(self.as_dict(timestamp))


def encode(value):
    """JSON-ready form: complex as ``[re, im]``, numpy scalars and arrays unwrapped."""
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, np.ndarray):
        return [encode(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (complex, np.complexfloating)):
        return [encode(float(value.real)), encode(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if np.isnan(v):
            return "nan"
        if np.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return value


def dumps(obj):
    return json.dumps(encode(obj), indent=2, ensure_ascii=False) + "\n"


def strip_timestamp(text):
    """Report text without the ``timestamp`` object (for determinism checks)."""
    data = json.loads(text)
    data.pop("timestamp", None)
    return json.dumps(data, indent=2, ensure_ascii=False)


def _csv_cell(v):
    v = encode(v)
    if isinstance(v, list):
        return json.dumps(v)
    return v


def table_csv(table):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()
