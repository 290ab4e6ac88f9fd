"""Experiment reports and their JSON / CSV serialisation.

JSON schema (keys always in this order)::

    {
      "experiment_name": str,
      "provenance": str,            # result this experiment reproduces
      "parameters": {...},          # full effective config, defaults included
      "seeds": [int, ...],
      "rows": [{...}, ...],         # one metric record per sweep point / trial
      "summary": {...},             # aggregate metrics used by the predicate
      "passed": bool,               # acceptance predicate
      "wall_time": float            # seconds; excluded from determinism checks
    }
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["ExperimentReport", "emit_report", "to_json", "to_csv", "from_json"]

_FIELDS = ("experiment_name", "provenance", "parameters", "seeds", "rows", "summary", "passed", "wall_time")


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    return v


@dataclass
class ExperimentReport:
    experiment_name: str
    provenance: str
    parameters: dict
    seeds: list
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    passed: bool = False
    wall_time: float = 0.0

    def as_dict(self):
        return {f: _plain(getattr(self, f)) for f in _FIELDS}

    def columns(self):
        cols = []
        for row in self.rows:
            for k in row:
                if k not in cols:
                    cols.append(k)
        return cols


def to_json(report: ExperimentReport, include_wall_time=True):
    d = report.as_dict()
    if not include_wall_time:
        d.pop("wall_time")
    return json.dumps(d, indent=2) + "\n"


def from_json(text):
    d = json.loads(text)
    return ExperimentReport(**{f: d[f] for f in _FIELDS if f in d})


def to_csv(report: ExperimentReport):
    buf = io.StringIO()
    buf.write(f"# experiment: {report.experiment_name}\n")
    buf.write(f"# provenance: {report.provenance}\n")
    buf.write(f"# parameters: {json.dumps(_plain(report.parameters))}\n")
    buf.write(f"# seeds: {json.dumps(_plain(report.seeds))}\n")
    buf.write(f"# passed: {str(bool(report.passed)).lower()}\n")
    cols = report.columns()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for row in report.rows:
        w.writerow({k: _plain(v) for k, v in row.items()})
    return buf.getvalue()


def emit_report(report: ExperimentReport, fmt="json", path=None):
    """Write the report to ``path`` (or return the text when ``path`` is None)."""
    if fmt == "json":
        text = to_json(report)
    elif fmt == "csv":
        text = to_csv(report)
    else:
        raise ValueError(f"format must be 'json' or 'csv', got {fmt!r}")
    if path is None or str(path) == "-":
        return text
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror}") from exc
    return text
