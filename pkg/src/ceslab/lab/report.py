"""Report serialisation: json, csv and text with a fixed field order."""
from __future__ import annotations

import csv
import io
import json

from ..spaces import SpaceError
from .core import Report, _clean

CASE_FIELDS = ("name", "status", "observed", "bound", "tolerance", "paperRef", "witness", "detail")
CSV_FIELDS = ("suite", "seed") + CASE_FIELDS


def report_dict(report: Report) -> dict:
    """Plain-data view in schema order."""
    return {
        "suite": report.suite,
        "seed": report.seed,
        "config": _clean(report.config),
        "cases": [{k: _clean(getattr(c, k)) for k in CASE_FIELDS} for c in report.cases],
        "summary": report.summary,
        "elapsedSeconds": _clean(report.elapsedSeconds),
    }


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, allow_nan=False, separators=(",", ":"))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_report(report: Report, fmt: str = "json") -> bytes:
    """Serialise ``report``; ``fmt`` is one of json, csv, text."""
    d = report_dict(report)
    if fmt == "json":
        return (json.dumps(d, indent=2, allow_nan=False) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for c in d["cases"]:
            w.writerow([d["suite"], d["seed"]] + [_cell(c[k]) for k in CASE_FIELDS])
        return buf.getvalue().encode()
    if fmt == "text":
        lines = [f"suite {d['suite']}  seed {d['seed']}"]
        width = max([len(c["name"]) for c in d["cases"]] + [4])
        for c in d["cases"]:
            lines.append(f"  {c['status'].upper():7s} {c['name']:<{width}}  observed={_cell(c['observed'])}"
                         f"  bound={_cell(c['bound'])}  [{c['paperRef']}]")
        s = d["summary"]
        lines.append(f"pass {s['pass']}  fail {s['fail']}  flagged {s['flagged']}")
        if d["elapsedSeconds"] is not None:
            lines.append(f"elapsed {d['elapsedSeconds']:.2f}s")
        return ("\n".join(lines) + "\n").encode()
    raise SpaceError(f"unsupported format {fmt!r}")


def read_csv_records(data: bytes) -> list[dict]:
    return list(csv.DictReader(io.StringIO(data.decode())))
