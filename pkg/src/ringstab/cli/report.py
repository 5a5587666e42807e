"""Report documents and their JSON/text renderings.

JSON schema ``ringstab-report/1``::

    {
      "schema": "ringstab-report/1",
      "tool": {"name": "ringstab", "version": str},
      "suite": str,
      "settings": {"cap": int | null, "ideal": str | null, "n": int | null, "seed": int, "spec": str},
      "rings": [
        {"name": str, "ring": str, "descriptor": {...}, "order": int, "n": int,
         "status": str, "results": [record, ...]}
      ],
      "summary": {"pass": int, "fail": int, "unverified": int, "status": str, "exit_code": int}
    }

Records are described in :mod:`ringstab.cli.suites`. Keys are sorted on output
and numbers are plain JSON integers, so equal inputs give byte-identical files.
Timings are only present when requested.
"""
import json

import numpy as np

from .. import __version__
from ..verify import FAIL, PASS, UNVERIFIED, combine

SCHEMA = "ringstab-report/1"
EXIT_CODES = {PASS: 0, FAIL: 1, UNVERIFIED: 2}


def plain(obj):
    """Convert numpy scalars/arrays, tuples and sets into JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(plain(v) for v in obj)
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def summarize(rings):
    counts = {PASS: 0, FAIL: 0, UNVERIFIED: 0}
    for r in rings:
        for rec in r["results"]:
            counts[rec["status"]] += 1
    status = combine(rec["status"] for r in rings for rec in r["results"])
    return {"pass": counts[PASS], "fail": counts[FAIL], "unverified": counts[UNVERIFIED],
            "status": status, "exit_code": EXIT_CODES[status]}


def build_report(suite, settings, rings):
    rings = [dict(r, status=combine(rec["status"] for rec in r["results"])) for r in rings]
    return plain({"schema": SCHEMA, "tool": {"name": "ringstab", "version": __version__}, "suite": suite,
                  "settings": settings, "rings": rings, "summary": summarize(rings)})


def exit_code(report):
    return EXIT_CODES[report["summary"]["status"]]


def to_json(report):
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _fmt(value):
    return json.dumps(value, sort_keys=True, ensure_ascii=False)


def to_text(report):
    lines = [f"ringstab {report['tool']['version']}  suite={report['suite']}  schema={report['schema']}"]
    for r in report["rings"]:
        lines.append(f"[{r['status'].upper()}] ring {r['name']} = {r['ring']} (order {r['order']}, n={r['n']})")
        for rec in r["results"]:
            line = f"  {rec['status']:<10} {rec['suite']}/{rec['check']}"
            if "timing_s" in rec:
                line += f"  ({rec['timing_s']:.3f}s)"
            lines.append(line)
            if rec["check"] != "classification":
                for k, v in sorted(rec["details"].items()):
                    lines.append(f"      {k}: {_fmt(v)}")
            else:
                d = rec["details"]
                lines.append(f"      verdict: {d['verdict']}")
                lines.append(f"      predicates: {_fmt(d['predicates'])}")
                for k, v in sorted(d["implications"].items()):
                    lines.append(f"      {k}: {v}")
            if "witness" in rec:
                lines.append(f"      witness: {_fmt(rec['witness'])}")
    s = report["summary"]
    lines.append(f"summary: {s['pass']} pass, {s['fail']} fail, {s['unverified']} unverified -> {s['status']}")
    return "\n".join(lines) + "\n"


def emit_report(report, fmt="json", out=None):
    """Render ``report`` and write it to ``out`` (path or stream); returns the text."""
    if fmt == "json":
        text = to_json(report)
    elif fmt == "text":
        text = to_text(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is None:
        return text
    if hasattr(out, "write"):
        out.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
