"""JSON/CSV report writers and worst-trial re-verification.

Floats are written with Python's shortest round-trip repr, so every
64-bit value reloads bit-identically.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .runner import SuiteReport, TrialConfig
from .suites import evaluate, instance_from_json

CSV_HEADER = ("suite", "dim", "sub_seed", "lambda", "p", "min_gap", "passed")
REPRODUCE_ATOL = 1e-12


def report_to_dict(report: SuiteReport, timing: bool = True) -> dict:
    """Report as a JSON-ready dict; ``timing=False`` writes ``runtime_ms`` as null
    so that reruns compare byte for byte."""
    return {
        "config": None if report.config is None else report.config.to_dict(),
        "trials": [t.to_json() for t in report.trials],
        "aggregate": report.aggregate(),
        "runtime_ms": round(report.runtime_ms, 3) if timing else None,
    }


def dumps(report: SuiteReport, timing: bool = True) -> str:
    return json.dumps(report_to_dict(report, timing), indent=1, allow_nan=False) + "\n"


def to_csv(report: SuiteReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    suite = report.config.suite if report.config else ""
    for t in report.trials:
        writer.writerow(
            [
                suite,
                t.dim,
                t.sub_seed,
                "" if t.lam is None else repr(t.lam),
                "" if t.p is None else repr(t.p),
                repr(t.min_gap),
                "true" if t.passed else "false",
            ]
        )
    return buf.getvalue()


def write_report(report: SuiteReport, fmt: str, path, timing: bool = True) -> None:
    if fmt == "json":
        text = dumps(report, timing)
    elif fmt == "csv":
        text = to_csv(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    Path(path).write_text(text, encoding="utf-8")


def load_report(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def verify_report(data: dict) -> tuple[bool, float | None, float | None]:
    """Re-evaluate the worst trial of a loaded report.

    Returns ``(reproduced, recorded_gap, recomputed_gap)``; a report without
    trials verifies trivially.
    """
    worst = data["aggregate"].get("worst_trial")
    if worst is None:
        return True, None, None
    cfg = TrialConfig.from_dict(data["config"])
    recomputed = evaluate(cfg, instance_from_json(worst["operands"])).min_gap_eigenvalue
    recorded = worst["min_gap"]
    return abs(recomputed - recorded) <= REPRODUCE_ATOL, recorded, recomputed
