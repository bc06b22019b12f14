"""CSV access for the benchmark harness outputs.

Two file kinds are consumed: per-run record CSVs and per-cell summary
CSVs.  Columns are validated up front so a wrong or empty file fails with
a clear message instead of an empty image.
"""

from __future__ import annotations

import csv

SUMMARY_REQUIRED = ("problem", "algorithm", "n", "params", "count",
                    "success_ratio", "mean_evals")
RECORD_REQUIRED = ("algorithm", "problem", "n", "params", "run_index",
                   "evaluations", "success")


def _read(path, required) -> list[dict]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in required if c not in header]
            if missing:
                raise ValueError(f"{path}: missing required columns {missing}")
            rows = list(reader)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def read_summaries(path) -> list[dict]:
    rows = _read(path, SUMMARY_REQUIRED)
    for row in rows:
        row["n"] = int(row["n"])
        row["count"] = int(row["count"])
        row["success_ratio"] = float(row["success_ratio"])
        row["mean_evals"] = float(row["mean_evals"]) if row["mean_evals"] else None
    return rows


def read_records(path) -> list[dict]:
    rows = _read(path, RECORD_REQUIRED)
    for row in rows:
        row["n"] = int(row["n"])
        row["evaluations"] = int(row["evaluations"])
        row["success"] = row["success"].strip().lower() == "true"
    return rows


def curve_label(algorithm: str, params: str) -> str:
    return f"{algorithm} {params}".strip()
