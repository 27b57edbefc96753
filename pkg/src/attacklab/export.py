"""Trace files: JSON lines (one record per window) and a flat CSV."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import List

from .errors import ContractViolation
from .trace import AttackOutcome, TraceRecord

CSV_COLUMNS = ("k", "t", "vx_x", "vx_y", "vx_theta", "ax_x", "ax_y", "ax_theta",
               "uv1", "uv2", "ua1", "ua2", "d", "active")


def csv_row(r: TraceRecord) -> list:
    return [r.k, repr(r.t), repr(r.victim.x), repr(r.victim.y), repr(r.victim.theta),
            repr(r.attacker.x), repr(r.attacker.y), repr(r.attacker.theta),
            repr(r.victim_cmd[0]), repr(r.victim_cmd[1]), repr(r.attacker_cmd[0]), repr(r.attacker_cmd[1]),
            repr(r.d), int(r.active)]


def export_trace(outcome: AttackOutcome, path, fmt: str = "jsonl") -> Path:
    """Write ``outcome.trace``; raises OSError when ``path`` is not writable."""
    p = Path(path)
    if fmt == "jsonl":
        with p.open("w") as f:
            for r in outcome.trace:
                f.write(json.dumps(r.to_dict(), sort_keys=True) + "\n")
    elif fmt == "csv":
        with p.open("w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for r in outcome.trace:
                w.writerow(csv_row(r))
    else:
        raise ContractViolation(f"unknown trace format {fmt!r}")
    return p


def read_trace_jsonl(path) -> List[TraceRecord]:
    with Path(path).open() as f:
        return [TraceRecord.from_dict(json.loads(line)) for line in f if line.strip()]


def write_json(obj, path) -> Path:
    p = Path(path)
    p.write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n")
    return p
