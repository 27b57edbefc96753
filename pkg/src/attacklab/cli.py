"""Command line entry point.

    attacklab run --scenario diagonal --strategy handsoff --out-dir out/hands
    attacklab attack --scenario line --oracle
    attacklab analyze --out-dir out/hands
    attacklab sweep --scenario diagonal --oracle --grid attack.n_samples=16,32,64

Exit status: 0 on success, 1 when an attack ran but missed the trap, 2 on a
configuration or stage error (the machine-readable code goes to stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import pipeline
from .analysis import bound_sweep_csv, trace_metrics
from .errors import AttackLabError
from .export import read_trace_jsonl
from .scenario import BUILTIN, load_scenario, scenario_from_dict

EXIT_OK, EXIT_MISSED, EXIT_ERROR = 0, 1, 2


def emit(title: str, fields: dict, out=None):
    """Delimited key: value block, one per command."""
    out = out or sys.stdout
    print(f"=== {title} ===", file=out)
    for k, v in fields.items():
        if isinstance(v, float):
            v = f"{v:.6g}"
        print(f"{k}: {v}", file=out)
    print("=== end ===", file=out)


def _parse_grid(items):
    grid = {}
    for item in items or []:
        if "=" not in item:
            raise AttackLabError(f"grid entry {item!r} must look like key=v1,v2")
        key, vals = item.split("=", 1)
        grid[key] = [json.loads(v) for v in vals.split(",") if v]
    return grid


def analyze(out_dir: Path) -> dict:
    """Metrics recomputed from the stored trace, bounds table and figures."""
    from . import plotting

    summary = json.loads((out_dir / "summary.json").read_text())
    sc = scenario_from_dict(json.loads((out_dir / "scenario.json").read_text()))
    trace = read_trace_jsonl(out_dir / "trace.jsonl")
    m = trace_metrics(trace, sc.trap)
    files = [
        plotting.plot_trajectory(trace, sc.trap, sc.capture_radius, summary["goal"], out_dir / "trajectory.png",
                                 entry=summary.get("entry_point"),
                                 title=f"{sc.name} / {summary['strategy']}"),
        plotting.plot_distance(trace, sc.capture_radius, out_dir / "distance.png"),
    ]
    radii = [r for r in (summary.get("r_min"), summary.get("r_max")) if r]
    gap = summary.get("gap_bounds")
    if radii:
        distances = list(np.round(np.linspace(2.0, 20.0, 37), 3))
        (out_dir / "bounds.csv").write_text(bound_sweep_csv(radii, distances))
        files.append(out_dir / "bounds.csv")
        measured = (gap["Ld"], m.path_to_trap) if gap else None
        files.append(plotting.plot_bounds(radii, distances, out_dir / "bounds.png", measured))
    fields = {
        "success": summary["success"],
        "status": summary["status"],
        "steps": m.horizon_h,
        "active": m.active_count,
        "handsoff_ratio": m.handsoff_ratio,
        "path_after_entry": m.path_length_after_entry,
        "path_to_trap": m.path_to_trap,
        "final_distance": m.final_distance,
        "objective": m.objective,
    }
    if gap:
        fields.update(gap_lower=gap["lower"], gap_upper=gap["upper"], gap=gap["gap"])
    fields["files"] = ", ".join(str(Path(f).name) for f in files)
    return fields


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="attacklab", description="Herding attacks on obstacle-avoiding robots.")
    p.add_argument("command", choices=["probe", "collect", "train", "attack", "analyze", "sweep", "run"])
    p.add_argument("--scenario", default="diagonal",
                   help=f"scenario JSON file or builtin name ({', '.join(sorted(BUILTIN))})")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--strategy", default="shortest", choices=["shortest", "handsoff", "simple"])
    p.add_argument("--oracle", action="store_true", help="attack with the true controller as the model")
    p.add_argument("--out-dir", default="out", help=f"artifact directory (${pipeline.OUT_ENV} overrides)")
    p.add_argument("--format", default="both", choices=["jsonl", "csv", "both"], help="trace file format")
    p.add_argument("--grid", action="append", help="sweep parameter, e.g. attack.n_samples=16,32,64")
    p.add_argument("--parallel", type=int, default=1, help="sweep workers")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = pipeline.resolve_out_dir(args.out_dir)
    formats = ("jsonl", "csv") if args.format == "both" else (args.format,)
    try:
        if args.command == "analyze":
            emit("analyze", analyze(out))
            return EXIT_OK
        sc = load_scenario(args.scenario)
        if args.seed is not None:
            sc.seed = args.seed
        if args.command == "sweep":
            table = pipeline.sweep(sc, _parse_grid(args.grid), args.parallel, strategy=args.strategy,
                                   oracle=args.oracle, out_dir=out)
            sys.stdout.write(table)
            return EXIT_OK
        stages = list(pipeline.STAGES) if args.command == "run" else [args.command]
        art = pipeline.run_pipeline(sc, stages, args.strategy, out, args.oracle, formats=formats)
        fields = {"scenario": sc.name, "seed": sc.seed, "out_dir": str(out)}
        fields.update({f"file_{k}": str(v.name) for k, v in art.paths.items()})
        if art.summary is not None:
            s = art.summary
            fields.update(success=s["success"], status=s["status"], steps=s["horizon_h"],
                          active=s["active_count"], path_after_entry=s["path_length_after_entry"])
        emit(args.command, fields)
        if art.summary is not None and not art.success:
            return EXIT_MISSED
        return EXIT_OK
    except AttackLabError as e:
        print(json.dumps({"error": getattr(e, "code", "error"), "message": str(e)}), file=sys.stderr)
        return EXIT_ERROR
    except FileNotFoundError as e:
        print(json.dumps({"error": "missing_artifact", "message": str(e)}), file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
