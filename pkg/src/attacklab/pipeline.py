"""Stage runner: probe, collect, train and attack against one scenario, with
every intermediate result persisted in an output directory.

Artifacts (all deterministic for a given scenario, seed and stage list):

    scenario.json   the resolved scenario
    probe.json      learned sector, goal estimate, probe tracks, turning radii
    dataset.jsonl   one training sample per line
    model.json      the fitted avoidance model
    trace.jsonl     one attack record per window
    trace.csv       the same trace, flat
    summary.json    outcome, metrics and bounds
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .analysis import RadiusReport, measure_reaction_radii, optimality_gap_bounds, trace_metrics
from .attack import STRATEGIES, AttackScene, OracleModel, entry_point
from .errors import AttackLabError, ContractViolation, MissingArtifactError, StageError
from .export import export_trace, write_json
from .probe import ProbeResult, probe_victim
from .regression import AvoidanceModel, LearnedModel, TrainingSample, collect_dataset, fit
from .scenario import Scenario, scenario_from_dict
from .sector import DetectionSector

STAGES = ("probe", "collect", "train", "attack")
OUT_ENV = "ATTACKLAB_OUT"


def stage_seed(seed: int, stage: str) -> int:
    """Independent child seed for one stage of one run."""
    return int(np.random.SeedSequence([int(seed), STAGES.index(stage)]).generate_state(1)[0])


def resolve_out_dir(out_dir=None) -> Path:
    env = os.environ.get(OUT_ENV)
    return Path(env if env else (out_dir or "out"))


def _finite(x):
    return None if x is None or not math.isfinite(x) else float(x)


def _clean(obj):
    # JSON has no inf/nan
    if isinstance(obj, float):
        return _finite(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def radii_to_dict(rep: RadiusReport):
    return {
        "r_min": _finite(rep.r_min),
        "r_max": _finite(rep.r_max),
        "probes": [{"label": p.label, "distance": p.distance, "bearing": p.bearing,
                    "radius": _finite(p.radius), "infinite": p.infinite} for p in rep.probes],
    }


@dataclass
class Artifacts:
    out_dir: Path
    paths: Dict[str, Path] = field(default_factory=dict)
    summary: Optional[dict] = None
    outcome: object = None

    @property
    def success(self) -> bool:
        return bool(self.summary and self.summary.get("success"))


class Pipeline:
    def __init__(self, scenario: Scenario, out_dir, oracle: bool = False, seed: Optional[int] = None,
                 formats: Sequence[str] = ("jsonl", "csv")):
        self.sc = scenario
        self.formats = tuple(formats)
        if seed is not None:
            self.sc.seed = int(seed)
        self.out = Path(out_dir)
        self.oracle = oracle
        self.art = Artifacts(self.out)

    def path(self, name: str) -> Path:
        return self.out / name

    def _need(self, name: str) -> Path:
        p = self.path(name)
        if not p.exists():
            raise MissingArtifactError(f"{p} not found; run the stage that produces it first")
        return p

    def _radii(self, sector: DetectionSector) -> RadiusReport:
        eta = self.sc.attack_config(sector.D).eta
        return measure_reaction_radii(self.sc.make_world, sector, eta)

    # stages -------------------------------------------------------------------
    def probe(self):
        res = probe_victim(self.sc.make_world(), self.sc.probe)
        doc = {"probe": res.to_dict(), "radii": radii_to_dict(self._radii(res.sector))}
        self.art.paths["probe"] = write_json(_clean(doc), self.path("probe.json"))

    def _probe_doc(self):
        doc = json.loads(self._need("probe.json").read_text())
        return ProbeResult.from_dict(doc["probe"]), doc["radii"]

    def collect(self):
        res, _ = self._probe_doc()
        if res.goal is None:
            raise MissingArtifactError("probe produced no goal estimate")
        c = self.sc.collect
        samples = collect_dataset(self.sc.make_world(), res.sector, c.trials, stage_seed(self.sc.seed, "collect"),
                                  res.goal.position, floor=c.floor, quiet=c.quiet,
                                  persistence=c.persistence)
        p = self.path("dataset.jsonl")
        with p.open("w") as f:
            for s in samples:
                f.write(json.dumps(s.to_dict()) + "\n")
        self.art.paths["dataset"] = p

    def train(self):
        with self._need("dataset.jsonl").open() as f:
            samples = [TrainingSample.from_dict(json.loads(line)) for line in f if line.strip()]
        model = fit(samples, self.sc.train, seed=stage_seed(self.sc.seed, "train"),
                    holonomic=self.sc.victim.kind == "holonomic")
        p = self.path("model.json")
        p.write_text(model.to_json())
        self.art.paths["model"] = p

    def attack(self, strategy: str):
        if strategy not in STRATEGIES:
            raise ContractViolation(f"unknown strategy {strategy!r}; have {sorted(STRATEGIES)}")
        sc = self.sc
        world = sc.make_world()
        if self.oracle:
            sector = sc.victim.sector
            goal = tuple(sc.victim.goal)
            radii = radii_to_dict(self._radii(sector))
            model = OracleModel(world)
        else:
            res, radii = self._probe_doc()
            if res.goal is None:
                raise MissingArtifactError("probe produced no goal estimate")
            sector, goal = res.sector, tuple(res.goal.position)
            am = AvoidanceModel.from_json(self._need("model.json").read_text())
            model = LearnedModel(am, sector, goal, world.tilde_T)
        cfg = sc.attack_config(sector.D, radii["r_min"])
        scene = AttackScene(world, tuple(sc.trap), sector, goal)
        outcome = STRATEGIES[strategy](scene, model, cfg, stage_seed(sc.seed, "attack"))
        outcome.strategy = strategy
        self.art.outcome = outcome
        for fmt in self.formats:
            self.art.paths[f"trace_{fmt}"] = export_trace(outcome, self.path(f"trace.{fmt}"), fmt)
        summary = self._summary(outcome, cfg, sector, goal, radii)
        self.art.summary = summary
        self.art.paths["summary"] = write_json(summary, self.path("summary.json"))

    def _summary(self, outcome, cfg, sector, goal, radii):
        m = trace_metrics(outcome, self.sc.trap)
        s = dict(outcome.summary())
        s.update(
            scenario=self.sc.name, seed=self.sc.seed, oracle=self.oracle,
            metrics=m.__dict__, config=cfg.to_dict(), sector=sector.to_dict(), goal=list(goal),
            r_min=radii["r_min"], r_max=radii["r_max"],
        )
        start = self.sc.victim.start
        try:
            ep = entry_point(self.sc.trap, (start.x, start.y), goal)
            Ld = math.hypot(ep.point[0] - self.sc.trap[0], ep.point[1] - self.sc.trap[1])
            lo, hi = optimality_gap_bounds(radii["r_min"], radii["r_max"], Ld)
            s["gap_bounds"] = {"Ld": Ld, "lower": lo, "upper": hi, "gap": m.path_to_trap - Ld}
        except (AttackLabError, TypeError):
            # out of the bounds' regime, or no finite radius
            s["gap_bounds"] = None
        return _clean(s)

    def run(self, stages: Iterable[str], strategy: str = "shortest") -> Artifacts:
        wanted = set(stages)
        unknown = wanted - set(STAGES)
        if unknown:
            raise ContractViolation(f"unknown stages {sorted(unknown)}; have {list(STAGES)}")
        self.out.mkdir(parents=True, exist_ok=True)
        self.art.paths["scenario"] = self.path("scenario.json")
        self.path("scenario.json").write_text(self.sc.to_json())
        for stage in STAGES:
            if stage not in wanted:
                continue
            try:
                if stage == "attack":
                    self.attack(strategy)
                else:
                    getattr(self, stage)()
            except AttackLabError as e:
                raise StageError(stage, e) from e
        return self.art


def run_pipeline(scenario: Scenario, stages: Iterable[str] = STAGES, strategy: str = "shortest",
                 out_dir=None, oracle: bool = False, seed: Optional[int] = None,
                 formats: Sequence[str] = ("jsonl", "csv")) -> Artifacts:
    return Pipeline(scenario, resolve_out_dir(out_dir), oracle, seed, formats).run(stages, strategy)


# sweeps -----------------------------------------------------------------------

SWEEP_COLUMNS = ("run", "params", "success", "status", "horizon_h", "active_count",
                 "path_length_after_entry", "objective", "error")


def set_path(d: dict, dotted: str, value):
    keys = dotted.split(".")
    for k in keys[:-1]:
        d = d.setdefault(k, {})
    d[keys[-1]] = value


def grid_points(grid: Dict[str, Sequence]) -> List[Dict]:
    if not grid or any(len(v) == 0 for v in grid.values()):
        raise ContractViolation("sweep grid must name at least one parameter with at least one value")
    keys = sorted(grid)
    return [dict(zip(keys, vals)) for vals in itertools.product(*(grid[k] for k in keys))]


def _sweep_one(job):
    i, template, point, stages, strategy, oracle, out_dir = job
    d = json.loads(json.dumps(template))
    for k, v in point.items():
        set_path(d, k, v)
    row = {"run": i, "params": json.dumps(point, sort_keys=True)}
    try:
        art = Pipeline(scenario_from_dict(d), Path(out_dir) / f"run-{i:04d}", oracle).run(stages, strategy)
        s = art.summary or {}
        row.update(success=s.get("success"), status=s.get("status"), horizon_h=s.get("horizon_h"),
                   active_count=s.get("active_count"),
                   path_length_after_entry=s.get("path_length_after_entry"),
                   objective=(s.get("metrics") or {}).get("objective"), error="")
    except AttackLabError as e:
        # a failed point is recorded, the sweep carries on
        row.update(error=f"{getattr(e, 'code', 'error')}: {e}")
    return row


def sweep(template: Scenario, grid: Dict[str, Sequence], parallelism: int = 1, stages=("attack",),
          strategy: str = "shortest", oracle: bool = True, out_dir=None) -> str:
    """Run every grid point and return the summary table as CSV text (rows in
    grid order, so the bytes do not depend on ``parallelism``)."""
    points = grid_points(grid)
    out = resolve_out_dir(out_dir)
    base = template.to_dict()
    jobs = [(i, base, p, tuple(stages), strategy, oracle, str(out)) for i, p in enumerate(points)]
    if parallelism <= 1:
        rows = [_sweep_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as ex:
            rows = list(ex.map(_sweep_one, jobs))
    rows.sort(key=lambda r: r["run"])
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n", restval="")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep.csv").write_text(buf.getvalue())
    return buf.getvalue()
