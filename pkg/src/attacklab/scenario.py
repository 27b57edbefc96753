"""Scenario files: versioned JSON describing one victim, attacker, trap and the
settings of every pipeline stage.

Validation collects every problem before raising, each tagged with the dotted
path of the offending field (``victim.T``, ``trap.center``, ...).
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from .attack import AttackConfig
from .avoidance import ApfParams, DwaParams, ObstacleSet
from .errors import AttackLabError, ValidationError
from .kinematics import Pose, RobotKind
from .probe import ProbeConfig
from .regression import Hyperparams
from .sector import DetectionSector
from .world import Victim, World

SCHEMA_VERSION = "v1"


@dataclass
class VictimSpec:
    start: Pose
    goal: tuple
    kind: str = "nonholonomic"
    hand_offset: float = 0.2
    controller: str = "dwa"
    apf: ApfParams = field(default_factory=ApfParams)
    dwa: DwaParams = field(default_factory=DwaParams)
    sector: DetectionSector = field(default_factory=lambda: DetectionSector(3.0, -math.pi / 3, math.pi / 3))
    T: float = 0.1
    v_max: float = 0.6

    @property
    def robot_kind(self) -> RobotKind:
        if self.kind == "holonomic":
            return RobotKind.holonomic()
        return RobotKind.nonholonomic(self.hand_offset)

    @property
    def params(self):
        return self.apf if self.controller == "apf" else self.dwa


@dataclass
class AttackerSpec:
    # the attacker starts at its waiting post, which the planner derives
    tilde_N: int = 1
    kappa: float = 4.0


@dataclass
class CollectSpec:
    trials: int = 500
    floor: float = 1.3
    quiet: int = 1
    persistence: float = 0.0


@dataclass
class Scenario:
    victim: VictimSpec
    trap: tuple
    seed: int
    name: str = "scenario"
    capture_radius: float = 0.3
    attacker: AttackerSpec = field(default_factory=AttackerSpec)
    probe: ProbeConfig = field(default_factory=ProbeConfig)
    collect: CollectSpec = field(default_factory=CollectSpec)
    train: Hyperparams = field(default_factory=Hyperparams)
    # overrides on top of AttackConfig.defaults(v_max, D); D comes from the probe
    attack: Dict[str, Any] = field(default_factory=dict)
    static_obstacles: List[tuple] = field(default_factory=list)

    # construction ---------------------------------------------------------
    def obstacles(self) -> ObstacleSet:
        if not self.static_obstacles:
            return ObstacleSet()
        return ObstacleSet([o[:2] for o in self.static_obstacles], [o[2] for o in self.static_obstacles])

    def make_world(self, react: bool = True) -> World:
        v = self.victim
        victim = Victim(v.robot_kind, v.start, v.goal, v.params, v.sector, v.T,
                        static_obstacles=self.obstacles(), react=react)
        return World(victim, self.attacker.tilde_N)

    def attack_config(self, D: float, r_min: Optional[float] = None) -> AttackConfig:
        kw = dict(kappa=self.attacker.kappa, delta=self.capture_radius, r_min=r_min)
        kw.update(self.attack)
        return AttackConfig.defaults(v_max=self.victim.v_max, D=D, **kw)

    # serialization --------------------------------------------------------
    def to_dict(self) -> Dict[str, Any]:
        v = self.victim
        return {
            "version": SCHEMA_VERSION,
            "name": self.name,
            "seed": self.seed,
            "victim": {
                "kind": v.kind,
                "hand_offset": v.hand_offset,
                "start": list(v.start.as_tuple()),
                "goal": list(v.goal),
                "controller": v.controller,
                "apf": _plain(asdict(v.apf)),
                "dwa": _plain(asdict(v.dwa)),
                "sector": v.sector.to_dict(),
                "T": v.T,
                "v_max": v.v_max,
            },
            "attacker": {
                "tilde_N": self.attacker.tilde_N,
                "kappa": self.attacker.kappa,
            },
            "trap": {"center": list(self.trap), "capture_radius": self.capture_radius},
            "probe": _plain(asdict(self.probe)),
            "collect": asdict(self.collect),
            "train": self.train.to_dict(),
            "attack": _plain(self.attack),
            "static_obstacles": [list(o) for o in self.static_obstacles],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _plain(d):
    if isinstance(d, dict):
        return {k: _plain(v) for k, v in d.items()}
    if isinstance(d, (list, tuple)):
        return [_plain(v) for v in d]
    return d


# validation -------------------------------------------------------------------

class _Checker:
    def __init__(self):
        self.errors: List[str] = []

    def fail(self, path: str, msg: str):
        self.errors.append(f"{path}: {msg}")

    def section(self, d, key: str, path: str) -> dict:
        v = d.get(key, {})
        if v is None:
            return {}
        if not isinstance(v, dict):
            self.fail(path, "must be an object")
            return {}
        return v

    def number(self, d, key, path, default=None, positive=False, nonneg=False, required=False):
        if key not in d or d[key] is None:
            if required:
                self.fail(path, "is required")
            return default
        v = d[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            self.fail(path, f"must be a finite number, got {v!r}")
            return default
        if positive and not v > 0:
            self.fail(path, f"must be > 0, got {v!r}")
            return default
        if nonneg and v < 0:
            self.fail(path, f"must be >= 0, got {v!r}")
            return default
        return float(v)

    def integer(self, d, key, path, default=None, minimum=None, required=False):
        if key not in d or d[key] is None:
            if required:
                self.fail(path, "is required")
            return default
        v = d[key]
        if isinstance(v, bool) or not isinstance(v, int):
            self.fail(path, f"must be an integer, got {v!r}")
            return default
        if minimum is not None and v < minimum:
            self.fail(path, f"must be >= {minimum}, got {v!r}")
            return default
        return v

    def vector(self, d, key, path, n, default=None, required=False):
        if key not in d or d[key] is None:
            if required:
                self.fail(path, "is required")
            return default
        v = d[key]
        ok = isinstance(v, (list, tuple)) and len(v) == n and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x) for x in v)
        if not ok:
            self.fail(path, f"must be a list of {n} finite numbers, got {v!r}")
            return default
        return tuple(float(x) for x in v)

    def choice(self, d, key, path, options, default):
        v = d.get(key, default)
        if v not in options:
            self.fail(path, f"must be one of {sorted(options)}, got {v!r}")
            return default
        return v

    def build(self, cls, d, path):
        """Instantiate a parameter dataclass from ``d``, reporting unknown keys
        and constructor contract failures against ``path``."""
        if not isinstance(d, dict):
            self.fail(path, "must be an object")
            return cls()
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - names)
        for k in unknown:
            self.fail(f"{path}.{k}", "unknown field")
        kw = {}
        for k in names & set(d):
            v = d[k]
            kw[k] = tuple(v) if isinstance(v, list) else v
        try:
            return cls(**kw)
        except (AttackLabError, TypeError, ValueError) as e:
            self.fail(path, str(e))
            return cls()


def scenario_from_dict(d: Dict[str, Any]) -> Scenario:
    c = _Checker()
    if not isinstance(d, dict):
        raise ValidationError(["<root>: must be an object"])
    if d.get("version") != SCHEMA_VERSION:
        c.fail("version", f"must be {SCHEMA_VERSION!r}, got {d.get('version')!r}")
    seed = c.integer(d, "seed", "seed", 0, minimum=0, required=True)
    if seed is not None and seed >= 2 ** 64:
        c.fail("seed", "must fit in 64 bits")

    vd = c.section(d, "victim", "victim")
    kind = c.choice(vd, "kind", "victim.kind", {"holonomic", "nonholonomic"}, "nonholonomic")
    controller = c.choice(vd, "controller", "victim.controller", {"apf", "dwa"},
                          "apf" if kind == "holonomic" else "dwa")
    if kind == "holonomic" and controller == "dwa":
        c.fail("victim.controller", "dwa needs a nonholonomic victim")
    hand = c.number(vd, "hand_offset", "victim.hand_offset", 0.2, positive=kind == "nonholonomic")
    goal = c.vector(vd, "goal", "victim.goal", 2, (0.0, 0.0), required=True)
    start_raw = vd.get("start")
    start = None
    if isinstance(start_raw, (list, tuple)) and len(start_raw) == 2:
        xy = c.vector(vd, "start", "victim.start", 2, required=True)
        if xy is not None:
            start = Pose(xy[0], xy[1], math.atan2(goal[1] - xy[1], goal[0] - xy[0]))
    else:
        s3 = c.vector(vd, "start", "victim.start", 3, required=True)
        if s3 is not None:
            start = Pose(*s3)
    T = c.number(vd, "T", "victim.T", 0.1, positive=True)
    v_max = c.number(vd, "v_max", "victim.v_max", 0.6, positive=True)
    apf = c.build(ApfParams, vd.get("apf", {}), "victim.apf")
    dwa = c.build(DwaParams, vd.get("dwa", {}), "victim.dwa")
    sd = c.section(vd, "sector", "victim.sector")
    sector = DetectionSector(3.0, -math.pi / 3, math.pi / 3)
    if sd:
        D = c.number(sd, "D", "victim.sector.D", 3.0, positive=True)
        lo = c.number(sd, "alpha_lo", "victim.sector.alpha_lo", -math.pi / 3)
        hi = c.number(sd, "alpha_hi", "victim.sector.alpha_hi", math.pi / 3)
        try:
            sector = DetectionSector(D, lo, hi)
        except AttackLabError as e:
            c.fail("victim.sector", str(e))

    ad = c.section(d, "attacker", "attacker")
    attacker = AttackerSpec(
        tilde_N=c.integer(ad, "tilde_N", "attacker.tilde_N", 1, minimum=1),
        kappa=c.number(ad, "kappa", "attacker.kappa", 4.0, positive=True),
    )
    if attacker.kappa is not None and attacker.kappa <= 1:
        c.fail("attacker.kappa", "must be > 1 (the attacker is faster than the victim)")

    td = c.section(d, "trap", "trap")
    trap = c.vector(td, "center", "trap.center", 2, (0.0, 0.0), required=True)
    capture = c.number(td, "capture_radius", "trap.capture_radius", 0.3, positive=True)

    probe = c.build(ProbeConfig, d.get("probe", {}), "probe")
    collect = c.build(CollectSpec, d.get("collect", {}), "collect")
    if isinstance(collect.trials, int) and collect.trials < 1:
        c.fail("collect.trials", "must be >= 1")
    if not isinstance(collect.persistence, (int, float)) or not 0.0 <= collect.persistence < 1.0:
        c.fail("collect.persistence", "must be in [0, 1)")
    train = c.build(Hyperparams, d.get("train", {}), "train")
    attack = d.get("attack", {}) or {}
    if not isinstance(attack, dict):
        c.fail("attack", "must be an object")
        attack = {}
    else:
        known = {f.name for f in fields(AttackConfig)}
        for k in sorted(set(attack) - known):
            c.fail(f"attack.{k}", "unknown field")
        attack = {k: v for k, v in attack.items() if k in known}
        try:
            AttackConfig.defaults(v_max=v_max or 0.6, D=sector.D,
                                  **{k: tuple(v) if isinstance(v, list) else v for k, v in attack.items()})
        except (AttackLabError, TypeError) as e:
            c.fail("attack", str(e))

    obstacles = []
    raw_obs = d.get("static_obstacles", []) or []
    if not isinstance(raw_obs, list):
        c.fail("static_obstacles", "must be a list of [x, y, radius]")
        raw_obs = []
    for i, o in enumerate(raw_obs):
        o3 = c.vector({"o": o}, "o", f"static_obstacles[{i}]", 3)
        if o3 is not None:
            if o3[2] < 0:
                c.fail(f"static_obstacles[{i}]", "radius must be >= 0")
            else:
                obstacles.append(o3)

    name = d.get("name", "scenario")
    if not isinstance(name, str):
        c.fail("name", "must be a string")
        name = "scenario"
    if c.errors:
        raise ValidationError(c.errors)
    victim = VictimSpec(start=start, goal=goal, kind=kind, hand_offset=hand, controller=controller,
                        apf=apf, dwa=dwa, sector=sector, T=T, v_max=v_max)
    return Scenario(victim=victim, trap=trap, seed=seed, name=name, capture_radius=capture,
                    attacker=attacker, probe=probe, collect=collect, train=train,
                    attack={k: tuple(v) if isinstance(v, list) else v for k, v in attack.items()},
                    static_obstacles=obstacles)


def load_scenario(path) -> Scenario:
    """Read and validate a scenario file. Builtin names (see ``BUILTIN``) are
    accepted in place of a path."""
    p = Path(path)
    if not p.exists() and str(path) in BUILTIN:
        return builtin(str(path))
    try:
        text = p.read_text()
    except OSError as e:
        raise ValidationError([f"{path}: cannot read ({e.strerror})"]) from e
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError([f"{path}:{e.lineno}:{e.colno}: {e.msg}"]) from e
    return scenario_from_dict(d)


def save_scenario(scenario: Scenario, path) -> Path:
    p = Path(path)
    p.write_text(scenario.to_json())
    return p


# presets ----------------------------------------------------------------------

_LAB = {"version": SCHEMA_VERSION, "seed": 0}

BUILTIN: Dict[str, Dict[str, Any]] = {
    # holonomic APF victim on a long straight mission, used for learning checks
    "apf": dict(_LAB, name="apf", victim={"kind": "holonomic", "controller": "apf",
                                           "start": [0.0, 0.0, 0.0], "goal": [40.0, 0.0]},
                trap={"center": [20.0, -3.0]}),
    "diagonal": dict(_LAB, name="diagonal", victim={"start": [11.5, 0.0], "goal": [2.0, 14.0]},
                 trap={"center": [5.0, 12.0]}, probe={"settle_samples": 30},
                 collect={"floor": 0.4, "quiet": 0, "persistence": 0.8}),
    # the trap lies ten metres off a straight track
    "line": dict(_LAB, name="line", victim={"start": [0.0, 0.0, 0.0], "goal": [26.0, 0.0]},
                 trap={"center": [12.0, -10.0]}, probe={"settle_samples": 30},
                 collect={"floor": 0.4, "quiet": 0, "persistence": 0.8}),
}


def builtin(name: str) -> Scenario:
    if name not in BUILTIN:
        raise ValidationError([f"unknown builtin scenario {name!r}; have {sorted(BUILTIN)}"])
    return scenario_from_dict(copy.deepcopy(BUILTIN[name]))
