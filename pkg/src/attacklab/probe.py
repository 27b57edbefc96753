"""Active probing of a live victim: detection radius, detection bearings and a
least-squares goal estimate from the straight courses it settles on."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import (ContractViolation, DegenerateSectorError, InsufficientDataError, NoReactionError,
                     RankDeficientError)
from .perception import DEFAULT_DEVIATION_TOL, SampleHistory, detect_reaction, observe_reaction
from .sector import DetectionSector
from .world import World


@dataclass(frozen=True)
class TrackSegment:
    anchor: tuple
    direction: tuple

    def __post_init__(self):
        n = math.hypot(*self.direction)
        if not abs(n - 1.0) < 1e-9:
            raise ContractViolation("track direction must be a unit vector")

    @classmethod
    def through(cls, p, q) -> "TrackSegment":
        d = np.asarray(q, float) - np.asarray(p, float)
        n = float(np.hypot(*d))
        if n == 0.0:
            raise ContractViolation("track needs two distinct points")
        return cls((float(p[0]), float(p[1])), (float(d[0] / n), float(d[1] / n)))

    def distance(self, p) -> float:
        """Perpendicular distance from ``p`` to the track's line."""
        dx = float(p[0]) - self.anchor[0]
        dy = float(p[1]) - self.anchor[1]
        return abs(self.direction[0] * dy - self.direction[1] * dx)

    def to_dict(self):
        return {"anchor": list(self.anchor), "direction": list(self.direction)}

    @classmethod
    def from_dict(cls, d) -> "TrackSegment":
        return cls(tuple(map(float, d["anchor"])), tuple(map(float, d["direction"])))


@dataclass(frozen=True)
class GoalEstimate:
    position: tuple
    residual: float
    accepted: bool

    def to_dict(self):
        return {"position": list(self.position), "residual": self.residual, "accepted": self.accepted}

    @classmethod
    def from_dict(cls, d) -> "GoalEstimate":
        return cls(tuple(map(float, d["position"])), float(d["residual"]), bool(d["accepted"]))


def estimate_goal(tracks: Sequence[TrackSegment], goal_radius: float = 0.5) -> GoalEstimate:
    """Point closest, in the least-squares sense, to every track line.

    Each line contributes the row ``n . p = n . anchor`` with ``n`` its unit normal,
    so the residual is the mean squared point-to-line distance.
    """
    if len(tracks) < 2:
        raise InsufficientDataError("goal estimation needs at least two tracks")
    A = np.array([(-t.direction[1], t.direction[0]) for t in tracks], dtype=float)
    b = np.array([A[i] @ np.asarray(t.anchor, float) for i, t in enumerate(tracks)])
    sol, _, rank, sv = np.linalg.lstsq(A, b, rcond=None)
    if rank < 2 or sv[-1] < 1e-9 * sv[0]:
        raise RankDeficientError("tracks are parallel; the goal is not determined")
    residual = float(np.mean((A @ sol - b) ** 2))
    return GoalEstimate((float(sol[0]), float(sol[1])), residual, residual <= goal_radius ** 2)


# live probing ---------------------------------------------------------------

@dataclass
class ProbeConfig:
    delta_D: float = 0.1
    delta_alpha: float = math.radians(2.0)
    start_distance: float = 10.0
    floor: float = 0.2
    tol: float = DEFAULT_DEVIATION_TOL
    quiet_windows: int = 3
    settle_samples: int = 10
    push_windows: int = 40
    angle_radius_fraction: float = 0.5
    goal_radius: float = 0.5
    max_settle: int = 400

    def __post_init__(self):
        if not (self.delta_D > 0 and self.delta_alpha > 0):
            raise ContractViolation("probe steps must be positive")
        if not self.start_distance > self.floor > 0:
            raise ContractViolation("need start_distance > floor > 0")
        if self.settle_samples < 2:
            raise ContractViolation("a track needs at least two samples")

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class ProbeResult:
    D: float
    alpha_lo: float
    alpha_hi: float
    goal: Optional[GoalEstimate]
    tracks: List[TrackSegment] = field(default_factory=list)
    trials: int = 0

    @property
    def sector(self) -> DetectionSector:
        return DetectionSector(self.D, self.alpha_lo, self.alpha_hi)

    def to_dict(self):
        return {
            "D": self.D,
            "alpha_lo": self.alpha_lo,
            "alpha_hi": self.alpha_hi,
            "goal": None if self.goal is None else self.goal.to_dict(),
            "tracks": [t.to_dict() for t in self.tracks],
            "trials": self.trials,
        }

    @classmethod
    def from_dict(cls, d) -> "ProbeResult":
        return cls(float(d["D"]), float(d["alpha_lo"]), float(d["alpha_hi"]),
                   None if d.get("goal") is None else GoalEstimate.from_dict(d["goal"]),
                   [TrackSegment.from_dict(t) for t in d.get("tracks", [])], int(d.get("trials", 0)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ProbeResult":
        return cls.from_dict(json.loads(text))


class ProbeSession:
    """Drives the attacker against a live victim, one observation window at a time.

    The attacker is always placed relative to the victim's latest observed position
    and course, so probing keeps up with a moving victim. When the victim gets close
    to its goal the mission is restarted before the next trial.
    """

    def __init__(self, world: World, cfg: Optional[ProbeConfig] = None):
        self.world = world
        self.cfg = cfg or ProbeConfig()
        self.hist = SampleHistory(world.tilde_T)
        self.trials = 0
        for _ in range(3):
            self._advance(None)

    # plumbing -------------------------------------------------------------
    def _advance(self, attacker):
        self.world.advance(attacker)
        p = self.world.observe()
        est = self.hist.push(p)
        return p, est

    @property
    def point(self) -> np.ndarray:
        return self.hist.latest()

    @property
    def course(self) -> float:
        return self.hist.last.theta

    def relative(self, distance: float, bearing: float) -> np.ndarray:
        ang = self.course + bearing
        return self.point + distance * np.array([math.cos(ang), math.sin(ang)])

    def _withdrawn(self) -> np.ndarray:
        # behind the victim and farther than any standoff used
        return self.relative(self.cfg.start_distance + 1.0, math.pi)

    def _restart_if_needed(self):
        margin = self.cfg.start_distance + 2.0
        if self.world.victim.done or self.world.remaining() < margin:
            self.world.restart()
            self.hist = SampleHistory(self.world.tilde_T)
            for _ in range(3):
                self._advance(None)

    def settle(self):
        """Withdraw and wait until the course and step length stay constant."""
        cfg = self.cfg
        quiet = 0
        for _ in range(cfg.max_settle):
            prev = self.hist.last
            _, est = self._advance(self._withdrawn())
            if prev is not None and est is not None:
                same_course = abs(math.remainder(est.theta - prev.theta, 2 * math.pi)) <= cfg.tol
                same_speed = abs(est.v - prev.v) * self.world.tilde_T <= cfg.tol
                quiet = quiet + 1 if (same_course and same_speed) else 0
            if quiet >= cfg.quiet_windows:
                return
        raise NoReactionError("victim never settled back onto a straight course")

    def trial(self, distance: float, bearing: float) -> bool:
        """Place the attacker at (distance, bearing) from the victim for one window
        and report whether the victim's step deviated from its unperturbed step."""
        self.trials += 1
        p0 = self.point.copy()
        course, speed = self.course, self.hist.last.v
        p1, _ = self._advance(self.relative(distance, bearing))
        obs = observe_reaction(p0, p1, course)
        return detect_reaction(obs, speed * self.world.tilde_T, self.cfg.tol)

    def confirmed_trial(self, distance: float, bearing: float) -> bool:
        """A reaction counts only if it repeats after the victim has settled again;
        a goal-seeking controller makes small course corrections of its own."""
        if not self.trial(distance, bearing):
            return False
        self.settle()
        return self.trial(distance, bearing)

    def record_track(self, distance: float, bearing: float) -> TrackSegment:
        """Push the victim from the reacting placement, let it settle, then take the
        chord of its next positions as the course it heads along."""
        for _ in range(self.cfg.push_windows):
            if self.world.victim.done:
                break
            self._advance(self.relative(distance, bearing))
        self.settle()
        pts = [self.point.copy()]
        for _ in range(self.cfg.settle_samples - 1):
            p, _ = self._advance(self._withdrawn())
            pts.append(p.copy())
        return TrackSegment.through(pts[0], pts[-1])

    # protocol -------------------------------------------------------------
    def learn_radius(self):
        cfg = self.cfg
        self._restart_if_needed()
        self.settle()
        steps = int(math.ceil(cfg.start_distance / cfg.delta_D))
        last_silent = None
        for j in range(steps + 1):
            d = cfg.start_distance - j * cfg.delta_D
            if d < cfg.floor:
                break
            if self.confirmed_trial(d, 0.0):
                if last_silent is None:
                    raise ContractViolation("victim already reacts at the initial standoff")
                track = self.record_track(d, 0.0)
                return last_silent, track
            last_silent = d
        raise NoReactionError("victim never reacted before the safety floor")

    def _sweep(self, radius: float, sign: int):
        """Bearing of the outermost reacting probe on one side (sign +1 left, -1 right)."""
        cfg = self.cfg
        self._restart_if_needed()
        self.settle()
        n_in = int(math.floor((math.pi / 2) / cfg.delta_alpha + 1e-9))
        start = sign * math.pi / 2
        if self.confirmed_trial(radius, start):
            # already reacting at 90 degrees: look outward for the silent edge
            found = start
            n_out = int(math.floor((math.pi / 2) / cfg.delta_alpha + 1e-9))
            for j in range(1, n_out + 1):
                b = start + sign * j * cfg.delta_alpha
                self._restart_if_needed()
                self.settle()
                if not self.confirmed_trial(radius, b):
                    return found
                found = b
            raise DegenerateSectorError("no silent bearing: the detector covers the full circle",
                                        -math.pi, math.pi)
        for j in range(1, 2 * n_in + 1):
            b = start - sign * j * cfg.delta_alpha
            if self.confirmed_trial(radius, b):
                return b
            self._restart_if_needed()
        raise DegenerateSectorError("no reaction across the bearing sweep")

    def learn_angles(self, D: float):
        radius = self.cfg.angle_radius_fraction * D
        hi = self._sweep(radius, +1)
        track_hi = self.record_track(radius, hi)
        lo = self._sweep(radius, -1)
        track_lo = self.record_track(radius, lo)
        return lo, hi, track_hi, track_lo


def learn_detection_radius(world: World, delta_D: float = 0.1, cfg: Optional[ProbeConfig] = None,
                           session: Optional[ProbeSession] = None):
    """Close in head-on by ``delta_D`` per trial; the returned radius is the last
    standoff that drew no reaction, so it overestimates by at most ``delta_D``."""
    if not delta_D > 0:
        raise ContractViolation("delta_D must be positive")
    cfg = _with(cfg, delta_D=delta_D)
    s = session or ProbeSession(world, cfg)
    s.cfg = cfg
    return s.learn_radius()


def learn_detection_angles(world: World, D: float, delta_alpha: float = math.radians(2.0),
                           cfg: Optional[ProbeConfig] = None, session: Optional[ProbeSession] = None):
    """Sweep inward from +-90 degrees at a fixed radius inside ``D``; each bound is
    the first bearing that draws a reaction."""
    if not delta_alpha > 0:
        raise ContractViolation("delta_alpha must be positive")
    if not D > 0:
        raise ContractViolation("D must be positive")
    cfg = _with(cfg, delta_alpha=delta_alpha)
    s = session or ProbeSession(world, cfg)
    s.cfg = cfg
    return s.learn_angles(D)


def probe_victim(world: World, cfg: Optional[ProbeConfig] = None) -> ProbeResult:
    """Radius, bearings and goal in one session."""
    cfg = cfg or ProbeConfig()
    s = ProbeSession(world, cfg)
    D, t1 = s.learn_radius()
    lo, hi, t2, t3 = s.learn_angles(D)
    tracks = [t1, t2, t3]
    try:
        goal = estimate_goal(tracks, cfg.goal_radius)
    except RankDeficientError:
        goal = None
    return ProbeResult(D, lo, hi, goal, tracks, s.trials)


def _with(cfg: Optional[ProbeConfig], **kw) -> ProbeConfig:
    base = dict((cfg or ProbeConfig()).__dict__)
    base.update(kw)
    return ProbeConfig(**base)
