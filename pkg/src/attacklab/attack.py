"""Entry-point geometry, trap feasibility and the herding planners.

The planners run against a live :class:`World`. The attacker sees only the
victim's reference point once per window, keeps a three-sample motion history
and scores candidate positions with a predictor (the learned model or the
ground-truth oracle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence

import numpy as np

from .analysis import trace_metrics
from .errors import ContractViolation, DegenerateTrajectoryError, InfeasibleTrapError
from .kinematics import Pose, wrap_pi, wrap_pi_array
from .perception import MotionEstimate, SampleHistory
from .sector import DetectionSector
from .trace import AttackOutcome, TraceRecord
from .world import World

SQRT3 = math.sqrt(3.0)
ON_LINE_TOL = 1e-9
TIE_TOL = 1e-12


@dataclass(frozen=True)
class AttackConfig:
    sigma: float = 2.4
    delta: float = 0.3
    eta: float = 0.4
    eta_band: tuple = (0.4, 4.5)
    r_d: float = 0.5
    k_max: int = 2000
    n_samples: int = 64
    n_fraction: float = 3.0
    kappa: float = 4.0
    v_max: float = 0.6
    stall_limit: int = 10
    r_min: Optional[float] = None

    def __post_init__(self):
        errs = []
        if not self.eta > 0:
            errs.append("eta must be > 0")
        if not self.eta_band[0] < self.eta_band[1]:
            errs.append("eta_band needs eta1 < eta2")
        if not self.delta > 0:
            errs.append("delta must be > 0")
        if not self.sigma > 0:
            errs.append("sigma must be > 0")
        if not self.kappa > 1:
            errs.append("kappa must be > 1")
        if self.n_samples < 4:
            errs.append("n_samples must be >= 4")
        if self.k_max < 1 or not self.r_d > 0 or not self.v_max > 0 or not self.n_fraction > 0:
            errs.append("k_max, r_d, v_max and n_fraction must be positive")
        if errs:
            raise ContractViolation("; ".join(errs))

    @classmethod
    def defaults(cls, v_max: float = 0.6, D: float = 3.0, **kw) -> "AttackConfig":
        # a slow attacker cannot back off in time to stop a turn it induced
        base = dict(sigma=4 * v_max, kappa=4.0, eta_band=(0.4, 1.5 * D), v_max=v_max)
        base.update(kw)
        return cls(**base)

    @property
    def step_reach(self) -> float:
        """Largest attacker displacement per second."""
        return min(self.sigma, self.kappa * self.v_max)

    def to_dict(self):
        d = dict(self.__dict__)
        d["eta_band"] = list(self.eta_band)
        return d

    @classmethod
    def from_dict(cls, d) -> "AttackConfig":
        d = dict(d)
        if "eta_band" in d:
            d["eta_band"] = tuple(d["eta_band"])
        return cls(**d)


@dataclass(frozen=True)
class TrapRegion:
    center: tuple
    capture_radius: float

    def captures(self, p) -> bool:
        return math.hypot(p[0] - self.center[0], p[1] - self.center[1]) <= self.capture_radius


# plane geometry -------------------------------------------------------------

def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def side_of(p, trajectory) -> int:
    """+1 left of the nearest segment, -1 right, 0 on the polyline."""
    pts = np.asarray(trajectory, dtype=float).reshape(-1, 2)
    if len(pts) < 2:
        raise ContractViolation("trajectory needs at least two points")
    seg = np.diff(pts, axis=0)
    lens2 = np.einsum("ij,ij->i", seg, seg)
    if not np.any(lens2 > 0):
        raise DegenerateTrajectoryError("all trajectory points coincide")
    px, py = float(p[0]), float(p[1])
    best, best_i = math.inf, -1
    for i, (a, s, l2) in enumerate(zip(pts[:-1], seg, lens2)):
        if l2 == 0:
            continue
        t = min(1.0, max(0.0, ((px - a[0]) * s[0] + (py - a[1]) * s[1]) / l2))
        dist = math.hypot(px - a[0] - t * s[0], py - a[1] - t * s[1])
        if dist < best:
            best, best_i = dist, i
    if best <= ON_LINE_TOL:
        return 0
    a, s = pts[best_i], seg[best_i]
    c = _cross(s[0], s[1], px - a[0], py - a[1])
    return 1 if c > 0 else (-1 if c < 0 else 0)


def _line_side(p, origin, direction) -> int:
    c = _cross(direction[0], direction[1], p[0] - origin[0], p[1] - origin[1])
    n = math.hypot(direction[0], direction[1])
    if abs(c) <= ON_LINE_TOL * max(n, 1.0):
        return 0
    return 1 if c > 0 else -1


def trap_side(trap, delta: float, origin, heading: float) -> int:
    """Side of the trap disc relative to the motion line; 0 when the line cuts it."""
    c = _cross(math.cos(heading), math.sin(heading), trap[0] - origin[0], trap[1] - origin[1])
    if abs(c) <= delta:
        return 0
    return 1 if c > 0 else -1


def _path_frame(p, start, goal):
    """Along-track coordinate, signed offset (left positive) and track length."""
    s = np.asarray(start, float)
    g = np.asarray(goal, float)
    length = float(np.hypot(*(g - s)))
    if length == 0:
        raise ContractViolation("start and goal coincide")
    u = (g - s) / length
    rel = np.asarray(p, float)[:2] - s
    return float(rel @ u), float(_cross(u[0], u[1], rel[0], rel[1])), length, u


def classify_region(trap, start, goal) -> str:
    """S1 inside the square whose diagonal is the nominal path, S2 the 45 degree cone
    behind the start, S3 the cone beyond the goal, S4 the remaining wedges."""
    a, s, length, _ = _path_frame(trap, start, goal)
    off = abs(s)
    if a - off >= 0 and a + off <= length:
        return "S1"
    if a <= 0 and off <= -a:
        return "S2"
    if a >= length and off <= a - length:
        return "S3"
    return "S4"


@dataclass(frozen=True)
class EntryPoint:
    point: tuple
    region: str
    marker: str


def entry_point(trap, start, goal) -> EntryPoint:
    a, s, length, u = _path_frame(trap, start, goal)
    st = np.asarray(start, float)
    region = classify_region(trap, start, goal)
    if region == "S1":
        at, marker = a, "exact"
    elif region == "S2":
        at, marker = 0.0, "attack-early"
    elif region == "S3":
        at, marker = length, "attack-late"
    else:
        # both 45 degree projections, clipped onto the segment; nearer to the trap wins
        opts = [min(length, max(0.0, a - abs(s))), min(length, max(0.0, a + abs(s)))]
        dists = [math.hypot(a - o, s) for o in opts]
        at = opts[0] if dists[0] <= dists[1] else opts[1]
        marker = "projected"
    p = st + at * u
    return EntryPoint((float(p[0]), float(p[1])), region, marker)


def distance_to_segment(p, start, goal) -> float:
    a, s, length, _ = _path_frame(p, start, goal)
    if a < 0:
        return math.hypot(a, s)
    if a > length:
        return math.hypot(a - length, s)
    return abs(s)


def trap_feasible(trap, start, goal, delta: float = 0.0) -> bool:
    """False when the trap lies in the closed cone beyond the goal bounded by the
    extended sides of the square on the start-goal diagonal. A trap already on the
    nominal path (within ``delta``) is always feasible."""
    if distance_to_segment(trap, start, goal) <= delta:
        return True
    a, s, length, _ = _path_frame(trap, start, goal)
    return not (a >= length and abs(s) <= a - length)


def epsilon_equivalent(u1: Sequence, u2: Sequence, eps: float) -> bool:
    """Two input sequences are the same solution if every step differs by <= eps."""
    a = np.asarray(u1, dtype=float).reshape(-1, 2)
    b = np.asarray(u2, dtype=float).reshape(-1, 2)
    if a.shape != b.shape:
        return False
    if len(a) == 0:
        return True
    return bool(np.max(np.hypot(*(a - b).T)) <= eps)


# predictors -----------------------------------------------------------------

@dataclass(frozen=True)
class Observation:
    k: int
    point: np.ndarray
    estimate: MotionEstimate


class OracleModel:
    """Ground-truth predictor: runs the victim's real controller one window ahead."""

    def __init__(self, world: World):
        self.world = world

    def predict(self, obs: Observation, candidates) -> np.ndarray:
        out = self.world.victim.predict_batch(candidates, self.world.N)
        # report the course the attacker will observe, not the body heading
        dx = out[:, 0] - obs.point[0]
        dy = out[:, 1] - obs.point[1]
        moved = np.hypot(dx, dy) > 0
        out[:, 2] = np.where(moved, np.mod(np.arctan2(dy, dx), 2 * math.pi), obs.estimate.theta)
        return out


@dataclass
class AttackScene:
    world: World
    trap: tuple
    sector: DetectionSector
    goal: tuple
    start: Optional[tuple] = None


# candidate sampling -----------------------------------------------------------

_BATCH = 256
_MAX_BATCHES = 24


def _sample_candidates(rng: np.random.Generator, n: int, origin, heading: float, r_lo: float, r_hi: float,
                       a_lo: float, a_hi: float, accept: Callable[[np.ndarray], np.ndarray],
                       reach_center=None, reach: float = 0.0) -> np.ndarray:
    """First ``n`` accepted proposals from a fixed stream, so smaller sets are prefixes
    of larger ones. Proposals are uniform over the reach disc when given, otherwise
    uniform over the sector annulus."""
    out = []
    got = 0
    ox, oy = float(origin[0]), float(origin[1])
    for _ in range(_MAX_BATCHES):
        u1 = rng.random(_BATCH)
        u2 = rng.random(_BATCH)
        if reach_center is not None:
            rr = reach * np.sqrt(u1)
            ang = 2 * math.pi * u2
            q = np.column_stack([reach_center[0] + rr * np.cos(ang), reach_center[1] + rr * np.sin(ang)])
        else:
            rr = np.sqrt(r_lo ** 2 + (r_hi ** 2 - r_lo ** 2) * u1)
            ang = heading + a_lo + (a_hi - a_lo) * u2
            q = np.column_stack([ox + rr * np.cos(ang), oy + rr * np.sin(ang)])
        dx = q[:, 0] - ox
        dy = q[:, 1] - oy
        dist = np.hypot(dx, dy)
        rel = wrap_pi_array(np.arctan2(dy, dx) - heading)
        ok = (dist >= r_lo) & (dist <= r_hi) & (rel >= a_lo) & (rel <= a_hi)
        ok &= accept(q)
        sel = q[ok]
        if len(sel):
            take = sel[: n - got]
            out.append(take)
            got += len(take)
        if got >= n:
            break
    if not out:
        return np.empty((0, 2))
    return np.vstack(out)


# session ------------------------------------------------------------------------

class _Session:
    def __init__(self, scene: AttackScene, model, cfg: AttackConfig, seed: int, strategy: str):
        self.scene = scene
        self.world = scene.world
        self.model = model
        self.cfg = cfg
        self.seed = int(seed)
        self.strategy = strategy
        self.trap = np.asarray(scene.trap, dtype=float)
        self.goal = np.asarray(scene.goal, dtype=float)
        self.start = np.asarray(scene.start if scene.start is not None else self.world.observe(), dtype=float)
        self.sector = scene.sector
        self.tT = self.world.tilde_T
        self.rng = np.random.default_rng([self.seed, 0xA77AC])

    def _step_rng(self, k: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, 0x5A3E, k])

    def plan_entry(self):
        if not trap_feasible(self.trap, self.start, self.goal, self.cfg.delta):
            raise InfeasibleTrapError(f"trap {tuple(self.trap)} lies in the unavailable region")
        ep = entry_point(self.trap, self.start, self.goal)
        pe = np.asarray(ep.point)
        marker = ep.marker
        a, s, length, u = _path_frame(self.trap, self.start, self.goal)
        r_min = self.cfg.r_min
        # the unperturbed run already passes through the capture disc
        self.on_path = distance_to_segment(self.trap, self.start, self.goal) <= self.cfg.delta
        if self.on_path:
            marker = "on-path"
        elif r_min and ep.region in ("S1", "S4") and abs(s) < (SQRT3 + 1) * r_min:
            at = max(0.0, float((pe - self.start) @ u) - 2 * r_min)
            pe = self.start + at * u
            marker = "attack-early"
        self.entry = ep
        self.pe = pe
        self.marker = marker
        self.u = u
        ts = _line_side(self.trap, self.start, u)
        self.attacker_side = -ts if ts != 0 else 1
        self.live_side = self.attacker_side
        self.Ld0 = float(np.hypot(*(self.trap - pe)))

    def waiting_post(self) -> np.ndarray:
        # sampled in N_d(p_e, r_d), then moved sideways out of the victim's reach
        r = self.cfg.r_d * math.sqrt(self.rng.random())
        ang = 2 * math.pi * self.rng.random()
        n = np.array([-self.u[1], self.u[0]]) * self.attacker_side
        off = (self.sector.D + self.cfg.r_d + 0.5) * n
        return self.pe + r * np.array([math.cos(ang), math.sin(ang)]) + off

    # --------------------------------------------------------------------------
    def run(self) -> AttackOutcome:
        cfg = self.cfg
        self.plan_entry()
        world = self.world
        hist = SampleHistory(self.tT)
        attacker = self.waiting_post()
        att_heading = 0.0
        trace: List[TraceRecord] = []
        inputs = []
        attack_start = None
        stall = 0
        status = "kmax"
        success = False
        d_prev = None
        for _ in range(cfg.k_max):
            k = world.k
            p = world.observe()
            est = hist.push(p)
            d = float(np.hypot(*(p - self.trap)))
            victim_pose = world.victim.pose
            if d <= cfg.delta:
                success, status = True, "captured"
                break
            if world.victim.done:
                status = "victim-at-goal"
                break
            phase, active, predicted = "wait", False, None
            new_att = attacker
            if attack_start is None and not self.on_path:
                near = float(np.hypot(*(p - self.pe))) <= cfg.r_d
                passed = float((p - self.start) @ self.u) >= float((self.pe - self.start) @ self.u)
                if est is not None and (near or passed):
                    attack_start = k
                    new_att, predicted = self.engage(p, est)
                    phase = "engage"
            elif attack_start is not None:
                obs = Observation(k, p, est)
                ts = trap_side(self.trap, cfg.delta, p, est.theta)
                if ts != 0:
                    self.live_side = -ts
                phase, new_att, predicted = self.choose(obs, attacker, d, d_prev)
                if phase == "stalled":
                    stall += 1
                    if stall >= cfg.stall_limit:
                        status = "stalled"
                        break
                    new_att = self.reacquire(p, est, attacker)
                    predicted = self.model.predict(obs, new_att.reshape(1, 2))[0]
                    phase = "reacquire"
                else:
                    stall = 0
            move = new_att - attacker
            ua = (float(move[0] / self.tT), float(move[1] / self.tT))
            if move[0] != 0.0 or move[1] != 0.0:
                att_heading = math.atan2(move[1], move[0])
            active = phase not in ("wait", "engage", "idle") and ua != (0.0, 0.0)
            if attack_start is not None and phase != "engage":
                inputs.append(ua if active else (0.0, 0.0))
            attacker = new_att
            cmds = world.advance(attacker)
            c = cmds[0]
            trace.append(TraceRecord(
                k=k, t=k * self.tT, victim=victim_pose, victim_ref=(float(p[0]), float(p[1])),
                attacker=Pose(float(attacker[0]), float(attacker[1]), att_heading),
                victim_cmd=(c.c1, c.c2), attacker_cmd=ua, d=d, active=active,
                predicted=None if predicted is None else Pose(*map(float, predicted)),
                heading_est=None if est is None else est.theta, phase=phase))
            d_prev = d
        # closing record: the state at termination
        p = world.observe()
        d = float(np.hypot(*(p - self.trap)))
        trace.append(TraceRecord(
            k=world.k, t=world.k * self.tT, victim=world.victim.pose, victim_ref=(float(p[0]), float(p[1])),
            attacker=Pose(float(attacker[0]), float(attacker[1]), att_heading),
            victim_cmd=(world.victim.cmd.c1, world.victim.cmd.c2), attacker_cmd=(0.0, 0.0), d=d,
            active=False, phase="end"))
        if not success and d <= cfg.delta:
            success, status = True, "captured"
        m = trace_metrics(trace)
        return AttackOutcome(
            success=success, horizon_h=len(inputs), inputs=inputs,
            path_length_after_entry=m.path_length_after_entry,
            active_count=sum(1 for u in inputs if u != (0.0, 0.0)), trace=trace, strategy=self.strategy,
            status=status, entry_point=(float(self.pe[0]), float(self.pe[1])), entry_marker=self.marker,
            region=self.entry.region, attack_start=attack_start)

    # --------------------------------------------------------------------------
    def _motion_side_ok(self, p, heading):
        """Keep candidates off the trap's side of the victim's motion line. The trap
        is a disc: a line through it has no side to keep."""
        h = (math.cos(heading), math.sin(heading))
        ts = trap_side(self.trap, self.cfg.delta, p, heading)
        if ts == 0:
            return lambda q: np.ones(len(q), bool)

        def ok(q):
            c = h[0] * (q[:, 1] - p[1]) - h[1] * (q[:, 0] - p[0])
            return np.sign(c) * ts <= 0
        return ok

    def _sector_range(self, r_lo, r_hi):
        return (max(r_lo, 0.0), min(r_hi, self.sector.D), self.sector.alpha_lo, self.sector.alpha_hi)

    def _best(self, cands, pred, d, far_lo, far_hi, in_sector=True):
        if len(cands) == 0:
            return None
        dhat = np.hypot(pred[:, 0] - self.trap[0], pred[:, 1] - self.trap[1])
        gap = np.hypot(cands[:, 0] - pred[:, 0], cands[:, 1] - pred[:, 1])
        ok = (dhat <= d) & (gap >= far_lo) & (gap <= far_hi)
        if in_sector:
            # still inside the detection area after the victim has moved
            rel = wrap_pi_array(np.arctan2(cands[:, 1] - pred[:, 1], cands[:, 0] - pred[:, 0]) - pred[:, 2])
            ok &= (gap <= self.sector.D) & (rel >= self.sector.alpha_lo) & (rel <= self.sector.alpha_hi)
        if not np.any(ok):
            return None
        idx = np.flatnonzero(ok)
        best = float(np.min(dhat[idx]))
        tied = idx[dhat[idx] <= best + TIE_TOL]
        if len(tied) == 1:
            return int(tied[0])
        # exact ties are common against a discrete command set: prefer the middle
        # of the attacker's half of the sector, which leaves the most room next step
        return int(tied[np.argmin(self._centrality(cands[tied], pred[tied]))])

    def _centrality(self, cands, pred):
        lo, hi = self.sector.alpha_lo, self.sector.alpha_hi
        if self.live_side > 0:
            lo = max(lo, 0.0)
        else:
            hi = min(hi, 0.0)
        mid_a = 0.5 * (lo + hi)
        half = max(0.5 * (hi - lo), 1e-9)
        mid_r = 0.5 * (self.cfg.eta + self.sector.D)
        span = max(self.sector.D - self.cfg.eta, 1e-9)
        rel = wrap_pi_array(np.arctan2(cands[:, 1] - pred[:, 1], cands[:, 0] - pred[:, 0]) - pred[:, 2])
        gap = np.hypot(cands[:, 0] - pred[:, 0], cands[:, 1] - pred[:, 1])
        return np.abs(rel - mid_a) / half + np.abs(gap - mid_r) / span

    def engage(self, p, est):
        """Jump to the initial attack pose: inside the sector, opposite the trap
        across the nominal path, best predicted next distance."""
        lo, hi, alo, ahi = self._sector_range(self.cfg.eta, self.sector.D)
        side = self.attacker_side
        st, u = self.start, self.u

        def accept(q):
            c = u[0] * (q[:, 1] - st[1]) - u[1] * (q[:, 0] - st[0])
            return np.sign(c) == side
        rng = self._step_rng(2 ** 31)
        cands = _sample_candidates(rng, self.cfg.n_samples, p, est.theta, lo, hi, alo, ahi, accept)
        if len(cands) == 0:
            return p + self.sector.D * 0.5 * np.array([math.cos(est.theta + side * 0.5),
                                                      math.sin(est.theta + side * 0.5)]), None
        pred = self.model.predict(Observation(self.world.k, p, est), cands)
        i = self._best(cands, pred, math.inf, 0.0, math.inf)
        if i is None:
            i = self._best(cands, pred, math.inf, 0.0, math.inf, in_sector=False)
        return cands[i].copy(), pred[i]

    def _sample_move(self, obs, attacker, d, r_lo, r_hi, gap_lo, gap_hi, in_sector=True):
        if in_sector:
            lo, hi, alo, ahi = self._sector_range(r_lo, r_hi)
            accept = self._motion_side_ok(obs.point, obs.estimate.theta)
        else:
            # the distance band alone bounds hands-off moves
            lo, hi, alo, ahi = r_lo, r_hi, -math.pi, math.pi
            accept = lambda q: np.ones(len(q), bool)
        reach = self.cfg.step_reach * self.tT
        rng = self._step_rng(obs.k)
        cands = _sample_candidates(rng, self.cfg.n_samples, obs.point, obs.estimate.theta, lo, hi, alo, ahi,
                                   accept, reach_center=attacker, reach=reach)
        if len(cands) == 0:
            return None, None
        pred = self.model.predict(obs, cands)
        i = self._best(cands, pred, d, gap_lo, gap_hi, in_sector)
        if i is None:
            return None, None
        return cands[i].copy(), pred[i]

    def choose(self, obs, attacker, d, d_prev):
        cfg = self.cfg
        if self.strategy == "shortest":
            nxt, pred = self._sample_move(obs, attacker, d, cfg.eta, self.sector.D, cfg.eta, math.inf)
            return ("attack", nxt, pred) if nxt is not None else ("stalled", attacker, None)
        if self.strategy == "handsoff":
            e1, e2 = cfg.eta_band
            gap = float(np.hypot(*(attacker - obs.point)))
            band_ok = e1 <= gap <= e2
            stay = self.model.predict(obs, attacker.reshape(1, 2))[0]
            if d > self.Ld0 / cfg.n_fraction:
                # idling only pays while the victim is still avoiding the attacker
                seen = self.sector.contains(attacker, obs.point, obs.estimate.theta)
                still = d_prev is not None and d <= d_prev and band_ok and seen
            else:
                # close in: idle once the victim's next heading already runs through the
                # trap; half of delta leaves room for a turn still in progress
                dhat = float(np.hypot(stay[0] - self.trap[0], stay[1] - self.trap[1]))
                ray = _ray_distance(self.trap, stay[:2], stay[2])
                still = band_ok and dhat <= d and ray < 0.5 * cfg.delta
            if still:
                return "idle", attacker, stay
            nxt, pred = self._sample_move(obs, attacker, d, e1, e2, e1, e2, in_sector=False)
            return ("attack", nxt, pred) if nxt is not None else ("stalled", attacker, None)
        if self.strategy == "simple":
            return "simple", self.chase(obs, attacker), None
        raise ContractViolation(f"unknown strategy {self.strategy!r}")

    def chase(self, obs, attacker):
        """Follow the victim's straight-line next position, offset to the attacker's
        side, at the attacker's top speed."""
        est = obs.estimate
        ahead = obs.point + est.v * self.tT * np.array([math.cos(est.theta), math.sin(est.theta)])
        ang = est.theta + self.attacker_side * math.pi / 4
        target = ahead + 1.0 * np.array([math.cos(ang), math.sin(ang)])
        return _toward(attacker, target, self.cfg.step_reach * self.tT)

    def reacquire(self, p, est, attacker):
        """Nearest point just inside the sector on the attacker's side, measured from
        where the victim will be after this window."""
        ahead = p + est.v * self.tT * np.array([math.cos(est.theta), math.sin(est.theta)])
        rel = attacker - ahead
        dist = float(np.hypot(*rel))
        bearing = wrap_pi(math.atan2(rel[1], rel[0]) - est.theta)
        margin = 0.1
        lo = self.sector.alpha_lo + margin
        hi = self.sector.alpha_hi - margin
        if self.live_side > 0:
            lo = max(lo, margin)
        else:
            hi = min(hi, -margin)
        bearing = min(hi, max(lo, bearing))
        dist = min(self.sector.D - margin, max(self.cfg.eta + margin, dist))
        ang = est.theta + bearing
        target = ahead + dist * np.array([math.cos(ang), math.sin(ang)])
        return _toward(attacker, target, self.cfg.step_reach * self.tT)


def _toward(src, dst, max_step):
    delta = dst - src
    n = float(np.hypot(*delta))
    if n <= max_step:
        return dst.copy()
    return src + delta * (max_step / n)


def _ray_distance(q, origin, heading):
    h = np.array([math.cos(heading), math.sin(heading)])
    rel = np.asarray(q, float) - origin
    t = float(rel @ h)
    if t <= 0:
        return float(np.hypot(*rel))
    return abs(float(_cross(h[0], h[1], rel[0], rel[1])))


def shortest_path_attack(scene: AttackScene, model, cfg: AttackConfig, seed: int = 0) -> AttackOutcome:
    return _Session(scene, model, cfg, seed, "shortest").run()


def hands_off_attack(scene: AttackScene, model, cfg: AttackConfig, seed: int = 0) -> AttackOutcome:
    return _Session(scene, model, cfg, seed, "handsoff").run()


def simple_attack(scene: AttackScene, model, cfg: AttackConfig, seed: int = 0) -> AttackOutcome:
    return _Session(scene, model, cfg, seed, "simple").run()


STRATEGIES = {"shortest": shortest_path_attack, "handsoff": hands_off_attack, "simple": simple_attack}
