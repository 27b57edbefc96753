"""Victim controllers: goal attraction with potential-field repulsion, and the
dynamic window approach (DWA) over sampled (v, omega) pairs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import CoincidentObstacleError, ContractViolation
from .kinematics import Pose, RobotKind, VelocityCommand, hand_point, hand_transform, wrap_pi_array

TIE_TOL = 1e-12


@dataclass(frozen=True)
class ApfParams:
    k_rep: float = 0.5
    rho0: float = 4.0
    k_attr: float = 1.0
    max_speed: float = 0.6

    def __post_init__(self):
        if not (self.rho0 > 0 and self.k_rep >= 0 and self.k_attr > 0 and self.max_speed > 0):
            raise ContractViolation("ApfParams require rho0 > 0, k_rep >= 0, k_attr > 0, max_speed > 0")


@dataclass(frozen=True)
class DwaParams:
    beta1: float = 1.0
    beta2: float = 3.0
    beta3: float = 3.0
    v_range: Tuple[float, float] = (0.0, 0.6)
    w_max: float = 0.35
    v_samples: int = 7
    w_samples: int = 21
    horizon_steps: int = 20
    accel_limits: Tuple[float, float] = (2.0, 3.5)
    clearance_ceiling: float = 1.0
    safety_margin: float = 0.1

    def __post_init__(self):
        if min(self.beta1, self.beta2, self.beta3) < 0 or max(self.beta1, self.beta2, self.beta3) <= 0:
            raise ContractViolation("DWA weights must be >= 0 with at least one positive")
        if self.v_samples < 2 or self.w_samples < 2 or self.horizon_steps < 1:
            raise ContractViolation("DWA needs >= 2 samples per axis and >= 1 horizon step")
        if self.v_range[0] > self.v_range[1] or self.w_max < 0:
            raise ContractViolation("empty DWA velocity range")

    @property
    def w_range(self) -> Tuple[float, float]:
        return (-self.w_max, self.w_max)


class ObstacleSet:
    """Disc obstacles; radii may be zero (point obstacles)."""

    def __init__(self, positions=(), radii=None):
        pos = np.asarray(positions, dtype=float).reshape(-1, 2)
        rad = np.zeros(len(pos)) if radii is None else np.asarray(radii, dtype=float).reshape(-1)
        if len(rad) != len(pos):
            raise ContractViolation("one radius per obstacle")
        if np.any(rad < 0):
            raise ContractViolation("obstacle radii must be non-negative")
        self.positions = pos
        self.radii = rad

    def __len__(self):
        return len(self.positions)

    def with_obstacle(self, position, radius=0.0) -> "ObstacleSet":
        return ObstacleSet(
            np.vstack([self.positions, np.asarray(position, float).reshape(1, 2)]),
            np.append(self.radii, radius),
        )

    def to_list(self):
        return [{"position": [float(p[0]), float(p[1])], "radius": float(r)} for p, r in zip(self.positions, self.radii)]

    @classmethod
    def from_list(cls, items) -> "ObstacleSet":
        items = list(items or [])
        return cls([it["position"] for it in items], [it.get("radius", 0.0) for it in items])


def apf_repulsion(p, p_obs, params: ApfParams, radius: float = 0.0) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    diff = p - np.asarray(p_obs, dtype=float)
    centre_dist = math.hypot(diff[0], diff[1])
    rho = centre_dist - radius
    if centre_dist == 0.0 or rho <= 0.0:
        raise CoincidentObstacleError("robot coincides with an obstacle")
    if rho > params.rho0:
        return np.zeros(2)
    grad = diff / centre_dist
    return params.k_rep * (1.0 / rho - 1.0 / params.rho0) * grad / rho**2


def _clamp(u: np.ndarray, limit: float) -> np.ndarray:
    n = math.hypot(u[0], u[1])
    if n > limit:
        return u * (limit / n)
    return u


def apf_planar(p, goal, obstacles: ObstacleSet, params: ApfParams) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    u = _clamp(params.k_attr * (np.asarray(goal, dtype=float) - p), params.max_speed)
    for pos, r in zip(obstacles.positions, obstacles.radii):
        u = u + apf_repulsion(p, pos, params, r)
    return _clamp(u, params.max_speed)


def apf_control(pose: Pose, goal, obstacles: ObstacleSet, params: ApfParams,
                kind: Optional[RobotKind] = None) -> VelocityCommand:
    """Attraction plus repulsion; unicycles steer their hand point through the hand transform."""
    goal = np.asarray(goal, dtype=float)
    if not np.all(np.isfinite(goal)):
        raise ContractViolation("goal must be finite")
    if kind is None or kind.is_holonomic:
        u = apf_planar(pose.xy, goal, obstacles, params)
        return VelocityCommand.planar(u[0], u[1])
    L = kind.hand_offset
    u = apf_planar(hand_point(pose, L), goal, obstacles, params)
    return hand_transform(pose, L, u)


# --------------------------------------------------------------------------- DWA


@dataclass
class DwaResult:
    command: VelocityCommand
    emergency: bool = False
    index: int = -1
    scores: Optional[np.ndarray] = field(default=None, repr=False)


def dynamic_window(current: VelocityCommand, params: DwaParams, T: float):
    av, aw = params.accel_limits
    v_lo = max(params.v_range[0], current.c1 - av * T)
    v_hi = min(params.v_range[1], current.c1 + av * T)
    w_lo = max(-params.w_max, current.c2 - aw * T)
    w_hi = min(params.w_max, current.c2 + aw * T)
    if v_lo > v_hi:  # current speed outside the range: snap to nearest bound
        v_lo = v_hi = min(max(current.c1, params.v_range[0]), params.v_range[1])
    if w_lo > w_hi:
        w_lo = w_hi = min(max(current.c2, -params.w_max), params.w_max)
    vs = np.linspace(v_lo, v_hi, params.v_samples)
    ws = np.linspace(w_lo, w_hi, params.w_samples)
    if w_lo < 0.0 < w_hi and not np.any(ws == 0.0):
        ws = np.sort(np.append(ws, 0.0))
    V, W = np.meshgrid(vs, ws, indexing="ij")
    return V.ravel(), W.ravel()


def rollout(pose: Pose, vs: np.ndarray, ws: np.ndarray, T: float, steps: int):
    """Euler rollouts of constant commands; returns (xs, ys, thetas) of shape (n, steps)."""
    n = len(vs)
    xs = np.empty((n, steps))
    ys = np.empty((n, steps))
    th = np.empty((n, steps))
    x = np.full(n, pose.x)
    y = np.full(n, pose.y)
    t = np.full(n, pose.theta)
    for k in range(steps):
        x = x + vs * np.cos(t) * T
        y = y + vs * np.sin(t) * T
        t = t + ws * T
        xs[:, k], ys[:, k], th[:, k] = x, y, t
    return xs, ys, th


def _minmax(term: np.ndarray, valid: np.ndarray) -> np.ndarray:
    """Row-wise min-max normalisation over valid entries; constant rows map to 0."""
    masked = np.where(valid, term, np.nan)
    lo = np.nanmin(np.where(valid.any(axis=-1, keepdims=True), masked, 0.0), axis=-1, keepdims=True)
    hi = np.nanmax(np.where(valid.any(axis=-1, keepdims=True), masked, 0.0), axis=-1, keepdims=True)
    span = hi - lo
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(span > 0, (term - lo) / np.where(span > 0, span, 1.0), 0.0)
    return np.where(valid, out, 0.0)


class DwaEvaluator:
    """Scores one dynamic window against several alternative obstacle layouts.

    The rollouts only depend on the robot state, so they are computed once; each
    row of ``extra`` adds one point obstacle (or none, when masked) on top of the
    static obstacles. Used both by the victim and by the oracle predictor.
    """

    def __init__(self, pose: Pose, current: VelocityCommand, goal, static: ObstacleSet,
                 params: DwaParams, T: float):
        self.params = params
        self.vs, self.ws = dynamic_window(current, params, T)
        xs, ys, th = rollout(pose, self.vs, self.ws, T, params.horizon_steps)
        self.xs, self.ys = xs, ys
        goal = np.asarray(goal, dtype=float)
        bearing = np.arctan2(goal[1] - ys[:, -1], goal[0] - xs[:, -1])
        self.heading = math.pi - np.abs(wrap_pi_array(th[:, -1] - bearing))
        self.velocity = np.abs(self.vs)
        clear = np.full(len(self.vs), np.inf)
        for pos, r in zip(static.positions, static.radii):
            d = np.hypot(xs - pos[0], ys - pos[1]).min(axis=1) - r - params.safety_margin
            clear = np.minimum(clear, d)
        self.static_clearance = clear
        n = len(self.vs)
        order = np.lexsort((np.arange(n), -self.vs, np.abs(self.ws)))
        self.rank = np.empty(n, dtype=int)
        self.rank[order] = np.arange(n)

    def select(self, extra: Optional[np.ndarray] = None, visible: Optional[np.ndarray] = None,
               extra_radius: float = 0.0):
        """Return (indices, emergency_flags), one per obstacle layout."""
        p = self.params
        if extra is None:
            clear = self.static_clearance[None, :]
        else:
            extra = np.asarray(extra, dtype=float).reshape(-1, 2)
            dx = self.xs[None, :, :] - extra[:, 0, None, None]
            dy = self.ys[None, :, :] - extra[:, 1, None, None]
            d = np.sqrt(dx * dx + dy * dy).min(axis=2) - extra_radius - p.safety_margin
            if visible is not None:
                d = np.where(np.asarray(visible, bool)[:, None], d, np.inf)
            clear = np.minimum(self.static_clearance[None, :], d)
        valid = clear > 0.0
        dist = np.minimum(clear, p.clearance_ceiling)
        m = clear.shape[0]
        heading = np.broadcast_to(self.heading, (m, len(self.vs)))
        velocity = np.broadcast_to(self.velocity, (m, len(self.vs)))
        F = (p.beta1 * _minmax(heading, valid)
             + p.beta2 * _minmax(np.where(valid, dist, 0.0), valid)
             + p.beta3 * _minmax(velocity, valid))
        F = np.where(valid, F, -np.inf)
        best = F.max(axis=1, keepdims=True)
        tol = TIE_TOL * np.maximum(1.0, np.abs(np.where(np.isfinite(best), best, 0.0)))
        ties = valid & (F >= best - tol)
        idx = np.where(ties, self.rank[None, :], np.iinfo(np.int64).max).argmin(axis=1)
        emergency = ~valid.any(axis=1)
        return idx, emergency

    def command(self, idx: int, emergency: bool) -> VelocityCommand:
        if emergency:
            return VelocityCommand.unicycle(0.0, 0.0)
        return VelocityCommand.unicycle(self.vs[idx], self.ws[idx])

    def normalized_terms(self, extra=None, visible=None, extra_radius=0.0):
        """Normalised (heading, dist, velocity) terms for a single layout (diagnostics)."""
        p = self.params
        clear = self.static_clearance.copy()
        if extra is not None and (visible is None or visible):
            e = np.asarray(extra, dtype=float).reshape(2)
            d = np.hypot(self.xs - e[0], self.ys - e[1]).min(axis=1) - extra_radius - p.safety_margin
            clear = np.minimum(clear, d)
        valid = clear > 0
        dist = np.minimum(clear, p.clearance_ceiling)
        return (_minmax(self.heading[None], valid[None])[0],
                _minmax(np.where(valid, dist, 0.0)[None], valid[None])[0],
                _minmax(self.velocity[None], valid[None])[0],
                valid)


def dwa_control(pose: Pose, current: VelocityCommand, goal, obstacles: ObstacleSet,
                params: DwaParams, T: float = 0.1) -> DwaResult:
    if current.kind != "unicycle":
        raise ContractViolation("DWA drives non-holonomic robots only")
    ev = DwaEvaluator(pose, current, goal, obstacles, params, T)
    idx, emergency = ev.select()
    return DwaResult(ev.command(int(idx[0]), bool(emergency[0])), bool(emergency[0]), int(idx[0]))
