"""Learning the victim's avoidance reaction.

Inputs per window: heading deviation from the goal bearing, the victim's two
velocity components and acceleration, and the attacker's range and bearing.
Outputs: the step length and the step direction relative to the goal bearing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import ContractViolation, EmptyDatasetError, InvalidInputError, UnderdeterminedError
from .kinematics import wrap_pi, wrap_pi_array
from .perception import (DEFAULT_DEVIATION_TOL, MotionEstimate, SampleHistory, detect_reaction,
                         observe_reaction)
from .sector import DetectionSector
from .svr import EpsilonSVR
from .world import World

FEATURES = ("heading_dev", "v1", "v2", "accel", "range", "bearing")
OUTPUTS = ("step", "turn")
MODEL_VERSION = 1
MIN_SAMPLES = 20


@dataclass(frozen=True)
class TrainingSample:
    q_in: tuple
    q_out: tuple

    def to_dict(self):
        return {"q_in": list(self.q_in), "q_out": list(self.q_out)}

    @classmethod
    def from_dict(cls, d) -> "TrainingSample":
        return cls(tuple(map(float, d["q_in"])), tuple(map(float, d["q_out"])))


def goal_bearing(point, goal) -> float:
    return math.atan2(goal[1] - point[1], goal[0] - point[0])


def assemble_features(point, est: MotionEstimate, attacker, goal, holonomic: bool) -> np.ndarray:
    """One input row; ``attacker`` may be an (n, 2) array, giving n rows."""
    att = np.atleast_2d(np.asarray(attacker, dtype=float))
    rel = att - np.asarray(point, dtype=float)[:2]
    rng = np.hypot(rel[:, 0], rel[:, 1])
    brg = wrap_pi_array(np.arctan2(rel[:, 1], rel[:, 0]) - est.theta)
    dev = wrap_pi(est.theta - goal_bearing(point, goal))
    v1, v2 = (est.vx, est.vy) if holonomic else (est.v, est.omega)
    rows = np.empty((len(att), 6))
    rows[:, 0] = dev
    rows[:, 1] = v1
    rows[:, 2] = v2
    rows[:, 3] = est.a
    rows[:, 4] = rng
    rows[:, 5] = brg
    return rows


# collection -------------------------------------------------------------------

def sample_in_sector(rng: np.random.Generator, sector: DetectionSector, floor: float, side: int = 0):
    """Uniform in victim-relative polar coordinates over [floor, D] x [alpha_lo, alpha_hi].

    ``side`` +1 or -1 restricts the bearing to the left or right of the heading.
    """
    r = rng.uniform(floor, sector.D)
    lo, hi = sector.alpha_lo, sector.alpha_hi
    if side > 0:
        lo = max(lo, 0.0)
    elif side < 0:
        hi = min(hi, 0.0)
    b = rng.uniform(lo, hi)
    return r, b


def collect_dataset(world: World, sector: DetectionSector, trial_limit: int, seed: int, goal,
                    floor: float = 1.3, tol: float = DEFAULT_DEVIATION_TOL,
                    restart_margin: float = 1.0, quiet: int = 1,
                    persistence: float = 0.0) -> List[TrainingSample]:
    """One trial per window: drop the attacker at a random spot of the learned
    sector, record the inputs, let the window run and record the reaction.

    A sample is kept when the step differs from the previous window's step in
    length or direction. ``quiet`` windows with the attacker withdrawn follow each
    trial so the next inputs start from unperturbed motion. With ``persistence``
    p > 0 each trial stays on the previous trial's side of the heading with
    probability p (otherwise the side is redrawn), so runs of pushes drive the
    victim far off its course; the placement marginal stays uniform for a
    symmetric sector. The mission restarts when the victim nears its goal.
    """
    if trial_limit < 1:
        raise EmptyDatasetError("trial limit must be at least 1")
    if not sector.D > floor:
        raise EmptyDatasetError(f"no feasible placement: sector radius {sector.D} <= floor {floor}")
    rng = np.random.default_rng(seed)
    holonomic = world.victim.kind.is_holonomic
    tT = world.tilde_T

    def warm():
        h = SampleHistory(tT)
        h.push(world.observe())
        for _ in range(3):
            world.advance(None)
            h.push(world.observe())
        return h

    hist = warm()
    out: List[TrainingSample] = []
    side = 0
    for _ in range(trial_limit):
        if world.victim.done or world.remaining() < restart_margin:
            world.restart()
            hist = warm()
        p0 = hist.latest().copy()
        est = hist.last
        if persistence > 0 and (side == 0 or rng.random() >= persistence):
            side = 1 if rng.random() < 0.5 else -1
        r, b = sample_in_sector(rng, sector, floor, side)
        ang = est.theta + b
        att = p0 + r * np.array([math.cos(ang), math.sin(ang)])
        q_in = assemble_features(p0, est, att, goal, holonomic)[0]
        world.advance(att)
        p1 = world.observe()
        hist.push(p1)
        # the turn is measured against the course the victim was already on
        obs = observe_reaction(p0, p1, est.theta)
        if detect_reaction(obs, est.v * tT, tol):
            out.append(TrainingSample(tuple(map(float, q_in)), (obs.delta_s, obs.delta_theta)))
        for _ in range(quiet):
            if world.victim.done:
                break
            world.advance(None)
            hist.push(world.observe())
    if not out:
        raise EmptyDatasetError("the victim never reacted during collection")
    return out


# model ------------------------------------------------------------------------

@dataclass
class Hyperparams:
    kernel: str = "rbf"
    C: float = 10.0
    gamma: Optional[float] = None
    epsilon_fraction: float = 0.01
    tol: float = 1e-3
    holdout: float = 0.2

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class AvoidanceModel:
    regressors: List[EpsilonSVR]
    mean: np.ndarray
    scale: np.ndarray
    degenerate: List[int]
    residual_mean: np.ndarray
    residual_cov: np.ndarray
    r2: List[float] = field(default_factory=list)
    coverage_2sigma: List[float] = field(default_factory=list)
    hyper: Hyperparams = field(default_factory=Hyperparams)
    holonomic: bool = False

    @property
    def residual_std(self) -> np.ndarray:
        return np.sqrt(np.diag(self.residual_cov))

    def standardize(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) / self.scale

    def to_dict(self):
        return {
            "version": MODEL_VERSION,
            "features": list(FEATURES),
            "outputs": list(OUTPUTS),
            "hyper": self.hyper.to_dict(),
            "holonomic": self.holonomic,
            "scaler": {"mean": self.mean.tolist(), "scale": self.scale.tolist(), "degenerate": self.degenerate},
            "regressors": [r.to_dict() for r in self.regressors],
            "residuals": {"mean": self.residual_mean.tolist(), "cov": self.residual_cov.tolist(),
                          "r2": self.r2, "coverage_2sigma": self.coverage_2sigma},
        }

    @classmethod
    def from_dict(cls, d) -> "AvoidanceModel":
        if d.get("version") != MODEL_VERSION:
            raise ContractViolation(f"unsupported model version {d.get('version')!r}")
        sc = d["scaler"]
        res = d["residuals"]
        return cls(
            regressors=[EpsilonSVR.from_dict(r) for r in d["regressors"]],
            mean=np.asarray(sc["mean"], dtype=float), scale=np.asarray(sc["scale"], dtype=float),
            degenerate=list(sc["degenerate"]),
            residual_mean=np.asarray(res["mean"], dtype=float), residual_cov=np.asarray(res["cov"], dtype=float),
            r2=list(res["r2"]), coverage_2sigma=list(res["coverage_2sigma"]),
            hyper=Hyperparams(**d["hyper"]), holonomic=bool(d.get("holonomic", False)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "AvoidanceModel":
        return cls.from_dict(json.loads(text))


def _r2(y, yhat) -> float:
    ss = float(np.sum((y - np.mean(y)) ** 2))
    if ss == 0.0:
        return 1.0 if np.allclose(y, yhat) else 0.0
    return 1.0 - float(np.sum((y - yhat) ** 2)) / ss


def fit(samples: Sequence[TrainingSample], hyper: Optional[Hyperparams] = None, seed: int = 0,
        holonomic: bool = False) -> AvoidanceModel:
    """Standardize, split off a held-out fifth, train one SVR per output and keep
    the held-out residual statistics."""
    hyper = hyper or Hyperparams()
    if len(samples) < MIN_SAMPLES:
        raise UnderdeterminedError(f"need at least {MIN_SAMPLES} samples, got {len(samples)}")
    X = np.array([s.q_in for s in samples], dtype=float)
    Y = np.array([s.q_out for s in samples], dtype=float)
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
        raise InvalidInputError("non-finite values in the dataset")
    perm = np.random.default_rng(seed).permutation(len(X))
    n_hold = max(1, int(round(hyper.holdout * len(X))))
    hold, train = perm[:n_hold], perm[n_hold:]

    mean = X[train].mean(axis=0)
    std = X[train].std(axis=0)
    degenerate = [int(i) for i in np.flatnonzero(std == 0.0)]
    scale = np.where(std == 0.0, 1.0, std)
    Z = (X - mean) / scale
    var_mean = float(np.mean(np.var(Z[train], axis=0)))
    gamma = hyper.gamma if hyper.gamma is not None else 1.0 / (6.0 * max(var_mean, 1e-12))

    regs = []
    for j in range(Y.shape[1]):
        y = Y[train, j]
        eps = hyper.epsilon_fraction * float(np.std(y))
        regs.append(EpsilonSVR(hyper.C, eps, hyper.kernel, gamma, hyper.tol).fit(Z[train], y))

    pred = np.column_stack([r.predict(Z[hold]) for r in regs])
    resid = Y[hold] - pred
    r_mean = resid.mean(axis=0)
    r_cov = np.atleast_2d(np.cov(resid, rowvar=False)) if len(hold) > 1 else np.zeros((2, 2))
    r_cov = 0.5 * (r_cov + r_cov.T)
    sd = np.sqrt(np.diag(r_cov))
    coverage = [float(np.mean(np.abs(resid[:, j]) <= 2 * sd[j])) for j in range(Y.shape[1])]
    r2 = [_r2(Y[hold, j], pred[:, j]) for j in range(Y.shape[1])]
    hyper_used = Hyperparams(**{**hyper.to_dict(), "gamma": gamma})
    return AvoidanceModel(regs, mean, scale, degenerate, r_mean, r_cov, r2, coverage, hyper_used, holonomic)


def predict(model: AvoidanceModel, q_in) -> np.ndarray:
    """(step, turn) for one input row, or an (n, 2) array for n rows."""
    X = np.asarray(q_in, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != len(FEATURES):
        raise InvalidInputError(f"expected {len(FEATURES)} features, got {X.shape[1]}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("non-finite features")
    Z = model.standardize(X)
    out = np.column_stack([r.predict(Z) for r in model.regressors])
    return out[0] if single else out


def predict_pose(model: AvoidanceModel, point, est: MotionEstimate, attacker, goal,
                 sector: DetectionSector, tilde_T: float) -> np.ndarray:
    """Next (x, y, course) of the victim's tracked point for each attacker position.

    Placements outside the learned sector keep the current course and speed.
    """
    att = np.atleast_2d(np.asarray(attacker, dtype=float))
    point = np.asarray(point, dtype=float)[:2]
    step = np.full(len(att), est.v * tilde_T)
    turn = np.zeros(len(att))
    seen = sector.contains_many(att, point, est.theta)
    if seen.any():
        q = assemble_features(point, est, att[seen], goal, model.holonomic)
        out = predict(model, q)
        step[seen] = np.maximum(out[:, 0], 0.0)
        turn[seen] = out[:, 1]
    course = est.theta + turn
    res = np.empty((len(att), 3))
    res[:, 0] = point[0] + step * np.cos(course)
    res[:, 1] = point[1] + step * np.sin(course)
    res[:, 2] = np.mod(course, 2 * math.pi)
    return res


class LearnedModel:
    """Planner-facing wrapper: predicts next (x, y, course) for candidate positions
    from the learned reaction, sector and goal estimate."""

    def __init__(self, model: AvoidanceModel, sector: DetectionSector, goal, tilde_T: float):
        self.model = model
        self.sector = sector
        self.goal = tuple(map(float, goal))
        self.tilde_T = float(tilde_T)

    def predict(self, obs, candidates) -> np.ndarray:
        return predict_pose(self.model, obs.point, obs.estimate, candidates, self.goal, self.sector,
                            self.tilde_T)


def prediction_noise(model: AvoidanceModel, rng: np.random.Generator, n: int = 1) -> np.ndarray:
    """Draws of (step, turn) error from the held-out residual Gaussian."""
    return rng.multivariate_normal(model.residual_mean, model.residual_cov, size=n, method="eigh")
