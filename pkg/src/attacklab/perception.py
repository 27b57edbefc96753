"""Attacker-side sensing: finite-difference motion estimates from three position
samples and reaction observation over one sampling window."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ContractViolation, InsufficientHistoryError
from .kinematics import wrap_pi

DEFAULT_DEVIATION_TOL = 1e-4


@dataclass(frozen=True)
class MotionEstimate:
    v: float
    theta: float
    a: float
    omega: float
    vx: float
    vy: float
    timestamp: int = 0
    theta_carried: bool = False


@dataclass(frozen=True)
class ReactionObservation:
    delta_s: float
    delta_theta: float


def estimate_motion(samples: Sequence, tilde_T: float, timestamp: int = 0,
                    previous: Optional[MotionEstimate] = None) -> MotionEstimate:
    """Velocity, heading, acceleration and turn rate from the last three positions.

    Headings come from atan2 of the window displacements; the heading difference is
    wrapped into (-pi, pi] before dividing by the period. A zero latest displacement
    keeps the previous heading and sets ``theta_carried``.
    """
    if len(samples) < 3:
        raise InsufficientHistoryError("three position samples are required")
    if not tilde_T > 0:
        raise ContractViolation("sampling period must be positive")
    p0, p1, p2 = (np.asarray(s, dtype=float)[:2] for s in list(samples)[-3:])
    vx0, vy0 = (p1 - p0) / tilde_T
    vx1, vy1 = (p2 - p1) / tilde_T
    v0 = math.hypot(vx0, vy0)
    v1 = math.hypot(vx1, vy1)
    carried = False
    if v0 > 0:
        th0 = math.atan2(vy0, vx0)
    else:
        th0 = previous.theta if previous is not None else 0.0
    if v1 > 0:
        th1 = math.atan2(vy1, vx1)
    else:
        th1 = th0
        carried = True
    return MotionEstimate(
        v=v1,
        theta=th1 % (2 * math.pi),
        a=(v1 - v0) / tilde_T,
        omega=wrap_pi(th1 - th0) / tilde_T,
        vx=vx1,
        vy=vy1,
        timestamp=timestamp,
        theta_carried=carried,
    )


def observe_reaction(p_start, p_end, nominal_direction: float) -> ReactionObservation:
    """Displacement length and its direction relative to the nominal course."""
    dx = float(p_end[0]) - float(p_start[0])
    dy = float(p_end[1]) - float(p_start[1])
    ds = math.hypot(dx, dy)
    if ds == 0.0:
        return ReactionObservation(0.0, 0.0)
    return ReactionObservation(ds, wrap_pi(math.atan2(dy, dx) - nominal_direction))


def detect_deviation(obs: ReactionObservation, tol: float = DEFAULT_DEVIATION_TOL) -> bool:
    if not tol > 0:
        raise ContractViolation("tolerance must be positive")
    return abs(obs.delta_theta) > tol


def detect_reaction(obs: ReactionObservation, nominal_step: float,
                    tol: float = DEFAULT_DEVIATION_TOL) -> bool:
    """Heading deviation, or a change of step length against the unperturbed step.

    A repulsive field acting exactly along the direction of travel slows the robot
    without turning it, so the head-on radius probe also watches the step length.
    """
    return detect_deviation(obs, tol) or abs(obs.delta_s - nominal_step) > tol


class SampleHistory:
    """Ring buffer of the last three observed positions (single writer)."""

    def __init__(self, tilde_T: float):
        self.tilde_T = tilde_T
        self._buf = deque(maxlen=3)
        self._k = -1
        self.last: Optional[MotionEstimate] = None

    def push(self, point) -> Optional[MotionEstimate]:
        self._buf.append(np.asarray(point, dtype=float)[:2].copy())
        self._k += 1
        if len(self._buf) == 3:
            self.last = estimate_motion(self._buf, self.tilde_T, self._k, self.last)
        return self.last

    def latest(self) -> np.ndarray:
        return self._buf[-1]

    def __len__(self):
        return len(self._buf)
