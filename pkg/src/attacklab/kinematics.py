"""Discrete-time motion models for unicycle and holonomic robots."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import ContractViolation, InvalidStateError, SingularTransformError

TWO_PI = 2.0 * math.pi

UNICYCLE = "unicycle"
PLANAR = "planar"
NONHOLONOMIC = "nonholonomic"
HOLONOMIC = "holonomic"


def normalize_angle(theta: float) -> float:
    """Map an angle into [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    # fmod of a tiny negative value can round up to exactly 2*pi
    if t >= TWO_PI:
        t = 0.0
    return t


def wrap_pi(angle: float) -> float:
    """Map an angle into (-pi, pi]."""
    a = math.fmod(angle + math.pi, TWO_PI)
    if a <= 0.0:
        a += TWO_PI
    return a - math.pi


def wrap_pi_array(angle: np.ndarray) -> np.ndarray:
    a = np.mod(np.asarray(angle) + np.pi, TWO_PI)
    a = np.where(a <= 0.0, a + TWO_PI, a)
    return a - np.pi


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.theta)):
            raise InvalidStateError(f"non-finite pose {self.x!r}, {self.y!r}, {self.theta!r}")
        object.__setattr__(self, "theta", normalize_angle(float(self.theta)))
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    @property
    def xy(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.theta)


@dataclass(frozen=True)
class VelocityCommand:
    """Generalized control: (v, omega) for unicycles, (vx, vy) for planar robots."""

    kind: str
    c1: float
    c2: float

    def __post_init__(self):
        if self.kind not in (UNICYCLE, PLANAR):
            raise ContractViolation(f"unknown command kind {self.kind!r}")
        object.__setattr__(self, "c1", float(self.c1))
        object.__setattr__(self, "c2", float(self.c2))

    @classmethod
    def unicycle(cls, v: float, omega: float) -> "VelocityCommand":
        return cls(UNICYCLE, v, omega)

    @classmethod
    def planar(cls, vx: float, vy: float) -> "VelocityCommand":
        return cls(PLANAR, vx, vy)

    @classmethod
    def zero(cls, kind: str) -> "VelocityCommand":
        return cls(kind, 0.0, 0.0)

    def is_zero(self) -> bool:
        return self.c1 == 0.0 and self.c2 == 0.0

    def as_tuple(self) -> Tuple[float, float]:
        return (self.c1, self.c2)


@dataclass(frozen=True)
class RobotKind:
    variant: str
    hand_offset: float = 0.0

    def __post_init__(self):
        if self.variant not in (NONHOLONOMIC, HOLONOMIC):
            raise ContractViolation(f"unknown robot kind {self.variant!r}")
        if self.variant == NONHOLONOMIC and not self.hand_offset > 0.0:
            raise SingularTransformError("hand offset L must be > 0 for non-holonomic robots")

    @classmethod
    def nonholonomic(cls, hand_offset: float) -> "RobotKind":
        return cls(NONHOLONOMIC, hand_offset)

    @classmethod
    def holonomic(cls) -> "RobotKind":
        return cls(HOLONOMIC, 0.0)

    @property
    def command_kind(self) -> str:
        return UNICYCLE if self.variant == NONHOLONOMIC else PLANAR

    @property
    def is_holonomic(self) -> bool:
        return self.variant == HOLONOMIC


def _check_finite(*vals):
    for v in vals:
        if not math.isfinite(v):
            raise InvalidStateError(f"non-finite input {v!r}")


def step_unicycle(p: Pose, cmd: VelocityCommand, T: float) -> Pose:
    if cmd.kind != UNICYCLE:
        raise ContractViolation("step_unicycle needs a unicycle command")
    if not T > 0:
        raise ContractViolation("T must be positive")
    _check_finite(cmd.c1, cmd.c2, T)
    v, w = cmd.c1, cmd.c2
    return Pose(
        p.x + v * math.cos(p.theta) * T,
        p.y + v * math.sin(p.theta) * T,
        p.theta + w * T,
    )


def step_holonomic(p: Pose, cmd: VelocityCommand, T: float) -> Pose:
    """Component-wise Euler step. Heading follows the displacement, for logging only."""
    if cmd.kind != PLANAR:
        raise ContractViolation("step_holonomic needs a planar command")
    if not T > 0:
        raise ContractViolation("T must be positive")
    _check_finite(cmd.c1, cmd.c2, T)
    vx, vy = cmd.c1, cmd.c2
    theta = math.atan2(vy, vx) if (vx != 0.0 or vy != 0.0) else p.theta
    return Pose(p.x + vx * T, p.y + vy * T, theta)


def hand_transform(p: Pose, L: float, planar_cmd) -> VelocityCommand:
    """Map a planar velocity of the hand point to unicycle (v, omega)."""
    if not L > 0:
        raise SingularTransformError(f"hand offset must be positive, got {L}")
    ux, uy = planar_cmd
    c, s = math.cos(p.theta), math.sin(p.theta)
    return VelocityCommand.unicycle(c * ux + s * uy, (-s * ux + c * uy) / L)


def hand_forward(p: Pose, L: float, cmd: VelocityCommand) -> Tuple[float, float]:
    """Hand-point velocity produced by a unicycle command (inverse of ``hand_transform``)."""
    c, s = math.cos(p.theta), math.sin(p.theta)
    v, w = cmd.c1, cmd.c2
    return (c * v - L * s * w, s * v + L * c * w)


def hand_point(p: Pose, L: float) -> np.ndarray:
    return np.array([p.x + L * math.cos(p.theta), p.y + L * math.sin(p.theta)])


def step(p: Pose, kind: RobotKind, cmd: VelocityCommand, T: float) -> Pose:
    if cmd.kind != kind.command_kind:
        raise ContractViolation(f"{kind.variant} robot cannot execute a {cmd.kind} command")
    if kind.is_holonomic:
        return step_holonomic(p, cmd, T)
    return step_unicycle(p, cmd, T)
