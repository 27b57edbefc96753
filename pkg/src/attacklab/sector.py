from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .kinematics import wrap_pi, wrap_pi_array


@dataclass(frozen=True)
class DetectionSector:
    """Obstacle detection region: radius ``D`` and bearing range relative to heading."""

    D: float
    alpha_lo: float
    alpha_hi: float

    def __post_init__(self):
        if not self.D > 0:
            raise ContractViolation("sector radius must be positive")
        if not (-math.pi - 1e-12 <= self.alpha_lo < self.alpha_hi <= math.pi + 1e-12):
            raise ContractViolation("sector needs -pi <= alpha_lo < alpha_hi <= pi")

    @property
    def full_circle(self) -> bool:
        return self.alpha_lo <= -math.pi + 1e-12 and self.alpha_hi >= math.pi - 1e-12

    def contains(self, q, origin, heading: float) -> bool:
        dx = float(q[0]) - float(origin[0])
        dy = float(q[1]) - float(origin[1])
        if math.hypot(dx, dy) > self.D:
            return False
        if self.full_circle:
            return True
        rel = wrap_pi(math.atan2(dy, dx) - heading)
        return self.alpha_lo <= rel <= self.alpha_hi

    def contains_many(self, qs, origin, heading: float) -> np.ndarray:
        qs = np.asarray(qs, dtype=float).reshape(-1, 2)
        dx = qs[:, 0] - origin[0]
        dy = qs[:, 1] - origin[1]
        inside = np.hypot(dx, dy) <= self.D
        if self.full_circle:
            return inside
        rel = wrap_pi_array(np.arctan2(dy, dx) - heading)
        return inside & (rel >= self.alpha_lo) & (rel <= self.alpha_hi)

    def to_dict(self):
        return {"D": self.D, "alpha_lo": self.alpha_lo, "alpha_hi": self.alpha_hi}

    @classmethod
    def from_dict(cls, d) -> "DetectionSector":
        return cls(float(d["D"]), float(d["alpha_lo"]), float(d["alpha_hi"]))
