"""Per-window trace records and the attack outcome container."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .kinematics import Pose

Vec2 = Tuple[float, float]


@dataclass
class TraceRecord:
    """State at the start of window ``k`` plus what happened during it.

    ``attacker`` is the attacker pose held during the window (the position the
    victim reacts to); ``attacker_cmd`` is the displacement that brought it
    there divided by the sampling period. ``victim_ref`` is the tracked point of
    the victim (hand point for unicycles) and ``d`` its distance to the trap.
    """

    k: int
    t: float
    victim: Pose
    victim_ref: Vec2
    attacker: Pose
    victim_cmd: Vec2
    attacker_cmd: Vec2
    d: float
    active: bool
    predicted: Optional[Pose] = None
    heading_est: Optional[float] = None
    phase: str = "wait"

    def to_dict(self):
        return {
            "k": self.k,
            "t": self.t,
            "victim": list(self.victim.as_tuple()),
            "victim_ref": list(self.victim_ref),
            "attacker": list(self.attacker.as_tuple()),
            "victim_cmd": list(self.victim_cmd),
            "attacker_cmd": list(self.attacker_cmd),
            "d": self.d,
            "active": self.active,
            "predicted": None if self.predicted is None else list(self.predicted.as_tuple()),
            "heading_est": self.heading_est,
            "phase": self.phase,
        }

    @classmethod
    def from_dict(cls, d) -> "TraceRecord":
        return cls(
            k=int(d["k"]),
            t=float(d["t"]),
            victim=Pose(*d["victim"]),
            victim_ref=tuple(d["victim_ref"]),
            attacker=Pose(*d["attacker"]),
            victim_cmd=tuple(d["victim_cmd"]),
            attacker_cmd=tuple(d["attacker_cmd"]),
            d=float(d["d"]),
            active=bool(d["active"]),
            predicted=None if d.get("predicted") is None else Pose(*d["predicted"]),
            heading_est=d.get("heading_est"),
            phase=d.get("phase", "wait"),
        )


@dataclass
class AttackOutcome:
    success: bool
    horizon_h: int
    inputs: List[Vec2]
    path_length_after_entry: float
    active_count: int
    trace: List[TraceRecord] = field(default_factory=list)
    strategy: str = "shortest"
    status: str = "ok"
    entry_point: Optional[Vec2] = None
    entry_marker: str = ""
    region: str = ""
    attack_start: Optional[int] = None

    def summary(self):
        return {
            "strategy": self.strategy,
            "success": self.success,
            "status": self.status,
            "horizon_h": self.horizon_h,
            "active_count": self.active_count,
            "path_length_after_entry": self.path_length_after_entry,
            "entry_point": None if self.entry_point is None else list(self.entry_point),
            "entry_marker": self.entry_marker,
            "region": self.region,
            "attack_start": self.attack_start,
            "steps": len(self.trace),
        }
