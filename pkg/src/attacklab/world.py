"""Ground-truth simulation: the victim robot and the shared sampling clock.

The victim integrates every control period ``T``; the attacker acts and observes
every ``tilde_T = N * T``. The attacker's position is updated at window boundaries
and is held fixed while the victim integrates the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np

from .avoidance import ApfParams, DwaEvaluator, DwaParams, ObstacleSet, apf_control
from .kinematics import Pose, RobotKind, VelocityCommand, hand_point, step
from .sector import DetectionSector


@dataclass(frozen=True)
class VictimState:
    pose: Pose
    cmd: VelocityCommand
    done: bool = False


class Victim:
    """A go-to-goal robot that avoids obstacles seen inside its detection sector.

    The sector apex is the robot's reference point: the centre for holonomic
    robots and the hand point for unicycles. The attacker tracks the same point.
    """

    def __init__(self, kind: RobotKind, start: Pose, goal, controller: Union[ApfParams, DwaParams],
                 sector: DetectionSector, T: float, static_obstacles: Optional[ObstacleSet] = None,
                 attacker_radius: float = 0.0, goal_tolerance: float = 0.05, react: bool = True):
        if isinstance(controller, DwaParams) and kind.is_holonomic:
            raise ValueError("DWA is only defined for non-holonomic victims")
        self.kind = kind
        self.start = start
        self.goal = np.asarray(goal, dtype=float)
        self.controller = controller
        self.sector = sector
        self.T = float(T)
        self.static = static_obstacles if static_obstacles is not None else ObstacleSet()
        self.attacker_radius = attacker_radius
        self.goal_tolerance = goal_tolerance
        self.react = react
        self.reset()

    def reset(self):
        self.pose = self.start
        self.cmd = VelocityCommand.zero(self.kind.command_kind)
        self.done = False

    # state handling -----------------------------------------------------
    def snapshot(self) -> VictimState:
        return VictimState(self.pose, self.cmd, self.done)

    def restore(self, s: VictimState):
        self.pose, self.cmd, self.done = s.pose, s.cmd, s.done

    # geometry -------------------------------------------------------------
    @property
    def L(self) -> float:
        return self.kind.hand_offset

    def ref_point(self, pose: Optional[Pose] = None) -> np.ndarray:
        pose = self.pose if pose is None else pose
        if self.kind.is_holonomic:
            return pose.xy
        return hand_point(pose, self.L)

    def sees(self, attacker, pose: Optional[Pose] = None) -> bool:
        if attacker is None or not self.react:
            return False
        pose = self.pose if pose is None else pose
        return self.sector.contains(attacker, self.ref_point(pose), pose.theta)

    def visible_obstacles(self, attacker) -> ObstacleSet:
        if self.sees(attacker):
            return self.static.with_obstacle(attacker, self.attacker_radius)
        return self.static

    # control ----------------------------------------------------------------
    def _at_goal(self) -> bool:
        return float(np.hypot(*(self.ref_point() - self.goal))) <= self.goal_tolerance

    def control(self, attacker) -> VelocityCommand:
        if self.done or self._at_goal():
            self.done = True
            return VelocityCommand.zero(self.kind.command_kind)
        obstacles = self.visible_obstacles(attacker)
        if isinstance(self.controller, ApfParams):
            return apf_control(self.pose, self.goal, obstacles, self.controller, self.kind)
        ev = DwaEvaluator(self.pose, self.cmd, self.goal, obstacles, self.controller, self.T)
        idx, emergency = ev.select()
        return ev.command(int(idx[0]), bool(emergency[0]))

    def step(self, attacker) -> VelocityCommand:
        cmd = self.control(attacker)
        self.pose = step(self.pose, self.kind, cmd, self.T)
        self.cmd = cmd
        return cmd

    # oracle prediction --------------------------------------------------
    def predict_batch(self, candidates, steps: int = 1) -> np.ndarray:
        """Next-window (ref_x, ref_y, heading) for each candidate attacker position.

        Runs the true controller; the victim's own state is left untouched.
        """
        cands = np.asarray(candidates, dtype=float).reshape(-1, 2)
        out = np.empty((len(cands), 3))
        if steps == 1 and isinstance(self.controller, DwaParams) and not (self.done or self._at_goal()):
            pose = self.pose
            ref = self.ref_point()
            ev = DwaEvaluator(pose, self.cmd, self.goal, self.static, self.controller, self.T)
            vis = (self.sector.contains_many(cands, ref, pose.theta) if self.react
                   else np.zeros(len(cands), bool))
            idx, emergency = ev.select(cands, vis, self.attacker_radius)
            v = np.where(emergency, 0.0, ev.vs[idx])
            w = np.where(emergency, 0.0, ev.ws[idx])
            x = pose.x + v * math.cos(pose.theta) * self.T
            y = pose.y + v * math.sin(pose.theta) * self.T
            th = np.mod(pose.theta + w * self.T, 2 * math.pi)
            out[:, 0] = x + self.L * np.cos(th)
            out[:, 1] = y + self.L * np.sin(th)
            out[:, 2] = th
            return out
        saved = self.snapshot()
        try:
            for i, c in enumerate(cands):
                for _ in range(steps):
                    self.step(c)
                r = self.ref_point()
                out[i] = (r[0], r[1], self.pose.theta)
                self.restore(saved)
        finally:
            self.restore(saved)
        return out


class World:
    """Victim plus attacker on one clock; ``advance`` moves one sampling window."""

    def __init__(self, victim: Victim, N: int = 1):
        if N < 1:
            raise ValueError("tilde_N must be >= 1")
        self.victim = victim
        self.N = int(N)
        self.attacker: Optional[np.ndarray] = None
        self.k = 0
        self.restarts = 0

    @property
    def T(self) -> float:
        return self.victim.T

    @property
    def tilde_T(self) -> float:
        return self.N * self.victim.T

    def observe(self) -> np.ndarray:
        return self.victim.ref_point().copy()

    def advance(self, attacker) -> List[VelocityCommand]:
        self.attacker = None if attacker is None else np.asarray(attacker, dtype=float).copy()
        cmds = [self.victim.step(self.attacker) for _ in range(self.N)]
        self.k += 1
        return cmds

    def restart(self):
        """Send the victim back to its start (a fresh run of the same mission)."""
        self.victim.reset()
        self.attacker = None
        self.restarts += 1

    def remaining(self) -> float:
        return float(np.hypot(*(self.observe() - self.victim.goal)))
