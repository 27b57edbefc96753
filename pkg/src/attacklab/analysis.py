"""Closed-form path bounds, reaction-radius measurement and trace metrics."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import ContractViolation, OutOfRegimeError
from .sector import DetectionSector
from .trace import AttackOutcome, TraceRecord

# turn right 5pi/6, then left pi/3, lands on the entry->trap line (1+sqrt3) r out
LONG_PATTERN_EXCESS = 7 * math.pi / 6 - 1 - math.sqrt(3)


@dataclass(frozen=True)
class PathBounds:
    l_min: float
    l_max: float
    phi: float


def _tangent_angle(r: float, Ld: float) -> float:
    return math.asin(r / (Ld - r)) if r > 0 else 0.0


def path_bounds(r: float, Ld: float) -> PathBounds:
    """Shortest and longest victim path from the entry point to the trap.

    ``r`` is the turning radius under attack, ``Ld`` the entry-to-trap distance.
    The short pattern turns toward the trap and leaves on a tangent; the long one
    first overshoots away and then swings back onto the entry-trap line.
    """
    if not (r >= 0 and math.isfinite(r)) or not math.isfinite(Ld):
        raise ContractViolation("radius and distance must be finite, radius >= 0")
    if not (Ld > (math.sqrt(3) + 1) * r and Ld > 2 * r):
        raise OutOfRegimeError(f"need Ld > (sqrt(3)+1) r, got r={r}, Ld={Ld}")
    phi = _tangent_angle(r, Ld)
    l_min = (math.pi / 2 + phi - math.cos(phi)) * r + Ld * math.cos(phi)
    l_max = LONG_PATTERN_EXCESS * r + Ld
    return PathBounds(l_min, l_max, phi)


def optimality_gap_bounds(r_min: float, r_max: float, Ld: float):
    """Interval that the realized path length minus ``Ld`` must fall in."""
    if not (0 <= r_min <= r_max) or not math.isfinite(r_max):
        raise ContractViolation("need 0 <= r_min <= r_max < inf")
    if not Ld > 2 * r_min:
        raise OutOfRegimeError(f"need Ld > 2 r_min, got r_min={r_min}, Ld={Ld}")
    phi = _tangent_angle(r_min, Ld)
    lower = (math.pi / 2 + phi - math.cos(phi)) * r_min + Ld * (math.cos(phi) - 1)
    upper = LONG_PATTERN_EXCESS * r_max
    return lower, upper


def bound_sweep_rows(radii: Sequence[float], distances: Sequence[float]) -> List[Dict]:
    rows = []
    for r in radii:
        for Ld in distances:
            try:
                b = path_bounds(r, Ld)
            except OutOfRegimeError:
                continue
            rows.append({"r": r, "Ld": Ld, "phi": b.phi, "lMin": b.l_min, "lMax": b.l_max,
                         "gapLower": b.l_min - Ld, "gapUpper": b.l_max - Ld})
    return rows


BOUND_COLUMNS = ("r", "Ld", "phi", "lMin", "lMax", "gapLower", "gapUpper")


def bound_sweep_csv(radii, distances) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BOUND_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in bound_sweep_rows(radii, distances):
        w.writerow({k: repr(float(v)) for k, v in row.items()})
    return buf.getvalue()


# reaction radii -------------------------------------------------------------

OMEGA_FLOOR = 1e-9


@dataclass
class ReactionRadius:
    label: str
    distance: float
    bearing: float
    radius: float
    infinite: bool


@dataclass
class RadiusReport:
    probes: List[ReactionRadius] = field(default_factory=list)

    def finite(self) -> List[float]:
        return [p.radius for p in self.probes if not p.infinite]

    @property
    def r_min(self) -> float:
        f = self.finite()
        return min(f) if f else math.inf

    @property
    def r_max(self) -> float:
        f = self.finite()
        return max(f) if f else math.inf

    def by_label(self, label: str) -> ReactionRadius:
        for p in self.probes:
            if p.label == label:
                return p
        raise KeyError(label)


def extreme_positions(sector: DetectionSector, eta: float, side: int = 1, inset: float = 0.05,
                      frontal_fraction: float = 0.1):
    """Four corner placements of the attacker in the sector, on one side.

    p1 near and almost frontal, p2 near and at the sector edge, p3 far at the
    edge, p4 far and almost frontal.
    """
    edge = sector.alpha_hi if side > 0 else sector.alpha_lo
    edge = edge - math.copysign(inset, edge)
    front = frontal_fraction * edge
    far = sector.D - inset
    return {"p1": (eta, front), "p2": (eta, edge), "p3": (far, edge), "p4": (far, front)}


def measure_reaction_radii(world_factory, sector: DetectionSector, eta: float, warmup: int = 20,
                           windows: int = 3, grid: int = 9, grid_distance: Optional[float] = None,
                           side: int = 1) -> RadiusReport:
    """Turning radius v/|omega| of the victim centre against a static attacker.

    Each probe restarts from the same warmed-up victim state, drops the attacker at
    a fixed (distance, bearing) from the reference point and averages the executed
    commands over the first ``windows`` windows. A grid of bearings across the
    sector is probed at ``grid_distance`` in addition to the four corner positions.
    """
    world = world_factory()
    for _ in range(warmup):
        world.advance(None)
    victim = world.victim
    base = victim.snapshot()
    ref = victim.ref_point()
    heading = victim.pose.theta

    placements = dict(extreme_positions(sector, eta, side))
    if grid > 0:
        gd = grid_distance if grid_distance is not None else 0.5 * (eta + sector.D)
        lo = sector.alpha_lo + 0.05
        hi = sector.alpha_hi - 0.05
        for i, b in enumerate(np.linspace(lo, hi, grid)):
            placements[f"g{i}"] = (gd, float(b))

    report = RadiusReport()
    for label, (dist, bearing) in placements.items():
        victim.restore(base)
        q = ref + dist * np.array([math.cos(heading + bearing), math.sin(heading + bearing)])
        vs, ws = [], []
        for _ in range(windows):
            for cmd in world.advance(q):
                if cmd.kind == "unicycle":
                    vs.append(abs(cmd.c1))
                    ws.append(abs(cmd.c2))
                else:
                    vs.append(math.hypot(cmd.c1, cmd.c2))
                    ws.append(math.nan)
        if cmd.kind == "planar":
            radius, infinite = _planar_radius(world, victim, base, q, windows)
        else:
            w = float(np.mean(ws))
            infinite = w < OMEGA_FLOOR
            radius = math.inf if infinite else float(np.mean(vs)) / w
        report.probes.append(ReactionRadius(label, dist, bearing, radius, infinite))
    victim.restore(base)
    return report


def _planar_radius(world, victim, base, q, windows):
    # holonomic robots have no heading: use the course angle of the displacement
    victim.restore(base)
    pts = [victim.ref_point().copy()]
    for _ in range(windows + 1):
        world.advance(q)
        pts.append(victim.ref_point().copy())
    pts = np.array(pts)
    d = np.diff(pts, axis=0)
    speed = np.hypot(d[:, 0], d[:, 1]) / world.tilde_T
    course = np.unwrap(np.arctan2(d[:, 1], d[:, 0]))
    w = float(np.mean(np.abs(np.diff(course)))) / world.tilde_T
    if w < OMEGA_FLOOR:
        return math.inf, True
    return float(np.mean(speed[1:])) / w, False


# trace metrics --------------------------------------------------------------

@dataclass(frozen=True)
class TraceMetrics:
    path_length_after_entry: float
    active_count: int
    horizon_h: int
    handsoff_ratio: float
    final_distance: float
    objective: float
    path_to_trap: float = math.nan


def _first_attack_index(trace: Sequence[TraceRecord]) -> Optional[int]:
    for i, r in enumerate(trace):
        if r.phase != "wait":
            return i
    return None


def trace_metrics(source, trap=None) -> TraceMetrics:
    """Path length from the first attack step to the end, activity counts and the
    sum of predicted step lengths over attack steps.

    With ``trap`` given, ``path_to_trap`` is the victim centre's path over the same
    span plus the straight remainder to the trap centre. This is the quantity the
    turning-radius bounds speak about: they describe the centre, and capture
    happens up to ``delta`` short of the trap.
    """
    trace = source.trace if isinstance(source, AttackOutcome) else list(source)
    if not trace:
        return TraceMetrics(0.0, 0, 0, 1.0, math.nan, 0.0)
    first = _first_attack_index(trace)
    if first is None:
        return TraceMetrics(0.0, 0, 0, 1.0, trace[-1].d, 0.0)
    pts = np.array([r.victim_ref for r in trace[first:]], dtype=float)
    length = _polyline_length(pts)
    steps = [r for r in trace[first + 1:] if r.phase != "end"]
    active = sum(1 for r in steps if r.active)
    H = len(steps)
    ratio = 1.0 - active / H if H > 0 else 1.0
    objective = 0.0
    for r in steps:
        if r.predicted is not None:
            objective += math.hypot(r.predicted.x - r.victim_ref[0], r.predicted.y - r.victim_ref[1])
    to_trap = math.nan
    if trap is not None:
        centres = np.array([(r.victim.x, r.victim.y) for r in trace[first:]], dtype=float)
        to_trap = _polyline_length(centres) + math.hypot(centres[-1, 0] - trap[0], centres[-1, 1] - trap[1])
    return TraceMetrics(length, active, H, ratio, trace[-1].d, objective, to_trap)


def _polyline_length(pts: np.ndarray) -> float:
    if len(pts) < 2:
        return 0.0
    return float(np.sum(np.hypot(*np.diff(pts, axis=0).T)))
