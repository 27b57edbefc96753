"""Static figures of a finished run. Files only, no display."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .analysis import path_bounds  # noqa: E402
from .errors import OutOfRegimeError  # noqa: E402

# fixed metadata keeps repeated renders byte-identical
_PNG_META = {"Software": None}


def _save(fig, path) -> Path:
    p = Path(path)
    fig.savefig(p, dpi=110, metadata=_PNG_META)
    plt.close(fig)
    return p


def plot_trajectory(trace, trap, capture_radius: float, goal, path, entry=None, title: str = "") -> Path:
    v = np.array([r.victim_ref for r in trace])
    a = np.array([r.attacker.as_tuple()[:2] for r in trace])
    attacking = np.array([r.phase != "wait" for r in trace])
    active = np.array([r.active for r in trace])
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot(v[:, 0], v[:, 1], "-", color="tab:blue", lw=1.5, label="victim")
    if attacking.any():
        ax.plot(a[attacking, 0], a[attacking, 1], "-", color="tab:red", lw=0.8, alpha=0.7, label="attacker")
        ax.plot(a[active, 0], a[active, 1], ".", color="tab:red", ms=3)
        idle = attacking & ~active
        ax.plot(a[idle, 0], a[idle, 1], "o", mfc="none", color="tab:gray", ms=4, label="attacker idle")
    ax.add_patch(plt.Circle(trap, capture_radius, color="tab:green", alpha=0.35))
    ax.plot(*trap, "x", color="tab:green", label="trap")
    ax.plot(*goal, "*", color="k", ms=10, label="goal")
    ax.plot(v[0, 0], v[0, 1], "s", color="tab:blue", ms=5)
    if entry is not None:
        ax.plot(*entry, "d", color="tab:orange", label="entry point")
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    if title:
        ax.set_title(title)
    return _save(fig, path)


def plot_distance(trace, capture_radius: float, path) -> Path:
    """Distance to the trap over time with the attacker's state underneath
    (1 moving, 0 staying still)."""
    recs = [r for r in trace if r.phase != "wait"]
    if not recs:
        recs = list(trace)
    k = np.array([r.k for r in recs])
    d = np.array([r.d for r in recs])
    state = np.array([1 if r.active else 0 for r in recs])
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 4.5), sharex=True, gridspec_kw={"height_ratios": [3, 1]})
    ax1.plot(k, d, color="tab:blue")
    ax1.axhline(capture_radius, color="tab:green", ls="--", lw=1)
    ax1.set_ylabel("distance to trap [m]")
    ax1.grid(alpha=0.3)
    ax2.step(k, state, where="post", color="tab:red")
    ax2.set_yticks([0, 1])
    ax2.set_ylabel("state")
    ax2.set_xlabel("step k")
    fig.tight_layout()
    return _save(fig, path)


def plot_bounds(radii: Sequence[float], distances: Sequence[float], path, measured: Optional[tuple] = None) -> Path:
    """Short and long pattern lengths over the trap distance for a few radii;
    ``measured`` = (Ld, path length) marks a run."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for r in radii:
        xs, lo, hi = [], [], []
        for Ld in distances:
            try:
                b = path_bounds(r, Ld)
            except OutOfRegimeError:
                continue
            xs.append(Ld)
            lo.append(b.l_min)
            hi.append(b.l_max)
        if xs:
            line, = ax.plot(xs, lo, label=f"r={r:.2f} short")
            ax.plot(xs, hi, ls="--", color=line.get_color(), label=f"r={r:.2f} long")
    if measured is not None and all(map(math.isfinite, measured)):
        ax.plot(*measured, "ko", label="run")
    ax.set_xlabel("trap distance from entry [m]")
    ax.set_ylabel("path length [m]")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=7)
    fig.tight_layout()
    return _save(fig, path)
