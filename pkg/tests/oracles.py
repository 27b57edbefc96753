"""Independent reference computations the tests compare against.

None of these share code with the package: the path patterns are integrated
numerically, feasibility is decided by brute force over candidate lines, and
the SVR reference is scikit-learn.
"""

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq


# path patterns ---------------------------------------------------------------
# Local frame: entry at the origin heading +x, trap at (0, -Ld) on the right.

def _arc_end(pos, heading, r, turn):
    """Integrate an arc of radius r through signed angle ``turn`` (left positive)."""
    sgn = 1.0 if turn >= 0 else -1.0
    length = abs(turn) * r
    dx, _ = quad(lambda s: math.cos(heading + sgn * s / r), 0.0, length, epsabs=1e-13, epsrel=1e-13)
    dy, _ = quad(lambda s: math.sin(heading + sgn * s / r), 0.0, length, epsabs=1e-13, epsrel=1e-13)
    return (pos[0] + dx, pos[1] + dy), heading + turn, length


def short_pattern_length(r, Ld):
    """Turn right until the heading ray passes through the trap, then go straight."""
    trap = (0.0, -Ld)

    def miss(turn):
        p, h, _ = _arc_end((0.0, 0.0), 0.0, r, -turn)
        # signed distance of the trap from the heading ray
        return math.cos(h) * (trap[1] - p[1]) - math.sin(h) * (trap[0] - p[0])

    # the ray sweeps across the trap between a quarter and a full half turn
    turn = brentq(miss, math.pi / 2, math.pi, xtol=1e-15)
    p, _, arc = _arc_end((0.0, 0.0), 0.0, r, -turn)
    return arc + math.hypot(trap[0] - p[0], trap[1] - p[1])


def long_pattern_length(r, Ld):
    """Overshoot right by 150 degrees, swing left by 60, then straight to the trap."""
    p, h, a1 = _arc_end((0.0, 0.0), 0.0, r, -5 * math.pi / 6)
    p, h, a2 = _arc_end(p, h, r, math.pi / 3)
    if abs(p[0]) > 1e-9 or abs(math.sin(h) + 1.0) > 1e-9:
        raise AssertionError("long pattern does not end on the entry-trap line")
    return a1 + a2 + math.hypot(p[0], -Ld - p[1])


# feasibility -------------------------------------------------------------------

def _side(o, d, q):
    return np.sign(d[0] * (q[1] - o[1]) - d[1] * (q[0] - o[0]))


def feasible_brute_force(trap, start, goal, n_entry=401):
    """A trap is reachable when, from some point of the nominal path, it lies
    outside the closed forward wedge of +-45 degrees around the path direction.

    Inside the wedge the attacker would have to sit on the goal's side of every
    candidate line through the trap, so the sign conditions cannot all hold.
    """
    s = np.asarray(start, float)
    g = np.asarray(goal, float)
    u = (g - s) / np.hypot(*(g - s))
    c, sn = math.cos(math.pi / 4), math.sin(math.pi / 4)
    left = np.array([c * u[0] - sn * u[1], sn * u[0] + c * u[1]])
    right = np.array([c * u[0] + sn * u[1], -sn * u[0] + c * u[1]])
    t = np.asarray(trap, float)
    for lam in np.linspace(0.0, 1.0, n_entry):
        p = s + lam * (g - s)
        ahead = (t - p) @ u >= 0
        inside = ahead and _side(p, left, t) <= 0 and _side(p, right, t) >= 0
        if not inside:
            return True
    return False


def segment_distance(p, start, goal):
    s = np.asarray(start, float)
    g = np.asarray(goal, float)
    d = g - s
    lam = np.clip((np.asarray(p, float) - s) @ d / (d @ d), 0.0, 1.0)
    return float(np.hypot(*(np.asarray(p, float) - s - lam * d)))


# svr -----------------------------------------------------------------------------

def sklearn_svr(X, y, C, epsilon, gamma, tol=1e-3):
    from sklearn.svm import SVR

    return SVR(kernel="rbf", C=C, epsilon=epsilon, gamma=gamma, tol=tol).fit(X, y)
