import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from attacklab.errors import ContractViolation, InsufficientDataError, InsufficientHistoryError, RankDeficientError
from attacklab.kinematics import Pose, VelocityCommand, step_unicycle
from attacklab.perception import (
    SampleHistory, detect_deviation, detect_reaction, estimate_motion, observe_reaction,
)
from attacklab.probe import TrackSegment, estimate_goal


def unicycle_samples(v, w, T, n=3, theta=0.3):
    p = Pose(1.0, -2.0, theta)
    out = [p.xy]
    for _ in range(n - 1):
        p = step_unicycle(p, VelocityCommand.unicycle(v, w), T)
        out.append(p.xy)
    return out


def test_straight_line_estimate():
    e = estimate_motion([(0, 0), (0.1, 0), (0.2, 0)], 0.1)
    assert (e.v, e.theta, e.a, e.omega) == pytest.approx((1.0, 0.0, 0.0, 0.0))


def test_stationary_keeps_previous_heading():
    prev = estimate_motion([(0, 0), (0, 0.1), (0, 0.2)], 0.1)
    e = estimate_motion([(0, 0.2), (0, 0.2), (0, 0.2)], 0.1, previous=prev)
    assert e.v == 0.0 and e.theta_carried
    assert e.theta == pytest.approx(math.pi / 2)


def test_heading_difference_wraps():
    # course crosses the +x axis clockwise: omega is small and negative
    e = estimate_motion([(0, 0), (1, 0.01), (2, 0.0)], 1.0)
    assert e.omega == pytest.approx(-0.02, abs=1e-4)


def test_needs_three_samples():
    with pytest.raises(InsufficientHistoryError):
        estimate_motion([(0, 0), (1, 0)], 0.1)
    with pytest.raises(ContractViolation):
        estimate_motion([(0, 0), (1, 0), (2, 0)], 0.0)


@given(st.floats(0.05, 1.0), st.floats(-2.0, 2.0), st.floats(0.01, 0.2))
def test_constant_command_recovered_exactly(v, w, T):
    e = estimate_motion(unicycle_samples(v, w, T), T)
    assert abs(e.v - v) <= 1e-9
    assert abs(e.omega - w) <= 1e-9


def test_history_starts_estimating_at_third_sample():
    h = SampleHistory(0.1)
    assert h.push((0, 0)) is None
    assert h.push((0.1, 0)) is None
    e = h.push((0.2, 0))
    assert e.v == pytest.approx(1.0) and e.timestamp == 2
    assert len(h) == 3


def test_reaction_observation():
    obs = observe_reaction((0, 0), (0, 1), 0.0)
    assert obs.delta_s == 1.0 and obs.delta_theta == pytest.approx(math.pi / 2)
    assert detect_deviation(obs)
    straight = observe_reaction((0, 0), (0.5, 0), 0.0)
    assert not detect_deviation(straight)
    # slowed down dead ahead: no turn but a shorter step
    assert detect_reaction(straight, nominal_step=1.0)
    assert not detect_reaction(straight, nominal_step=0.5)


# goal least squares ---------------------------------------------------------------

def test_three_exact_tracks_meet_at_goal():
    goal = np.array([2.0, 14.0])
    tracks = [TrackSegment.through(goal + 7 * np.array([math.cos(a), math.sin(a)]), goal)
              for a in (-1.3, -0.7, -2.2)]
    est = estimate_goal(tracks)
    assert np.hypot(*(np.array(est.position) - goal)) <= 1e-9
    assert est.residual <= 1e-18
    assert est.accepted


def test_parallel_tracks_are_rank_deficient():
    with pytest.raises(RankDeficientError):
        estimate_goal([TrackSegment.through((0, 0), (1, 0)), TrackSegment.through((0, 1), (1, 1))])
    with pytest.raises(InsufficientDataError):
        estimate_goal([TrackSegment.through((0, 0), (1, 0))])


def noisy_tracks(rng, goal, m, sigma):
    tracks = []
    for a in rng.uniform(0, 2 * math.pi, m):
        d = np.array([math.cos(a), math.sin(a)])
        n = np.array([-d[1], d[0]])
        off = rng.normal(0.0, sigma)
        tracks.append(TrackSegment.through(goal - 5 * d + off * n, goal + off * n))
    return tracks


def test_noisy_residual_tracks_noise_variance():
    sigma = 0.05
    rng = np.random.default_rng(3)
    est = estimate_goal(noisy_tracks(rng, np.array([1.0, 2.0]), 200, sigma))
    assert 0.8 * sigma ** 2 <= est.residual <= 1.2 * sigma ** 2
