import math

import pytest
from hypothesis import given, strategies as st

from attacklab.errors import ContractViolation, InvalidStateError, SingularTransformError
from attacklab.kinematics import (
    Pose, RobotKind, VelocityCommand, hand_forward, hand_point, hand_transform, normalize_angle,
    step, step_holonomic, step_unicycle, wrap_pi,
)

angles = st.floats(-50.0, 50.0, allow_nan=False)
speeds = st.floats(-2.0, 2.0, allow_nan=False)


def test_unicycle_straight_step():
    p = step_unicycle(Pose(1.0, 2.0, 0.0), VelocityCommand.unicycle(0.5, 0.0), 0.1)
    assert (p.x, p.y, p.theta) == pytest.approx((1.05, 2.0, 0.0))


def test_unicycle_heading_wraps():
    p = step_unicycle(Pose(0, 0, 6.2), VelocityCommand.unicycle(0.0, 1.0), 0.1)
    assert p.theta == pytest.approx(6.3 - 2 * math.pi)


def test_holonomic_step_and_logging_heading():
    p = step_holonomic(Pose(0, 0, 1.0), VelocityCommand.planar(0.0, 0.5), 0.2)
    assert (p.x, p.y) == pytest.approx((0.0, 0.1))
    assert p.theta == pytest.approx(math.pi / 2)
    # no motion keeps the previous heading
    assert step_holonomic(Pose(0, 0, 1.0), VelocityCommand.planar(0, 0), 0.2).theta == 1.0


def test_command_kind_must_match_robot():
    with pytest.raises(ContractViolation):
        step(Pose(0, 0), RobotKind.holonomic(), VelocityCommand.unicycle(1, 0), 0.1)


def test_rejects_bad_inputs():
    with pytest.raises(InvalidStateError):
        Pose(float("nan"), 0.0)
    with pytest.raises(ContractViolation):
        step_unicycle(Pose(0, 0), VelocityCommand.unicycle(1, 0), 0.0)
    with pytest.raises(SingularTransformError):
        hand_transform(Pose(0, 0), 0.0, (1.0, 0.0))
    with pytest.raises(SingularTransformError):
        RobotKind.nonholonomic(0.0)


@given(angles)
def test_normalize_angle_range(theta):
    t = normalize_angle(theta)
    assert 0.0 <= t < 2 * math.pi
    assert math.isclose(math.cos(t), math.cos(theta), abs_tol=1e-9)


@given(angles)
def test_wrap_pi_range(theta):
    a = wrap_pi(theta)
    assert -math.pi < a <= math.pi
    assert math.isclose(math.sin(a), math.sin(theta), abs_tol=1e-9)


@given(st.floats(0, 2 * math.pi), speeds, speeds, st.floats(0.05, 1.0))
def test_hand_transform_round_trip(theta, ux, uy, L):
    p = Pose(0.3, -1.0, theta)
    back = hand_forward(p, L, hand_transform(p, L, (ux, uy)))
    assert back == pytest.approx((ux, uy), abs=1e-9)


@given(st.floats(0, 2 * math.pi), speeds, speeds)
def test_hand_point_tracks_planar_velocity(theta, ux, uy):
    # the hand moves by u*T up to the rotation term |u|^2 T^2 / L
    L, T = 0.2, 1e-4
    p = Pose(0.0, 0.0, theta)
    q = step_unicycle(p, hand_transform(p, L, (ux, uy)), T)
    moved = hand_point(q, L) - hand_point(p, L)
    assert moved == pytest.approx((ux * T, uy * T), abs=(ux * ux + uy * uy) * T * T / L + 1e-12)
