import numpy as np
import pytest
from hypothesis import given, strategies as st

from attacklab.attack import (
    classify_region, entry_point, epsilon_equivalent, side_of, trap_feasible, trap_side,
)
from attacklab.errors import ContractViolation, DegenerateTrajectoryError

from oracles import feasible_brute_force, segment_distance

START, GOAL = (0.0, 0.0), (10.0, 0.0)
coords = st.floats(-30.0, 30.0, allow_nan=False)


def test_side_of_segment():
    seg = [(0, 0), (1, 0)]
    assert side_of((0.5, 1), seg) == 1
    assert side_of((0.5, -1), seg) == -1
    assert side_of((0.5, 0), seg) == 0
    with pytest.raises(DegenerateTrajectoryError):
        side_of((0, 1), [(1, 1), (1, 1)])
    with pytest.raises(ContractViolation):
        side_of((0, 1), [(1, 1)])


def test_side_of_uses_nearest_segment():
    poly = [(0, 0), (2, 0), (2, 2)]
    assert side_of((2.5, 1.5), poly) == -1
    assert side_of((1.0, 0.5), poly) == 1


def test_trap_side_disc_cut_by_motion_line():
    assert trap_side((5, 0.2), 0.3, (0, 0), 0.0) == 0
    assert trap_side((5, 1.0), 0.3, (0, 0), 0.0) == 1


def test_regions():
    assert classify_region((5, -3), START, GOAL) == "S1"
    assert classify_region((-5, 0), START, GOAL) == "S2"
    assert classify_region((15, 0), START, GOAL) == "S3"
    assert classify_region((5, -20), START, GOAL) == "S4"


def test_entry_points():
    assert entry_point((5, -3), START, GOAL).point == pytest.approx((5, 0))
    assert entry_point((4, 0), START, GOAL).point == pytest.approx((4, 0))
    s2 = entry_point((-5, 1), START, GOAL)
    assert s2.point == pytest.approx(START) and s2.marker == "attack-early"
    assert entry_point((15, 0), START, GOAL).marker == "attack-late"
    # both projections of (5, -20) clip to an end at equal distance; ties go to the start
    s4 = entry_point((5, -20), START, GOAL)
    assert s4.region == "S4" and s4.point == pytest.approx((0, 0))


def test_s4_projection_picks_nearer_point():
    # candidates a - |s| = 1 and a + |s| = 13 clipped to 10; (10, 0) is nearer
    ep = entry_point((7, 6), START, GOAL)
    assert ep.region == "S4"
    assert ep.point == pytest.approx((10.0, 0.0))


def test_feasibility_examples():
    assert trap_feasible((5, 2), START, GOAL)
    assert not trap_feasible((15, 1), START, GOAL)
    assert trap_feasible(GOAL, START, GOAL)
    # beyond the goal but outside the 45 degree cone
    assert trap_feasible((12, 5), START, GOAL)


@given(coords, coords)
def test_feasibility_matches_brute_force(x, y):
    expect = segment_distance((x, y), START, GOAL) <= 0.3 or feasible_brute_force((x, y), START, GOAL)
    assert trap_feasible((x, y), START, GOAL, 0.3) == expect


@given(st.lists(st.tuples(coords, coords), min_size=1, max_size=6), st.floats(0.0, 1.0))
def test_epsilon_equivalence(u, eps):
    a = np.array(u)
    assert epsilon_equivalent(a, a, 0.0)
    shifted = a + eps / 2
    assert epsilon_equivalent(a, shifted, eps)
    assert not epsilon_equivalent(a, a + eps + 0.1, eps)
