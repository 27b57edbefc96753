import csv
import io
import math

import pytest
from hypothesis import given, strategies as st

from attacklab.analysis import (
    BOUND_COLUMNS, bound_sweep_csv, optimality_gap_bounds, path_bounds, trace_metrics,
)
from attacklab.errors import ContractViolation, OutOfRegimeError
from attacklab.kinematics import Pose
from attacklab.trace import TraceRecord

from oracles import long_pattern_length, short_pattern_length

radius = st.floats(0.01, 3.0)


def regime(r, slack):
    return (math.sqrt(3) + 1) * r * (1.0 + slack) + 1e-6


def test_reference_point():
    b = path_bounds(1.0, 10.0)
    assert b.phi == pytest.approx(0.11134, abs=1e-5)
    assert b.l_min == pytest.approx(10.626, abs=1e-3)
    assert b.l_max == pytest.approx(10.933, abs=1e-3)
    assert optimality_gap_bounds(1.0, 1.0, 10.0) == pytest.approx((0.626, 0.933), abs=1e-3)


def test_closed_forms_match_integrated_patterns():
    b = path_bounds(1.0, 10.0)
    assert abs(b.l_min - short_pattern_length(1.0, 10.0)) <= 1e-6
    assert abs(b.l_max - long_pattern_length(1.0, 10.0)) <= 1e-6


def test_zero_radius_collapses_to_straight_line():
    b = path_bounds(1e-12, 10.0)
    assert b.l_min == pytest.approx(10.0) and b.l_max == pytest.approx(10.0)
    lo, hi = optimality_gap_bounds(0.0, 0.0, 10.0)
    assert lo == pytest.approx(0.0, abs=1e-12) and hi == 0.0


def test_out_of_regime():
    with pytest.raises(OutOfRegimeError):
        path_bounds(1.0, 2.5)
    with pytest.raises(OutOfRegimeError):
        optimality_gap_bounds(1.0, 1.0, 1.5)
    with pytest.raises(ContractViolation):
        optimality_gap_bounds(2.0, 1.0, 10.0)


@given(radius, st.floats(0.0, 10.0))
def test_long_pattern_always_longer(r, slack):
    b = path_bounds(r, regime(r, slack))
    # the margin shrinks to ~0.066 r at the regime boundary
    assert b.l_max - b.l_min >= 0.06 * r


@given(radius, st.floats(3.51, 100.0))
def test_long_pattern_margin_away_from_boundary(r, ratio):
    b = path_bounds(r, ratio * r)
    assert b.l_max - b.l_min >= 0.16 * r


@given(radius, st.floats(0.01, 0.5), st.floats(0.0, 5.0))
def test_bounds_increase_with_radius(r, dr, slack):
    Ld = regime(r + dr, slack)
    a, b = path_bounds(r, Ld), path_bounds(r + dr, Ld)
    assert b.l_min >= a.l_min and b.l_max >= a.l_max


@given(radius, st.floats(0.0, 5.0), st.floats(0.0, 5.0))
def test_gap_upper_does_not_depend_on_distance(r, s1, s2):
    _, u1 = optimality_gap_bounds(r, r, regime(r, s1))
    _, u2 = optimality_gap_bounds(r, r, regime(r, s2))
    assert u1 == u2


def test_bound_table_columns_and_regime_filter():
    rows = list(csv.DictReader(io.StringIO(bound_sweep_csv([1.0], [2.0, 10.0]))))
    assert tuple(rows[0]) == BOUND_COLUMNS
    assert len(rows) == 1 and float(rows[0]["Ld"]) == 10.0


def record(k, x, active, phase="attack", predicted=None):
    return TraceRecord(k=k, t=0.1 * k, victim=Pose(x, 0.0, 0.0), victim_ref=(x, 0.0),
                       attacker=Pose(x, 2.0, 0.0), victim_cmd=(1.0, 0.0),
                       attacker_cmd=(0.1, 0.0) if active else (0.0, 0.0), d=10.0 - x, active=active,
                       predicted=predicted, phase=phase)


def test_straight_run_metrics():
    trace = [record(0, 0.0, False, phase="wait")]
    trace += [record(k, 0.1 * (k - 1), k % 2 == 0) for k in range(1, 7)]
    m = trace_metrics(trace, trap=(10.0, 0.0))
    assert m.path_length_after_entry == pytest.approx(0.5, abs=1e-9)
    assert m.horizon_h == 5 and m.active_count == 3
    assert m.handsoff_ratio == pytest.approx(0.4)
    assert m.path_to_trap == pytest.approx(10.0)


def test_idle_run_has_full_handsoff_ratio():
    trace = [record(k, 0.1 * k, False, phase="idle") for k in range(5)]
    assert trace_metrics(trace).handsoff_ratio == 1.0
