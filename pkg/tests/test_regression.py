import math

import numpy as np
from hypothesis import given, strategies as st

from attacklab.perception import MotionEstimate
from attacklab.regression import TrainingSample, assemble_features, fit, predict_pose, sample_in_sector
from attacklab.sector import DetectionSector

SECTOR = DetectionSector(3.0, -math.pi / 3, math.pi / 3)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([-1, 0, 1]))
def test_samples_stay_in_sector_and_on_side(seed, side):
    r, b = sample_in_sector(np.random.default_rng(seed), SECTOR, 0.4, side)
    assert 0.4 <= r <= 3.0
    assert SECTOR.alpha_lo <= b <= SECTOR.alpha_hi
    if side:
        assert b * side >= 0


def test_feature_row_layout():
    est = MotionEstimate(v=0.6, theta=0.0, a=0.1, omega=0.2, vx=0.6, vy=0.0)
    row = assemble_features((0, 0), est, (0.0, 2.0), (10.0, 10.0), holonomic=False)[0]
    assert row[0] == -math.pi / 4
    assert tuple(row[1:4]) == (0.6, 0.2, 0.1)
    assert row[4] == 2.0 and row[5] == math.pi / 2
    planar = assemble_features((0, 0), est, (0.0, 2.0), (10.0, 10.0), holonomic=True)[0]
    assert tuple(planar[1:3]) == (0.6, 0.0)


def test_unseen_attacker_keeps_course():
    rng = np.random.default_rng(0)
    samples = [TrainingSample(tuple(rng.normal(size=6)), (0.05, 0.3)) for _ in range(30)]
    model = fit(samples)
    est = MotionEstimate(v=0.6, theta=0.5, a=0.0, omega=0.0, vx=0.0, vy=0.0)
    out = predict_pose(model, (1.0, 1.0), est, [(1.0 - 2.0, 1.0)], (10, 10), SECTOR, 0.1)[0]
    assert np.allclose(out[:2], (1.0 + 0.06 * math.cos(0.5), 1.0 + 0.06 * math.sin(0.5)))
    assert out[2] == 0.5
