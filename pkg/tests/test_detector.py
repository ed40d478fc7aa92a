"""Detection statistic and decision rule: worked examples and invariances."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from sensesim.detector import H0, H1, Decision, DetectorSpec, decide, statistic, statistic_rows
from sensesim.rng import Stream, normal_block
from sensesim.signal_channel import SampleFrame

P2 = DetectorSpec(p=2)
P3 = DetectorSpec(p=3)


def test_worked_examples():
    assert statistic([3.0], P2) == 9.0
    assert statistic([3.0], P3) == 27.0
    assert statistic([1.0, 2.0], P2) == 5.0
    assert statistic([1.0, 2.0], P3) == 9.0
    assert statistic([-1.0, 2.0], P3) == 9.0  # magnitudes, not signed cubes
    assert statistic([0.0, 0.0], P2) == 0.0
    assert statistic([2.0, 2.0], P2, sigma=2.0) == 2.0


def test_sample_frame_and_array_agree():
    y = np.array([0.5, -1.5, 2.5])
    assert statistic(SampleFrame(y), P3) == statistic(y, P3)


def test_unnormalized_ignores_sigma():
    spec = DetectorSpec(p=2, normalized=False)
    assert statistic([2.0, 2.0], spec, sigma=2.0) == 8.0


def test_statistic_rows_matches_scalar_bitwise():
    y = normal_block(
        np.array([Stream.from_seed(t).key for t in range(50)], dtype=np.uint64), 7
    )
    for spec in (P2, P3, DetectorSpec(p=2, normalized=False)):
        rows = statistic_rows(y, spec, sigma=1.3)
        scalar = np.array([statistic(y[r], spec, sigma=1.3) for r in range(y.shape[0])])
        assert np.array_equal(rows, scalar)


def test_tie_decides_h1():
    assert decide(5.0, 5.0).hypothesis == H1
    assert decide(5.0 - 1e-12, 5.0).hypothesis == H0
    assert decide(0.0, 0.0).hypothesis == H1


def test_decision_validation():
    with pytest.raises(ValueError):
        decide(1.0, -1.0)
    with pytest.raises(ValueError):
        decide(float("nan"), 1.0)
    with pytest.raises(ValueError):
        decide(-1.0, 1.0)
    with pytest.raises(ValueError):
        Decision("maybe", 1.0)


def test_spec_validation():
    with pytest.raises(ValueError):
        DetectorSpec(p=0)
    with pytest.raises(ValueError):
        DetectorSpec(p=2.0)
    with pytest.raises(ValueError):
        statistic([1.0, float("inf")], P2)
    with pytest.raises(ValueError):
        statistic([1.0], P2, sigma=0.0)


def test_chi_square_moments_under_noise():
    # normalized p=2 statistic of n unit Gaussians ~ chi-square with n dof
    n, trials = 10, 100_000
    keys = np.array(
        [Stream.from_seed(77).child(1, t).key for t in range(trials)], dtype=np.uint64
    )
    stats = statistic_rows(normal_block(keys, n), P2)
    assert abs(stats.mean() - n) < 4.0 * np.sqrt(2.0 * n / trials)
    assert abs(stats.var() - 2.0 * n) < 0.1 * 2.0 * n


_arrays = hnp.arrays(
    np.float64,
    st.integers(min_value=1, max_value=16),
    elements=st.floats(min_value=-100.0, max_value=100.0, allow_nan=False),
)


@given(y=_arrays, c=st.floats(min_value=0.01, max_value=100.0), p=st.integers(1, 4))
@settings(deadline=None)
def test_homogeneity(y, c, p):
    spec = DetectorSpec(p=p)
    base = statistic(y, spec)
    scaled = statistic(c * y, spec)
    assert scaled == pytest.approx((c**p) * base, rel=1e-12, abs=1e-300)


@given(y=_arrays, sigma=st.floats(min_value=0.25, max_value=4.0), p=st.integers(1, 4))
@settings(deadline=None)
def test_normalization_cancels_noise_scale(y, sigma, p):
    spec = DetectorSpec(p=p)
    assert statistic(sigma * y, spec, sigma=sigma) == pytest.approx(
        statistic(y, spec, sigma=1.0), rel=1e-12, abs=1e-300
    )
