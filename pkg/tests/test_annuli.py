import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from afl.annuli import (
    FrameIndex,
    annulus_bounds,
    annulus_measure,
    annulus_table,
    indicator_profile,
)
from afl.errors import IndexOutOfTable, InvalidParameters
from afl.spectral import weighted_lp_norm

BALL_PI = 4 * math.pi / 3 * math.pi**3


def test_first_annulus_in_three_dimensions():
    t = annulus_table(3, 4, 8)
    assert annulus_bounds(t, FrameIndex(0, 1)) == (0.0, pytest.approx(math.pi, rel=1e-15))
    lo, hi = annulus_bounds(t, FrameIndex(1, 2))
    assert lo == pytest.approx(math.pi / 2, rel=1e-15) and hi == pytest.approx(math.pi, rel=1e-15)


def test_first_annulus_in_two_dimensions(oracle):
    t = annulus_table(2, 1, 2)
    lo, hi = annulus_bounds(t, FrameIndex(0, 1))
    assert lo == 0.0 and hi == pytest.approx(oracle["j0_first_zero"], rel=1e-14)


def test_index_validation():
    with pytest.raises(InvalidParameters):
        FrameIndex(-1, 1)
    with pytest.raises(InvalidParameters):
        FrameIndex(0, 0)
    t = annulus_table(3, 2, 5)
    with pytest.raises(IndexOutOfTable):
        annulus_bounds(t, FrameIndex(3, 1))
    with pytest.raises(IndexOutOfTable):
        annulus_measure(t, FrameIndex(0, 6))
    with pytest.raises(InvalidParameters):
        annulus_table(1, 2, 5)


def test_ball_measure():
    t = annulus_table(3, 1, 2)
    assert annulus_measure(t, FrameIndex(0, 1)) == pytest.approx(BALL_PI, rel=1e-14)


@given(st.integers(2, 5), st.integers(0, 7), st.integers(1, 60))
def test_measure_scale_halving(n, mu, k):
    t = annulus_table(n, 8, 60)
    a = annulus_measure(t, FrameIndex(mu, k))
    b = annulus_measure(t, FrameIndex(mu + 1, k))
    assert a > 0 and b == pytest.approx(2.0**-n * a, rel=1e-13)


def test_measure_growth_like_k_squared():
    t = annulus_table(3, 0, 200)
    ratios = t.measures(0)[49:200] / np.arange(50, 201) ** 2
    assert ratios.max() / ratios.min() < 1.05


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_measure_within_factor_four_of_asymptotic(n):
    t = annulus_table(n, 6, 200)
    k = np.arange(10, 201)
    for mu in range(7):
        r = t.measures(mu)[9:] / (k ** (n - 1) * 2.0 ** (-mu * n))
        assert r.max() / r.min() < 4


@given(st.integers(2, 5), st.integers(0, 5))
def test_tiling_of_one_scale(n, mu):
    t = annulus_table(n, 5, 30)
    radii = t.radii(mu)
    rng = np.random.default_rng(mu + 10 * n)
    r = rng.uniform(0, radii[-1], 500)
    counts = np.zeros(r.size)
    for k in range(1, 31):
        lo, hi = annulus_bounds(t, FrameIndex(mu, k))
        counts += (r > lo) & (r <= hi)
    assert np.all(counts == 1)
    assert np.all(t.locate(mu, r) >= 1)


def test_boundary_belongs_to_lower_index():
    t = annulus_table(3, 2, 5)
    r = t.radii(1)[2]
    assert int(t.locate(1, r)) == 2


def test_indicator_is_l2_normalized():
    t = annulus_table(3, 3, 8)
    f = indicator_profile(t, FrameIndex(2, 5))
    assert weighted_lp_norm(f, None, 2.0, 3) == pytest.approx(1.0, rel=1e-12)


def test_indicator_value_on_first_ball():
    t = annulus_table(3, 1, 3)
    f = indicator_profile(t, FrameIndex(0, 1))
    assert float(f(1.0)) == pytest.approx(BALL_PI**-0.5, rel=1e-14)


def test_indicators_two_apart_have_disjoint_support():
    t = annulus_table(3, 1, 10)
    a, b = indicator_profile(t, FrameIndex(0, 3)), indicator_profile(t, FrameIndex(0, 5))
    r = np.linspace(0, 40, 20001)
    assert np.all(a(r) * b(r) == 0)
