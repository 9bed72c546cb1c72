import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from afl.annuli import FrameIndex, annulus_measure, annulus_table
from afl.errors import InvalidParameters, NumericalFailure
from afl.profiles import Sampled
from afl.weights import (
    PowerWeight,
    TabulatedWeight,
    TwoRegimeWeight,
    annulus_weight_integral,
    ap_constant_estimate,
    ap_plan,
    delta_n_transform,
    in_ap_class,
    mass_ratio_asymptotic,
    mass_table,
    radial_weight_integral,
    verify_product_lemma,
    weight_from_dict,
    weighted_mass,
)

T3 = annulus_table(3, 64, 64)


def test_unweighted_integral_is_volume():
    v = annulus_weight_integral(PowerWeight(0, 3), FrameIndex(0, 1), T3)
    assert v == pytest.approx(4 * math.pi / 3 * math.pi**3, rel=1e-14)


def test_square_weight_closed_form():
    v = annulus_weight_integral(PowerWeight(2, 3), FrameIndex(0, 1), T3)
    assert v == pytest.approx(4 * math.pi / 5 * math.pi**5, rel=1e-14)


def test_tabulated_copy_agrees_with_closed_form():
    prof = Sampled.log_uniform(lambda r: r**2, 1e-4, 1e3, 400)
    tab = TabulatedWeight(prof, 3)
    for idx in (FrameIndex(0, 1), FrameIndex(2, 7), FrameIndex(5, 40)):
        a = annulus_weight_integral(tab, idx, T3)
        b = annulus_weight_integral(PowerWeight(2, 3), idx, T3)
        assert a == pytest.approx(b, rel=1e-7)


def test_admissibility():
    with pytest.raises(InvalidParameters):
        PowerWeight(-3, 3)
    with pytest.raises(InvalidParameters):
        TwoRegimeWeight(1.0, -2.5, 2)


def test_two_regime_piecewise_integral():
    w = TwoRegimeWeight(2.0, -1.0, 3)
    a = float(radial_weight_integral(w, 0.5, 2.0))
    expected = 4 * math.pi * ((1 - 0.5**5) / 5 + (2.0**2 - 1) / 2)
    assert a == pytest.approx(expected, rel=1e-13)


def test_unweighted_p2_mass_is_one():
    assert weighted_mass(PowerWeight(0, 3), 2.0, FrameIndex(1, 3), T3) == pytest.approx(1.0, rel=1e-14)


@given(st.floats(-2.5, 4.0), st.integers(0, 10), st.integers(1, 60))
def test_infinite_p_mass_ignores_weight(gamma, mu, k):
    idx = FrameIndex(mu, k)
    m = weighted_mass(PowerWeight(gamma, 3), math.inf, idx, T3)
    assert m == pytest.approx(annulus_measure(T3, idx) ** -0.5, rel=1e-14)


@given(st.floats(-2.5, 4.0), st.integers(0, 20), st.integers(1, 60), st.floats(1.0, 8.0), st.floats(1.0, 8.0))
def test_mass_monotone_in_p(gamma, mu, k, p1, p2):
    assume(abs(p1 - p2) > 1e-6)
    p_lo, p_hi = min(p1, p2), max(p1, p2)
    w = PowerWeight(gamma, 3)
    idx = FrameIndex(mu, k)
    integral = annulus_weight_integral(w, idx, T3)
    a, b = weighted_mass(w, p_lo, idx, T3), weighted_mass(w, p_hi, idx, T3)
    if integral <= 1:
        assert b >= a * (1 - 1e-12)
    else:
        assert b <= a * (1 + 1e-12)


def test_mass_table_entries_positive_and_finite():
    mt = mass_table(TwoRegimeWeight(1.0, -0.5, 3), 3.0, T3)
    assert np.all(np.isfinite(mt.masses)) and np.all(mt.masses > 0)
    assert mt[FrameIndex(3, 4)] == pytest.approx(weighted_mass(TwoRegimeWeight(1.0, -0.5, 3), 3.0, FrameIndex(3, 4), T3))


@pytest.mark.parametrize("g1,p1,g2,p2", [(0, 2, -1, 2), (0, 2, 1, 4), (1, 3, 2, 1.5), (-1, 4, 0.5, 2)])
def test_mass_ratio_tracks_asymptotic_formula(g1, p1, g2, p2):
    w1, w2 = PowerWeight(g1, 3), PowerWeight(g2, 3)
    m1, m2 = mass_table(w1, p1, T3).masses, mass_table(w2, p2, T3).masses
    for mu in range(8, 65, 8):
        for k in range(8, 65, 8):
            r = m2[mu, k - 1] / m1[mu, k - 1] / mass_ratio_asymptotic(3, g1, p1, g2, p2, mu, k)
            assert 0.5 < r < 2.0


def test_delta_transform_of_power_and_two_regime():
    d = delta_n_transform(PowerWeight(1.5, 3))
    t = np.array([0.3, 1.0, 7.0])
    assert np.allclose(d(t), t**0.5, rtol=1e-14)
    d2 = delta_n_transform(TwoRegimeWeight(3.0, -1.5, 3))
    assert np.allclose(d2(np.array([0.5, 8.0])), [0.5, 8.0**-0.5], rtol=1e-14)


def test_delta_transform_of_tabulated():
    prof = Sampled.log_uniform(lambda r: 1 + r, 1e-3, 1e2, 300)
    w = TabulatedWeight(prof, 3)
    d = delta_n_transform(w)
    assert float(d(8.0)) == pytest.approx(float(w(2.0)), rel=1e-12)
    assert float(d(8.0)) == pytest.approx(3.0, rel=1e-3)


@given(st.floats(0.01, 50.0), st.floats(-2.0, 3.0))
def test_delta_round_trip(r, gamma):
    w = TwoRegimeWeight(gamma, 0.5 * gamma, 3)
    assert float(delta_n_transform(w)(r**3)) == pytest.approx(float(w(r)), rel=1e-10)


def test_ap_constant_of_constant_weight_is_one():
    assert ap_constant_estimate(PowerWeight(0, 3), 2.0) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("gamma", [-2.9, -1.0, 0.5, 2.9, 3.0, 3.1])
def test_ap_classification_for_n3_p2(gamma):
    finite = math.isfinite(ap_constant_estimate(PowerWeight(gamma, 3), 2.0))
    assert finite == (-3 < gamma < 3)


def test_ap_estimate_stable_under_refinement():
    w = PowerWeight(1.0, 3)
    coarse = ap_constant_estimate(w, 2.0, ap_plan(refine=1))
    fine = ap_constant_estimate(w, 2.0, ap_plan(refine=4))
    assert math.isfinite(coarse) and fine >= coarse
    assert fine <= 1.05 * coarse


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_ap_grid_matches_analytic_criterion(n, p):
    gammas = -n + 0.5 * np.arange(1, int(round(n * p / 0.5)) + 2)
    for g in gammas:
        numeric = math.isfinite(ap_constant_estimate(PowerWeight(float(g), n), p))
        assert numeric == (-n < g < n * (p - 1))
        assert in_ap_class(PowerWeight(float(g), n), p) == numeric


def test_two_regime_ap_needs_both_exponents_inside():
    assert in_ap_class(TwoRegimeWeight(1.0, 2.0, 3), 2.0)
    assert not in_ap_class(TwoRegimeWeight(1.0, 3.5, 3), 2.0)
    # growth at infinity shows up as an estimate that keeps increasing with the plan
    inside, outside = TwoRegimeWeight(1.0, 2.0, 3), TwoRegimeWeight(1.0, 3.5, 3)
    short, long = ap_plan(j_max=10), ap_plan(j_max=30)
    assert ap_constant_estimate(inside, 2.0, long) <= 1.1 * ap_constant_estimate(inside, 2.0, short)
    assert ap_constant_estimate(outside, 2.0, long) > 10 * ap_constant_estimate(outside, 2.0, short)


def test_ap_rejects_p_at_most_one():
    with pytest.raises(InvalidParameters):
        ap_constant_estimate(PowerWeight(0, 3), 1.0)


IDX = [FrameIndex(mu, k) for mu in range(7) for k in range(1, 33)]


def test_product_lemma_identical_weights_is_exactly_one():
    for g in (-1.0, 0.0, 2.0):
        assert verify_product_lemma(PowerWeight(g, 3), PowerWeight(g, 3), 0.05, IDX, T3) == 1.0


def test_product_lemma_matches_quadrature_oracle(oracle):
    r = verify_product_lemma(PowerWeight(1, 3), PowerWeight(-1, 3), 0.05, IDX, T3)
    assert r == pytest.approx(oracle["product_lemma_1_m1_005"], rel=1e-10)
    assert r < 2


def test_product_lemma_eps_zero_is_one():
    r = verify_product_lemma(PowerWeight(1, 3), PowerWeight(-1, 3), 0.0, IDX, T3)
    assert r == pytest.approx(1.0, abs=1e-13)


def test_product_lemma_eps_cap():
    with pytest.raises(InvalidParameters):
        verify_product_lemma(PowerWeight(1, 3), PowerWeight(0, 3), 0.3, IDX, T3, eps_cap=0.1)


def test_product_lemma_divergence_reports_index():
    with pytest.raises(NumericalFailure) as exc:
        verify_product_lemma(PowerWeight(2.5, 3), PowerWeight(-2.5, 3), 0.5, [FrameIndex(0, 1)], T3)
    assert exc.value.context["k"] == 1


def test_weight_json_round_trip():
    for w in (PowerWeight(1.5, 3), TwoRegimeWeight(2.0, -1.0, 2),
              TabulatedWeight(Sampled.log_uniform(lambda r: 1 + r, 1e-2, 10, 20), 3)):
        back = weight_from_dict(w.to_dict())
        r = np.array([0.05, 0.7, 3.0])
        assert np.allclose(back(r), w(r), rtol=1e-15)
    assert weight_from_dict({"variant": "unweighted", "n": 3}).is_unweighted()
