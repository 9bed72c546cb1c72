import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from afl.annuli import FrameIndex
from afl.errors import IndexOutOfTable, InvalidParameters
from afl.frame import (
    CoefficientGrid,
    analyze,
    atom_frequency_profile,
    build_frame,
    l2_norm_frequency,
    reconstruct,
    reconstruction_error,
    sphere_transform,
    synthesize,
    synthesize_spectrum,
)
from afl.profiles import Gaussian, PowerBump
from afl.spectral import weighted_lp_norm

FR = build_frame(3, 6, 64)
G = Gaussian(1.0)
LAM = analyze(G, FR)


def test_frame_band_supports():
    for mu in range(1, 7):
        lo, hi = FR.bank.support(mu)
        assert lo == pytest.approx(2.0**mu * 2 / 7) and hi == pytest.approx(2.0**mu * 6 / 7)
        assert 2.0 ** (mu - 2) < lo and hi < 2.0**mu


def test_sphere_transform_at_origin_is_surface_area():
    for t in (0.5, 1.0, 3.0):
        assert float(sphere_transform(t, 0.0, 3)) == pytest.approx(4 * math.pi * t * t, rel=1e-14)
    assert float(sphere_transform(2.0, 0.0, 2)) == pytest.approx(2 * math.pi * 2.0, rel=1e-14)


def test_sphere_transform_against_direct_integral(oracle):
    rho = np.array(oracle["sphere_transform"]["rho"])
    ref = np.array(oracle["sphere_transform"]["values"])
    assert np.allclose(sphere_transform(1.0, rho, 3), ref, rtol=1e-12, atol=1e-13)


def test_constants_positive_and_scale_with_mu():
    c = FR.constants
    assert np.all(c > 0)
    assert np.allclose(c[1] / c[0], 2.0**0.5, rtol=1e-14)


def test_zero_input_gives_zero_coefficients():
    lam = analyze(Gaussian(1.0, amplitude=0.0), FR)
    assert not np.any(lam.values)
    assert float(synthesize(lam, FR)(1.0)) == 0.0


@pytest.mark.parametrize("mu", [2, 3, 4])
def test_bands_two_apart_are_orthogonal(mu):
    nodes, wts, _ = FR.common_grid()
    a = atom_frequency_profile(FR, FrameIndex(mu, 3)).spectrum(nodes)
    b = atom_frequency_profile(FR, FrameIndex(mu + 2, 7)).spectrum(nodes)
    assert not np.any(a * b)


def test_gaussian_coefficients_decay_beyond_scale_six():
    fr = build_frame(3, 9, 64)
    lam = analyze(G, fr)
    energy = (lam.values**2).sum(axis=1)
    assert np.all(energy[6:] < 1e-100)
    assert np.all(np.diff(energy[3:7]) < 0)


def test_single_atom_norm_at_most_one():
    nodes, wts, _ = FR.common_grid()
    for idx in (FrameIndex(0, 1), FrameIndex(3, 5), FrameIndex(6, 64)):
        val = l2_norm_frequency(atom_frequency_profile(FR, idx).spectrum(nodes), nodes, wts, 3)
        assert 0 < val <= 1 + 1e-12


@given(st.floats(-5, 5))
def test_analysis_is_homogeneous(c):
    lam = analyze(Gaussian(1.0, amplitude=c), FR)
    assert np.allclose(lam.values, c * LAM.values, atol=1e-14 * (1 + abs(c)))


def test_coefficient_energy_matches_l2_norm():
    total = float(np.sum(LAM.values**2))
    assert total == pytest.approx(weighted_lp_norm(G, None, 2.0, 3) ** 2, rel=1e-6)


def test_reconstruction_of_gaussian():
    g, err = reconstruct(G, FR)
    assert err < 1e-3
    r = np.array([0.0, 0.7, 2.0])
    assert np.allclose(g(r), G(r), atol=1e-3)


def test_reconstruction_of_power_bump():
    f = PowerBump(1.0, 3.0)
    fr = build_frame(3, 8, 128)
    assert reconstruction_error(f, analyze(f, fr), fr) < 1e-2


def test_synthesis_is_linear():
    a = LAM.with_entry(FrameIndex(2, 4), 1.5)
    b = CoefficientGrid.zeros(3, 6, 64).with_entry(FrameIndex(1, 9), -2.0)
    rho = np.linspace(0, 30, 41)
    lhs = synthesize_spectrum(a + b.scaled(3.0), FR, rho)
    rhs = synthesize_spectrum(a, FR, rho) + 3.0 * synthesize_spectrum(b, FR, rho)
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_grid_validation():
    with pytest.raises(InvalidParameters):
        CoefficientGrid(np.zeros(3), 3)
    with pytest.raises(InvalidParameters):
        CoefficientGrid(np.array([[np.nan]]), 3)
    with pytest.raises(IndexOutOfTable):
        synthesize(CoefficientGrid.zeros(3, 7, 64), FR)
    with pytest.raises(IndexOutOfTable):
        LAM[FrameIndex(7, 1)]


def test_json_round_trip_is_bit_exact():
    back = CoefficientGrid.from_json(LAM.to_json())
    assert np.array_equal(back.values, LAM.values) and back.n == 3
    assert back.metadata == LAM.metadata


def test_csv_round_trip_is_bit_exact():
    back = CoefficientGrid.from_csv(LAM.to_csv())
    assert np.array_equal(back.values, LAM.values)
    assert back.metadata == json_normalized(LAM.metadata)


def json_normalized(d):
    import json

    return json.loads(json.dumps(d))


def test_metadata_records_alignment():
    assert LAM.metadata["dilation"] == 1.75
    assert "source_profile" in LAM.metadata
