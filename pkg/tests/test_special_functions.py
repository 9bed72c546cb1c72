import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from afl.errors import NumericalFailure, UnsupportedOrderError
from afl.special_functions import (
    BesselZeroTable,
    bessel_j,
    bessel_kernel,
    bessel_zeros,
    cached_bessel_zeros,
    eval_bessel_j,
    kernel_at_zero,
    mcmahon_guess,
)


def test_half_order_vanishes_at_pi():
    assert abs(eval_bessel_j(0.5, math.pi)) < 1e-12


def test_zero_order_at_origin():
    assert eval_bessel_j(0, 0) == 1.0
    assert eval_bessel_j(1.5, 0) == 0.0


def test_j1_at_one_matches_series_oracle(oracle):
    assert eval_bessel_j(1, 1.0) == pytest.approx(oracle["bessel_j1_at_1"], rel=1e-12)


def test_order_out_of_range():
    with pytest.raises(UnsupportedOrderError):
        eval_bessel_j(50.5, 1.0)
    with pytest.raises(UnsupportedOrderError):
        bessel_zeros(-0.5, 3)


@given(st.sampled_from([0.5, 1.5, 2.5]), st.floats(0.1, 100.0))
def test_half_integer_orders_match_trig_forms(nu, x):
    s, c = math.sin(x), math.cos(x)
    pref = math.sqrt(2 / (math.pi * x))
    closed = {
        0.5: pref * s,
        1.5: pref * (s / x - c),
        2.5: pref * ((3 / x**2 - 1) * s - 3 * c / x),
    }[nu]
    assert abs(eval_bessel_j(nu, x) - closed) < 1e-10


@given(st.floats(0.0, 50.0), st.floats(0.0, 200.0))
def test_fast_path_agrees_with_reference(nu, x):
    ref = eval_bessel_j(nu, x)
    assert abs(bessel_j(nu, x) - ref) <= 1e-10 * max(1.0, abs(ref))


@given(st.sampled_from([0.0, 0.5, 1.0, 1.5, 2.0, 3.7]), st.one_of(st.just(0.0), st.floats(1e-6, 60.0)))
def test_kernel_is_regularized_bessel(nu, x):
    k = float(bessel_kernel(nu, np.array([x]))[0])
    if x == 0:
        assert k == pytest.approx(kernel_at_zero(nu), rel=1e-14)
    else:
        assert k == pytest.approx(eval_bessel_j(nu, x) / x**nu, rel=1e-9, abs=1e-13)


def test_half_order_zeros_are_multiples_of_pi():
    table = bessel_zeros(0.5, 3)
    assert np.allclose(table.zeros, [math.pi, 2 * math.pi, 3 * math.pi], rtol=0, atol=1e-12)


def test_first_zeros_match_bisection_oracle(oracle):
    assert bessel_zeros(0, 1)[1] == pytest.approx(oracle["j0_first_zero"], rel=1e-14)
    assert bessel_zeros(1, 1)[1] == pytest.approx(oracle["j1_first_zero"], rel=1e-14)


@pytest.mark.parametrize("nu", [0, 0.5, 1, 1.5])
def test_zeros_match_frozen_oracle(nu, oracle):
    ref = np.array(oracle["zeros"][str(float(nu)) if nu in (0.5, 1.5) else str(nu)])
    table = bessel_zeros(nu, ref.size)
    assert np.max(np.abs(table.zeros - ref)) < 1e-11


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0])
def test_interlacing(nu, oracle):
    a = bessel_zeros(nu, 101).zeros
    b = bessel_zeros(nu + 1, 100).zeros
    assert np.all(a[:100] < b) and np.all(b < a[1:101])


@given(st.floats(0.0, 5.0), st.integers(1, 150))
def test_table_invariants(nu, K):
    z = bessel_zeros(nu, K).zeros
    assert z.size == K
    assert np.all(np.diff(z) > 0)
    assert np.all(np.abs([eval_bessel_j(nu, x) for x in z[:: max(1, K // 20)]]) < 1e-10)
    if K > 21:
        gaps = np.diff(z)[19:]
        assert np.all(np.abs(gaps - math.pi) < 0.05)


def test_mcmahon_guess_is_close():
    z = bessel_zeros(2.0, 50).zeros
    guesses = np.array([mcmahon_guess(2.0, k) for k in range(1, 51)])
    assert np.max(np.abs(guesses[10:] - z[10:])) < 1e-3


def test_table_indexing_and_serialization():
    t = bessel_zeros(1.0, 5)
    assert t[0] == 0.0
    assert t.with_origin()[0] == 0.0 and t.with_origin().size == 6
    with pytest.raises(IndexError):
        t[6]
    back = BesselZeroTable.from_dict(json.loads(json.dumps(t.to_dict())))
    assert np.array_equal(back.zeros, t.zeros) and back.nu == t.nu


def test_disk_cache_round_trip(tmp_path):
    a = cached_bessel_zeros(1.5, 12, tmp_path)
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    b = cached_bessel_zeros(1.5, 12, tmp_path)
    assert np.array_equal(a.zeros, b.zeros)


def test_cache_directory_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("AFL_CACHE_DIR", str(tmp_path / "env"))
    cached_bessel_zeros(0.0, 4)
    assert list((tmp_path / "env").glob("*.json"))


def test_numerical_failure_carries_index():
    err = NumericalFailure("bracketing failed", k=7)
    assert err.context["k"] == 7
