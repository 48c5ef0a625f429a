import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from irs_sense.channel import (GainLawParams, Geometry, PathLossModel, link_gains, path_gain,
                               sample_channels, sample_gain_law, ura_steering)
from irs_sense.errors import InvalidInputError

MODEL = PathLossModel()


@pytest.mark.parametrize("exponent", [2.0, 3.5])
def test_path_gain_at_reference_distance(exponent):
    assert path_gain(1.0, exponent, MODEL) == pytest.approx(1e-3, rel=1e-15)


def test_path_gain_80m_against_mpmath():
    mpmath.mp.dps = 40
    oracle = mpmath.mpf(10) ** -3 * mpmath.mpf(80) ** mpmath.mpf("-3.5")
    assert path_gain(80.0, 3.5, MODEL) == pytest.approx(float(oracle), rel=1e-14)


@pytest.mark.parametrize("d", [0.0, -1.0])
def test_path_gain_rejects_nonpositive_distance(d):
    with pytest.raises(InvalidInputError):
        path_gain(d, 2.0, MODEL)


@given(st.floats(1.01, 1e3), st.floats(1.01, 1e3), st.floats(0.5, 5.0))
def test_path_gain_decreases_with_distance(d1, d2, exponent):
    lo, hi = sorted((d1, d2))
    if hi > lo:
        assert path_gain(hi, exponent, MODEL) < path_gain(lo, exponent, MODEL)


@given(st.floats(1.01, 1e3), st.floats(0.5, 5.0), st.floats(0.5, 5.0))
def test_path_gain_decreases_with_exponent(d, e1, e2):
    lo, hi = sorted((e1, e2))
    if hi > lo + 1e-9:
        assert path_gain(d, hi, MODEL) < path_gain(d, lo, MODEL)


def test_geometry_validation():
    with pytest.raises(InvalidInputError):
        Geometry(pu_distance=0.0)
    with pytest.raises(InvalidInputError):
        Geometry(sensing_range=-1.0)
    with pytest.raises(InvalidInputError):
        Geometry(pu_azimuth=2 * math.pi)


def test_geometry_distances():
    g = Geometry(pu_distance=80.0, pu_azimuth=math.pi / 2)
    np.testing.assert_allclose(g.pu_pos, [80.0, 0.0, 0.0], atol=1e-12)
    d_ps, d_pi, d_is = g.distances()
    assert d_ps == pytest.approx(80.0)
    assert d_pi == pytest.approx(math.sqrt(80.0 ** 2 + 1.0))
    assert d_is == pytest.approx(1.0)


def test_link_gains_default_geometry():
    b_ps, b_pi, b_is = link_gains(Geometry(), MODEL)
    assert b_is == pytest.approx(1e-3)
    assert b_ps == pytest.approx(1e-3 * 80.0 ** -3.5)
    assert b_pi == pytest.approx(1e-3 * 6401.0 ** -1.75)


def test_no_irs_channel(rng):
    chan = sample_channels(Geometry(), MODEL, 0, rng)
    assert chan.h_pi.size == 0 and chan.h_is.size == 0
    assert isinstance(chan.h_ps, complex)


def test_los_link_constant_modulus(rng):
    chan = sample_channels(Geometry(pu_azimuth=1.0), MODEL, 1024, rng)
    np.testing.assert_allclose(np.abs(chan.h_is) ** 2, chan.beta_is, rtol=1e-12)


def test_steering_off_boresight_is_unit_modulus():
    a = ura_steering(37, [0.3, -0.4, -1.0])
    np.testing.assert_allclose(np.abs(a), 1.0, rtol=1e-14)
    assert len(a) == 37


def test_direct_link_mean_power(rng):
    h2 = np.array([abs(sample_channels(Geometry(), MODEL, 0, rng).h_ps) ** 2 for _ in range(100_000)])
    beta_ps = link_gains(Geometry(), MODEL)[0]
    assert h2.mean() == pytest.approx(beta_ps, rel=0.02)


def test_pu_irs_link_mean_power(rng):
    chan = sample_channels(Geometry(), MODEL, 100_000, rng)
    assert np.mean(np.abs(chan.h_pi) ** 2) == pytest.approx(chan.beta_pi, rel=0.02)


def test_longer_draw_extends_shorter(rng_factory):
    short = sample_channels(Geometry(), MODEL, 64, rng_factory(7))
    long = sample_channels(Geometry(), MODEL, 1024, rng_factory(7))
    assert short.h_ps == long.h_ps
    np.testing.assert_array_equal(short.h_pi, long.h_pi[:64])


def test_gain_law_central_case_is_exponential(rng):
    p = GainLawParams(256, 2e-10, 1e-3, 0.0)
    x = sample_gain_law(p, rng, size=50_000)
    scale = 256 * 2e-10 * 1e-3
    assert stats.kstest(x / scale, "expon").statistic < 0.01


def test_gain_law_mean(rng):
    p = GainLawParams(1024, 2.18e-10, 1e-3, 2.2e-10)
    x = sample_gain_law(p, rng, size=1_000_000)
    assert x.mean() == pytest.approx(p.mean, rel=0.01)


@pytest.mark.parametrize("params", [GainLawParams(0, 1e-10, 1e-3, 1e-10), GainLawParams(8, 0.0, 1e-3, 1e-10)])
def test_gain_law_undefined(params, rng):
    with pytest.raises(InvalidInputError):
        sample_gain_law(params, rng)
