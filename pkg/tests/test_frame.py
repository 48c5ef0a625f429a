import numpy as np
import pytest
from scipy import stats

from irs_sense.errors import InvalidInputError
from irs_sense.frame import (FrameLayout, Hypothesis, reduce_block_energies,
                             synthesize_block_energies, synthesize_raw_frame)
from irs_sense.rng import substream

PT, SIGMA2 = 10 ** 0.6, 1e-7
RHO = PT / SIGMA2


def test_layout_split():
    assert FrameLayout.split(10_000, 100) == FrameLayout(100, 100)
    with pytest.raises(InvalidInputError):
        FrameLayout.split(10_000, 3)
    with pytest.raises(InvalidInputError):
        FrameLayout(0, 5)


@pytest.mark.parametrize("method", ["samples", "chi2"])
@pytest.mark.parametrize("layout", [FrameLayout(4, 25), FrameLayout(10, 100)])
def test_h0_mean_is_one(method, layout):
    T = synthesize_block_energies("H0", None, layout, PT, SIGMA2, substream(1, 0), n_frames=10_000, method=method)
    assert T.shape == (10_000, layout.n_blocks)
    assert T.mean() == pytest.approx(1.0, rel=0.01)
    assert np.all(T >= 0)


@pytest.mark.parametrize("method", ["samples", "chi2"])
def test_h1_moments(method):
    layout = FrameLayout(3, 50)
    g = np.sqrt(np.array([0.0, 0.02, 0.1]) / RHO) * np.exp(1j * np.array([0.3, 1.0, -2.0]))
    T = synthesize_block_energies("H1", g, layout, PT, SIGMA2, substream(2, 0), n_frames=40_000, method=method)
    snr = RHO * np.abs(g) ** 2
    np.testing.assert_allclose(T.mean(axis=0), 1 + snr, rtol=0.01)
    np.testing.assert_allclose(T.var(axis=0, ddof=1), (1 + 2 * snr) / layout.nbar, rtol=0.05)


def test_h1_length_mismatch():
    with pytest.raises(InvalidInputError):
        synthesize_block_energies("H1", np.ones(3), FrameLayout(4, 10), PT, SIGMA2, substream(0))


def test_nonpositive_power_rejected():
    with pytest.raises(InvalidInputError):
        synthesize_raw_frame("H0", None, FrameLayout(1, 10), PT, 0.0, substream(0))


def test_raw_h0_variance():
    y = synthesize_raw_frame("H0", None, FrameLayout(100, 1000), PT, SIGMA2, substream(3, 0))
    assert np.mean(np.abs(y) ** 2) == pytest.approx(SIGMA2, rel=0.02)


def test_zero_channel_matches_h0():
    layout = FrameLayout(5, 20)
    h0 = synthesize_raw_frame("H0", None, layout, PT, SIGMA2, substream(4, 0))
    h1 = synthesize_raw_frame("H1", np.zeros(5), layout, PT, SIGMA2, substream(4, 0))
    np.testing.assert_array_equal(h0, h1)


@pytest.mark.parametrize("hyp", list(Hypothesis))
def test_reduction_reproduces_block_energies(hyp):
    layout = FrameLayout(8, 16)
    g = np.full(8, 1e-4 + 2e-4j)
    y = synthesize_raw_frame(hyp, g, layout, PT, SIGMA2, substream(5, 0), n_frames=3)
    direct = synthesize_block_energies(hyp, g, layout, PT, SIGMA2, substream(5, 0), n_frames=3)
    np.testing.assert_array_equal(reduce_block_energies(y, layout, SIGMA2), direct)


def test_reduction_formula():
    layout = FrameLayout(2, 3)
    y = np.array([1, 1j, -1, 2, 0, 0], dtype=complex)
    np.testing.assert_allclose(reduce_block_energies(y, layout, 0.5), [3 / 1.5, 4 / 1.5])


def test_h0_energy_close_to_gaussian():
    T = synthesize_block_energies("H0", None, FrameLayout(1, 100), PT, SIGMA2, substream(6, 0),
                                  n_frames=10_000, method="samples")
    d = stats.kstest(T.ravel(), "norm", args=(1.0, 0.1)).statistic
    assert d < 0.02


def test_unknown_method():
    with pytest.raises(InvalidInputError):
        synthesize_block_energies("H0", None, FrameLayout(1, 2), PT, SIGMA2, substream(0), method="fast")
