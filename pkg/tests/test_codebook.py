import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irs_sense.channel import ChannelRealization, Geometry, PathLossModel, sample_channels
from irs_sense.codebook import (ReflectionCodebook, effective_channels, optimal_phases,
                                random_codebook)
from irs_sense.errors import InvalidInputError
from irs_sense.rng import substream


def _chan(h_ps, h_pi, h_is):
    return ChannelRealization(complex(h_ps), np.asarray(h_pi, complex), np.asarray(h_is, complex))


def test_empty_codebook(rng):
    book = random_codebook(0, 5, rng)
    assert book.phases.shape == (0, 5)


def test_shape_and_range(rng):
    book = random_codebook(2, 3, rng)
    assert book.phases.shape == (2, 3)
    assert np.all((book.phases >= 0) & (book.phases < 2 * math.pi))


def test_zero_codewords_rejected(rng):
    with pytest.raises(InvalidInputError):
        random_codebook(4, 0, rng)


def test_uniform_phase_circular_mean(rng):
    book = random_codebook(1000, 1000, rng)
    assert abs(np.exp(1j * book.phases).mean()) < 0.01


def test_states_unit_modulus(rng):
    np.testing.assert_allclose(np.abs(random_codebook(16, 4, rng).states()), 1.0)


def test_out_of_range_phase_rejected():
    with pytest.raises(InvalidInputError):
        ReflectionCodebook(np.array([[2 * math.pi]]))


def test_single_element_alignment():
    # h_IS^H = 1 means h_IS = 1
    chan = _chan(1.0, [1j], [1.0])
    book = optimal_phases(chan)
    theta = book.phases[0, 0]
    assert theta == pytest.approx(2 * math.pi - math.pi / 2)
    assert effective_channels(chan, book)[0] == pytest.approx(2.0)


def test_already_aligned_channels_need_no_shift():
    chan = _chan(0.5, [0.2, 0.3, 0.1], [1.0, 2.0, 0.5])
    np.testing.assert_allclose(optimal_phases(chan).phases, 0.0, atol=1e-15)


def test_zero_direct_link_uses_zero_reference():
    chan = _chan(0.0, [1j, -1.0], [1.0, 1.0])
    g = effective_channels(chan, optimal_phases(chan))[0]
    assert g == pytest.approx(2.0)


def test_optimal_phases_beat_random_search():
    chan = sample_channels(Geometry(pu_azimuth=0.7), PathLossModel(), 32, substream(5, 1))
    best = abs(effective_channels(chan, optimal_phases(chan))[0])
    coherent = abs(chan.h_ps) + np.sum(np.abs(chan.h_is) * np.abs(chan.h_pi))
    assert best == pytest.approx(coherent, rel=1e-12)
    trials = random_codebook(32, 1000, substream(5, 2))
    assert np.all(np.abs(effective_channels(chan, trials)) <= best * (1 + 1e-12))


def test_no_irs_effective_channel():
    chan = _chan(0.3 - 0.1j, [], [])
    g = effective_channels(chan, ReflectionCodebook(np.zeros((0, 4))))
    np.testing.assert_array_equal(g, np.full(4, 0.3 - 0.1j))


def test_direct_substitution():
    chan = _chan(0.0, [1j], [1.0])
    g = effective_channels(chan, ReflectionCodebook(np.zeros((1, 3))))
    np.testing.assert_allclose(g, [1j, 1j, 1j])


def test_matches_scalar_loop():
    chan = sample_channels(Geometry(pu_azimuth=2.0), PathLossModel(), 8, substream(9, 0))
    book = random_codebook(8, 4, substream(9, 1))
    expected = []
    for m in range(4):
        acc = chan.h_ps
        for l in range(8):
            acc += np.conj(chan.h_is[l]) * complex(math.cos(book.phases[l, m]), math.sin(book.phases[l, m])) * chan.h_pi[l]
        expected.append(acc)
    np.testing.assert_allclose(effective_channels(chan, book), expected, rtol=1e-13, atol=0)


def test_dimension_mismatch():
    chan = _chan(1.0, [1.0, 1.0], [1.0, 1.0])
    with pytest.raises(InvalidInputError):
        effective_channels(chan, ReflectionCodebook(np.zeros((3, 1))))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 40), st.integers(1, 6), st.integers(0, 2**31))
def test_triangle_inequality(L, M, seed):
    chan = sample_channels(Geometry(), PathLossModel(), L, substream(seed, 0))
    g = effective_channels(chan, random_codebook(L, M, substream(seed, 1)))
    cap = abs(chan.h_ps) + np.sum(np.abs(chan.h_is) * np.abs(chan.h_pi))
    assert np.all(np.abs(g) <= cap * (1 + 1e-12))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 20), st.integers(0, 2**31), st.complex_numbers(max_magnitude=5, allow_nan=False))
def test_linear_in_channels(L, seed, c):
    rng = substream(seed, 0)
    h_pi = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    h_is = np.exp(1j * rng.uniform(0, 6, L))
    book = random_codebook(L, 3, substream(seed, 1))
    a = effective_channels(_chan(0.0, h_pi, h_is), book)
    b = effective_channels(_chan(0.0, c * h_pi, h_is), book)
    np.testing.assert_allclose(b, c * a, rtol=1e-9, atol=1e-9)


def test_save_load_roundtrip(tmp_path, rng):
    book = random_codebook(6, 3, rng)
    book.save(tmp_path / "book.txt")
    loaded = ReflectionCodebook.load(tmp_path / "book.txt")
    np.testing.assert_array_equal(loaded.phases, book.phases)


def test_load_single_row(tmp_path):
    (tmp_path / "b.txt").write_text("0.1 0.2 0.3\n")
    assert ReflectionCodebook.load(tmp_path / "b.txt").phases.shape == (1, 3)
