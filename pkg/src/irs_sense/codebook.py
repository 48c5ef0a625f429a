"""IRS reflection codebooks and the effective PU-SU channel."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .channel import ChannelRealization
from .errors import InvalidInputError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ReflectionCodebook:
    """Phases ``theta[l, m]`` in radians; column m is the diagonal state of block m."""

    phases: np.ndarray

    def __post_init__(self):
        ph = np.asarray(self.phases, dtype=float)
        if ph.ndim != 2:
            raise InvalidInputError("phases must be an L x M matrix")
        if ph.shape[1] < 1:
            raise InvalidInputError("codebook needs at least one codeword")
        if ph.size and (ph.min() < 0.0 or ph.max() >= TWO_PI):
            raise InvalidInputError("phases must lie in [0, 2pi)")
        ph.setflags(write=False)
        object.__setattr__(self, "phases", ph)

    @property
    def n_elements(self) -> int:
        return self.phases.shape[0]

    @property
    def n_codewords(self) -> int:
        return self.phases.shape[1]

    def states(self) -> np.ndarray:
        """Diagonal entries exp(j theta) as an L x M complex matrix."""
        return np.exp(1j * self.phases)

    def save(self, path) -> None:
        np.savetxt(path, self.phases, fmt="%.17g")

    @classmethod
    def load(cls, path, n_codewords: int | None = None) -> "ReflectionCodebook":
        """Load a whitespace-separated L x M matrix. An empty file needs ``n_codewords``."""
        text = Path(path).read_text().strip()
        if not text:
            if n_codewords is None:
                raise InvalidInputError("empty codebook file: pass n_codewords")
            return cls(np.zeros((0, n_codewords)))
        return cls(np.loadtxt(path, ndmin=2))


def _wrap(theta):
    out = np.mod(theta, TWO_PI)
    # mod can round up to exactly 2pi for tiny negative inputs
    return np.where(out >= TWO_PI, 0.0, out)


def random_codebook(n_elements: int, n_codewords: int, rng) -> ReflectionCodebook:
    """i.i.d. uniform phases on [0, 2pi)."""
    if n_codewords < 1:
        raise InvalidInputError("n_codewords must be >= 1")
    if n_elements < 0:
        raise InvalidInputError("n_elements must be >= 0")
    return ReflectionCodebook(_wrap(rng.uniform(0.0, TWO_PI, size=(n_elements, n_codewords))))


def optimal_phases(chan: ChannelRealization) -> ReflectionCodebook:
    """Single codeword that co-phases every reflected path with the direct link.

    theta_l = angle(h_PS) - angle([h_IS^H]_l) - angle([h_PI]_l), with angle(0) = 0.
    """
    if chan.n_elements < 1:
        raise InvalidInputError("optimal phases need at least one element")
    ref = np.angle(chan.h_ps) if chan.h_ps != 0 else 0.0
    theta = ref - np.angle(chan.h_is.conj()) - np.angle(chan.h_pi)
    return ReflectionCodebook(_wrap(theta)[:, None])


def effective_channels(chan: ChannelRealization, book: ReflectionCodebook) -> np.ndarray:
    """g_m = h_PS + h_IS^H Sigma_m h_PI for every codeword m."""
    if book.n_elements != chan.n_elements:
        raise InvalidInputError(
            f"codebook has {book.n_elements} elements, channel has {chan.n_elements}"
        )
    return kernels.effective_channels(chan.h_ps, chan.coupling, book.phases)
