"""Closed-form false-alarm, threshold and missed-detection expressions.

All expressions work in the central-limit regime: block energies are taken
as Gaussian and the number of blocks as large.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special

from .errors import InvalidInputError, OutOfRegimeError

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class AnalyticParams:
    """Parameters of the closed forms. ``rho`` is P_t / sigma^2 (linear)."""

    n_blocks: int
    nbar: int
    alpha: float = 0.0
    rho: float = 1.0
    n_elements: int = 0
    beta_pi: float = 0.0
    beta_is: float = 0.0
    h_ps_abs2: float = 0.0

    def __post_init__(self):
        if self.n_blocks < 1 or self.nbar < 1:
            raise InvalidInputError("n_blocks and nbar must be >= 1")
        if not 0.0 <= self.alpha < 1.0:
            raise InvalidInputError("alpha must lie in [0, 1)")
        if not self.rho > 0:
            raise InvalidInputError("rho must be > 0")
        if min(self.n_elements, self.beta_pi, self.beta_is, self.h_ps_abs2) < 0:
            raise InvalidInputError("gains must be >= 0")

    @property
    def mean_gain(self) -> float:
        """E|g_m|^2 = L beta_PI beta_IS + |h_PS|^2."""
        return self.n_elements * self.beta_pi * self.beta_is + self.h_ps_abs2


def q_func(x):
    """Gaussian tail probability Q(x) = 0.5 erfc(x / sqrt 2)."""
    out = 0.5 * special.erfc(np.asarray(x, dtype=float) / _SQRT2)
    return float(out) if out.ndim == 0 else out


def q_inv(p):
    """Inverse of :func:`q_func` on (0, 1)."""
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0) & (p < 1))):
        raise InvalidInputError("q_inv needs 0 < p < 1")
    x = _SQRT2 * special.erfcinv(2.0 * p)
    # one Newton step on Q(x) - p; dQ/dx = -phi(x)
    x = x + (q_func(x) - p) * _SQRT2PI * np.exp(0.5 * x * x)
    return float(x) if x.ndim == 0 else x


def analytic_pfa(lam, params: AnalyticParams):
    """False-alarm probability of the practical WED detector at threshold ``lam``."""
    lam = np.asarray(lam, dtype=float)
    if np.any(~(lam > 0)):
        raise InvalidInputError("threshold must be > 0")
    M, nbar, a = params.n_blocks, params.nbar, 1.0 - params.alpha
    num = a * (lam - 1.0) * nbar * M - M
    den = np.sqrt(2.0 * M + (2.0 - params.alpha - lam) ** 2 * nbar * M)
    return q_func(num / den)


def threshold_for_pfa(pfa, params: AnalyticParams) -> float:
    """Threshold giving false-alarm probability ``pfa`` (inverse of :func:`analytic_pfa`)."""
    if not 0 < pfa < 1:
        raise InvalidInputError("target false-alarm probability must lie in (0, 1)")
    M, nbar, a = params.n_blocks, params.nbar, 1.0 - params.alpha
    lq = q_inv(pfa)
    den = a * a * nbar * M - lq * lq
    if not den > 0:
        raise OutOfRegimeError(
            f"(1-alpha)^2 nbar M = {a * a * nbar * M:g} must exceed Q^-1(pfa)^2 = {lq * lq:g}"
        )
    rad = a ** 4 * nbar * M + (M - 2.0 * lq * lq) / nbar
    num = a * (M - lq * lq) + lq * math.sqrt(rad)
    return num / den + 1.0


def pmd_upper_bound(lam, params: AnalyticParams):
    """Upper bound on the missed-detection probability at threshold ``lam``."""
    lam = np.asarray(lam, dtype=float)
    if np.any(~(lam > 0)):
        raise InvalidInputError("threshold must be > 0")
    snr = params.rho * params.mean_gain
    arg = (1.0 + snr - lam) / math.sqrt(1.0 + 2.0 * snr) * math.sqrt(params.n_blocks * params.nbar)
    return q_func(arg)


class MeanBounds(NamedTuple):
    h1_lower: float
    h0_approx: float
    gap_lower: float


def mean_statistic_bounds(params: AnalyticParams) -> MeanBounds:
    """Lower bound on E[T|H1], large-M approximation of E[T|H0] (alpha = 0), and
    the lower bound on their gap for large nbar."""
    snr = params.rho * params.mean_gain
    return MeanBounds(1.0 + snr, 1.0 + 1.0 / params.nbar, snr)
