"""Combining rules and the threshold test."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .errors import InvalidInputError
from .frame import Hypothesis


class Scheme(str, Enum):
    WED = "wed"          # practical weights [T_m - alpha]^+
    GENIE = "genie"      # weights |g_m|^2 / sum |g_k|^2
    SC = "sc"            # selection combining
    NOIRS = "noirs"      # WED with the IRS switched off (L = 0)
    OPTIMAL = "optimal"  # genie phase alignment, single block


@dataclass(frozen=True)
class WeightVector:
    w: np.ndarray
    discarded: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class DetectorConfig:
    alpha: float = 0.0
    threshold: float = 1.0
    scheme: Scheme = Scheme.WED

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not self.threshold > 0:
            raise InvalidInputError("threshold must be > 0")
        object.__setattr__(self, "scheme", Scheme(self.scheme))


@dataclass(frozen=True)
class DetectionOutcome:
    statistic: float
    decision: Hypothesis


def _check_alpha(alpha):
    if not 0.0 <= alpha < 1.0:
        raise InvalidInputError(f"alpha must lie in [0, 1), got {alpha}")


def practical_weights(T, alpha: float) -> WeightVector:
    """w_m = [T_m - alpha]^+ / sum_k [T_k - alpha]^+; all-zero if every T_m <= alpha."""
    _check_alpha(alpha)
    T = np.asarray(T, dtype=float)
    excess = np.maximum(T - alpha, 0.0)
    total = excess.sum()
    dropped = frozenset(int(i) for i in np.flatnonzero(T <= alpha))
    w = excess / total if total > 0 else np.zeros_like(T)
    return WeightVector(w, dropped)


def genie_weights(g) -> WeightVector:
    p = np.abs(np.asarray(g, dtype=np.complex128)) ** 2
    total = p.sum()
    if not total > 0:
        raise InvalidInputError("genie weights need at least one non-zero channel")
    w = p / total
    return WeightVector(w, frozenset(int(i) for i in np.flatnonzero(w == 0)))


def wed_statistic(T, w) -> float:
    """Weighted sum of block energies; 0 for an all-zero weight vector."""
    w = w.w if isinstance(w, WeightVector) else np.asarray(w, dtype=float)
    T = np.asarray(T, dtype=float)
    if T.shape != w.shape:
        raise InvalidInputError(f"shape mismatch: T {T.shape}, w {w.shape}")
    return float(np.dot(w, T))


def sc_statistic(T) -> float:
    T = np.asarray(T, dtype=float)
    if T.size < 1:
        raise InvalidInputError("need at least one block")
    return float(T[int(np.argmax(T))])


def decide(statistic: float, threshold: float) -> DetectionOutcome:
    if not threshold > 0:
        raise InvalidInputError("threshold must be > 0")
    return DetectionOutcome(float(statistic), Hypothesis.H1 if statistic > threshold else Hypothesis.H0)


def batch_statistics(T, scheme, alpha: float = 0.0, g=None) -> np.ndarray:
    """Test statistic for each row of a ``(frames, M)`` block-energy array."""
    scheme = Scheme(scheme)
    T = np.atleast_2d(np.asarray(T, dtype=float))
    if scheme in (Scheme.WED, Scheme.NOIRS, Scheme.OPTIMAL):
        _check_alpha(alpha)
        return kernels.wed_statistics(T, alpha)
    if scheme is Scheme.SC:
        return T.max(axis=1)
    if g is None:
        raise InvalidInputError("genie scheme needs the effective channels")
    return T @ genie_weights(g).w
