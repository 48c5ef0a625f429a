"""Geometry, path loss and random channel generation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "Geometry",
    "PathLossModel",
    "ChannelRealization",
    "GainLawParams",
    "db_to_linear",
    "dbm_to_mw",
    "path_gain",
    "link_gains",
    "ura_steering",
    "sample_channels",
    "sample_gain_law",
]


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def dbm_to_mw(dbm):
    """Power in dBm to milliwatts (the internal power unit)."""
    return 10.0 ** (np.asarray(dbm, dtype=float) / 10.0)


@dataclass(frozen=True)
class Geometry:
    """SU at ``su_pos``, IRS centre at ``irs_center``, PU at distance ``pu_distance``
    and azimuth ``pu_azimuth`` in the ground plane: ``(d sin phi, d cos phi, 0)``."""

    su_pos: tuple = (0.0, 0.0, 0.0)
    irs_center: tuple = (0.0, 0.0, 1.0)
    pu_distance: float = 80.0
    pu_azimuth: float = 0.0
    sensing_range: float = 80.0

    def __post_init__(self):
        if not self.pu_distance > 0:
            raise InvalidInputError(f"pu_distance must be > 0, got {self.pu_distance}")
        if not self.sensing_range > 0:
            raise InvalidInputError(f"sensing_range must be > 0, got {self.sensing_range}")
        if not 0.0 <= self.pu_azimuth < 2 * math.pi:
            raise InvalidInputError(f"pu_azimuth must lie in [0, 2pi), got {self.pu_azimuth}")
        object.__setattr__(self, "su_pos", tuple(float(v) for v in self.su_pos))
        object.__setattr__(self, "irs_center", tuple(float(v) for v in self.irs_center))

    @property
    def pu_pos(self) -> np.ndarray:
        d, phi = self.pu_distance, self.pu_azimuth
        return np.array([d * math.sin(phi), d * math.cos(phi), 0.0])

    def distances(self) -> tuple[float, float, float]:
        """(d_PS, d_PI, d_IS) in metres."""
        su, irs, pu = np.array(self.su_pos), np.array(self.irs_center), self.pu_pos
        return (
            float(np.linalg.norm(pu - su)),
            float(np.linalg.norm(pu - irs)),
            float(np.linalg.norm(irs - su)),
        )

    def with_azimuth(self, phi: float) -> "Geometry":
        return Geometry(self.su_pos, self.irs_center, self.pu_distance, phi, self.sensing_range)


@dataclass(frozen=True)
class PathLossModel:
    ref_loss_db: float = 30.0
    exp_is: float = 2.0
    exp_ps: float = 3.5
    exp_pi: float = 3.5

    def __post_init__(self):
        if not self.ref_loss_db > 0:
            raise InvalidInputError("ref_loss_db must be > 0")
        for name in ("exp_is", "exp_ps", "exp_pi"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be > 0")


def path_gain(distance, exponent, model: PathLossModel = PathLossModel()):
    """Linear large-scale gain ``10^(-ref/10) * distance^(-exponent)``."""
    d = np.asarray(distance, dtype=float)
    if np.any(~(d > 0)):
        raise InvalidInputError(f"distance must be > 0, got {distance}")
    g = 10.0 ** (-model.ref_loss_db / 10.0) * d ** (-float(exponent))
    return float(g) if g.ndim == 0 else g


def link_gains(geom: Geometry, model: PathLossModel = PathLossModel()) -> tuple[float, float, float]:
    """(beta_PS, beta_PI, beta_IS) for a geometry."""
    d_ps, d_pi, d_is = geom.distances()
    return (
        path_gain(d_ps, model.exp_ps, model),
        path_gain(d_pi, model.exp_pi, model),
        path_gain(d_is, model.exp_is, model),
    )


def ura_steering(n_elements: int, direction) -> np.ndarray:
    """Unit-modulus far-field response of a half-wavelength URA in the x-y plane.

    Elements fill a ``ceil(sqrt(L)) x ceil(L / ceil(sqrt(L)))`` grid row-major;
    ``direction`` is the (not necessarily normalised) look direction.
    """
    if n_elements == 0:
        return np.zeros(0, dtype=np.complex128)
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    n_cols = math.ceil(math.sqrt(n_elements))
    idx = np.arange(n_elements)
    ix, iy = idx % n_cols, idx // n_cols
    return np.exp(1j * np.pi * (ix * u[0] + iy * u[1]))


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the three links. ``h_is`` is the column h_IS; the row
    h_IS^H used in the effective channel is ``h_is.conj()``."""

    h_ps: complex
    h_pi: np.ndarray = field(repr=False)
    h_is: np.ndarray = field(repr=False)
    beta_ps: float = 0.0
    beta_pi: float = 0.0
    beta_is: float = 0.0

    @property
    def n_elements(self) -> int:
        return int(self.h_pi.size)

    @property
    def coupling(self) -> np.ndarray:
        """Per-element cascaded coefficient conj(h_IS,l) * h_PI,l."""
        return self.h_is.conj() * self.h_pi


def _cn(rng, n, var):
    # interleaved re/im so that a shorter draw is a prefix of a longer one
    z = rng.standard_normal(2 * n)
    return (z[0::2] + 1j * z[1::2]) * math.sqrt(var / 2.0)


def sample_channels(geom: Geometry, model: PathLossModel, n_elements: int, rng) -> ChannelRealization:
    """Rayleigh PU-SU and PU-IRS links, LoS IRS-SU link.

    ``h_PS`` is drawn first and ``h_PI`` element by element, so realizations
    with different ``n_elements`` from the same stream share their prefix.
    """
    if n_elements < 0:
        raise InvalidInputError("n_elements must be >= 0")
    beta_ps, beta_pi, beta_is = link_gains(geom, model)
    h_ps = complex(_cn(rng, 1, beta_ps)[0])
    h_pi = _cn(rng, n_elements, beta_pi)
    to_su = np.array(geom.su_pos) - np.array(geom.irs_center)
    h_is = math.sqrt(beta_is) * ura_steering(n_elements, to_su)
    return ChannelRealization(h_ps, h_pi, h_is, beta_ps, beta_pi, beta_is)


@dataclass(frozen=True)
class GainLawParams:
    n_elements: int
    beta_pi: float
    beta_is: float
    h_ps_abs2: float

    def __post_init__(self):
        for name in ("n_elements", "beta_pi", "beta_is", "h_ps_abs2"):
            if getattr(self, name) < 0:
                raise InvalidInputError(f"{name} must be >= 0")

    @property
    def mean(self) -> float:
        return self.n_elements * self.beta_pi * self.beta_is + self.h_ps_abs2


def sample_gain_law(params: GainLawParams, rng, size=None):
    """Draw |g|^2 from the large-L law (L b_PI b_IS / 2) * chi2_2(2|h_PS|^2 / (L b_PI b_IS))."""
    scale = params.n_elements * params.beta_pi * params.beta_is
    if params.n_elements < 1 or not scale > 0:
        raise InvalidInputError("gain law needs L >= 1 and beta_PI * beta_IS > 0")
    nonc = 2.0 * params.h_ps_abs2 / scale
    return 0.5 * scale * rng.noncentral_chisquare(2.0, nonc, size=size)
