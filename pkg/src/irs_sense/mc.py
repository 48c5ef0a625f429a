"""Monte Carlo engine: trials, ROC sweeps, parameter sweeps, histograms.

A trial is keyed by ``(master_seed, realization, frame, hypothesis)``. Each
realization draws its own PU azimuth (unless fixed), channels and random
codebook from dedicated substreams; its frames share those channels and
differ only in noise (and symbols). Results are gathered per realization,
so they do not depend on how realizations are spread across workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import kernels
from .analytic import AnalyticParams, analytic_pfa, pmd_upper_bound, threshold_for_pfa
from .channel import Geometry, PathLossModel, dbm_to_mw, sample_channels
from .codebook import effective_channels, optimal_phases, random_codebook
from .detect import DetectionOutcome, Scheme, batch_statistics, decide
from .errors import InvalidInputError
from .frame import FrameLayout, Hypothesis, synthesize_block_energies
from .rng import Purpose, substream

_HYP_KEY = {Hypothesis.H0: 0, Hypothesis.H1: 1}


@dataclass(frozen=True)
class ScenarioConfig:
    """Every physical, frame and run parameter of an experiment.

    Powers are in dBm here and converted to milliwatts on use.
    ``pu_distance=None`` places the PU at the edge of the sensing range;
    ``pu_azimuth=None`` draws it uniformly per channel realization.
    """

    n_elements: int = 1024
    n_blocks: int = 100
    nbar: int = 100
    pt_dbm: float = 6.0
    noise_dbm: float = -70.0
    alpha: float = 0.0
    scheme: Scheme = Scheme.WED
    sensing_range: float = 80.0
    pu_distance: float | None = None
    pu_azimuth: float | None = None
    irs_height: float = 1.0
    ref_loss_db: float = 30.0
    exp_is: float = 2.0
    exp_ps: float = 3.5
    exp_pi: float = 3.5
    channel_realizations: int = 1000
    frames_per_realization: int = 100
    master_seed: int = 2022
    energy_sampler: str = "chi2"

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.n_elements < 0:
            raise InvalidInputError("n_elements must be >= 0")
        if self.n_blocks < 1 or self.nbar < 1:
            raise InvalidInputError("n_blocks and nbar must be >= 1")
        if not 0.0 <= self.alpha < 1.0:
            raise InvalidInputError("alpha must lie in [0, 1)")
        if self.channel_realizations < 1 or self.frames_per_realization < 1:
            raise InvalidInputError("need at least one realization and one frame")
        if self.energy_sampler not in ("chi2", "samples"):
            raise InvalidInputError(f"unknown energy_sampler {self.energy_sampler!r}")
        if self.scheme is Scheme.OPTIMAL and self.n_blocks != 1:
            raise InvalidInputError("the optimal-phase scheme uses a single block (n_blocks = 1)")
        self.geometry(0.0)
        self.pathloss

    # derived quantities
    @property
    def n_total(self) -> int:
        return self.n_blocks * self.nbar

    @property
    def layout(self) -> FrameLayout:
        return FrameLayout(self.n_blocks, self.nbar)

    @property
    def pt_mw(self) -> float:
        return float(dbm_to_mw(self.pt_dbm))

    @property
    def noise_mw(self) -> float:
        return float(dbm_to_mw(self.noise_dbm))

    @property
    def rho(self) -> float:
        return self.pt_mw / self.noise_mw

    @property
    def effective_elements(self) -> int:
        return 0 if self.scheme is Scheme.NOIRS else self.n_elements

    @property
    def pathloss(self) -> PathLossModel:
        return PathLossModel(self.ref_loss_db, self.exp_is, self.exp_ps, self.exp_pi)

    def geometry(self, azimuth: float) -> Geometry:
        d = self.sensing_range if self.pu_distance is None else self.pu_distance
        return Geometry((0.0, 0.0, 0.0), (0.0, 0.0, self.irs_height), d, azimuth, self.sensing_range)

    def replace(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)

    def with_blocks(self, n_blocks: int) -> "ScenarioConfig":
        """Same total N split into ``n_blocks`` blocks."""
        layout = FrameLayout.split(self.n_total, n_blocks)
        return replace(self, n_blocks=layout.n_blocks, nbar=layout.nbar)

    def analytic_params(self, h_ps_abs2: float = 0.0, beta_pi: float = 0.0, beta_is: float = 0.0) -> AnalyticParams:
        return AnalyticParams(self.n_blocks, self.nbar, self.alpha, self.rho,
                              self.effective_elements, beta_pi, beta_is, h_ps_abs2)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scheme"] = self.scheme.value
        return d


@dataclass
class TrialBatch:
    """Statistics of every trial, ``stats[r, f]``, plus per-realization channel facts."""

    hyp: Hypothesis
    stats: np.ndarray
    h_ps_abs2: np.ndarray
    beta_pi: np.ndarray
    beta_is: np.ndarray

    @property
    def n_trials(self) -> int:
        return self.stats.size


def _azimuth(cfg: ScenarioConfig, r: int) -> float:
    if cfg.pu_azimuth is not None:
        return float(cfg.pu_azimuth)
    return float(substream(cfg.master_seed, r, Purpose.AZIMUTH).uniform(0.0, 2 * math.pi))


def _realization(cfg: ScenarioConfig, r: int, hyp: Hypothesis):
    hyp = Hypothesis(hyp)
    geom = cfg.geometry(_azimuth(cfg, r))
    n_el = cfg.effective_elements
    chan = sample_channels(geom, cfg.pathloss, n_el, substream(cfg.master_seed, r, Purpose.CHANNEL))
    g = None
    if hyp is Hypothesis.H1 or cfg.scheme is Scheme.GENIE:
        if cfg.scheme is Scheme.OPTIMAL:
            book = optimal_phases(chan)
        else:
            book = random_codebook(n_el, cfg.n_blocks, substream(cfg.master_seed, r, Purpose.CODEBOOK))
        g = effective_channels(chan, book)
    noise_rng = substream(cfg.master_seed, r, Purpose.NOISE, _HYP_KEY[hyp])
    T = synthesize_block_energies(hyp, g, cfg.layout, cfg.pt_mw, cfg.noise_mw, noise_rng,
                                  n_frames=cfg.frames_per_realization, method=cfg.energy_sampler)
    stats = batch_statistics(T, cfg.scheme, cfg.alpha, g)
    return stats, abs(chan.h_ps) ** 2, chan.beta_pi, chan.beta_is


def _chunk(cfg: ScenarioConfig, hyp: Hypothesis, start: int, stop: int):
    rows = [_realization(cfg, r, hyp) for r in range(start, stop)]
    return (np.stack([row[0] for row in rows]),
            np.array([row[1] for row in rows]),
            np.array([row[2] for row in rows]),
            np.array([row[3] for row in rows]))


def simulate(cfg: ScenarioConfig, hyp, workers: int = 1) -> TrialBatch:
    """Run every (realization, frame) trial of ``cfg`` under ``hyp``."""
    hyp = Hypothesis(hyp)
    R = cfg.channel_realizations
    if workers <= 1:
        parts = [_chunk(cfg, hyp, 0, R)]
    else:
        n_chunks = min(R, 4 * workers)
        bounds = np.linspace(0, R, n_chunks + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_chunk, cfg, hyp, int(a), int(b))
                       for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
            parts = [f.result() for f in futures]
    stats, h2, bpi, bis = (np.concatenate([p[i] for p in parts]) for i in range(4))
    return TrialBatch(hyp, stats, h2, bpi, bis)


def run_trial(cfg: ScenarioConfig, realization: int, frame: int, hyp, threshold: float) -> DetectionOutcome:
    """Single trial; a deterministic function of the seed, indices and hypothesis."""
    if not 0 <= realization < cfg.channel_realizations:
        raise InvalidInputError("realization index out of range")
    if not 0 <= frame < cfg.frames_per_realization:
        raise InvalidInputError("frame index out of range")
    stats = _realization(cfg, realization, Hypothesis(hyp))[0]
    return decide(stats[frame], threshold)


# ---------------------------------------------------------------------------
# Aggregation


def binomial_se(p, n):
    p = np.asarray(p, dtype=float)
    return np.sqrt(p * (1.0 - p) / n)


def exceed_fraction(stats, thresholds) -> np.ndarray:
    stats = np.asarray(stats)
    return kernels.exceed_counts(stats, np.asarray(thresholds, dtype=float)) / stats.size


def empirical_thresholds(h0_stats, pfa_targets) -> np.ndarray:
    """Thresholds with exactly ``floor(p n)`` H0 statistics strictly above (ties aside)."""
    s = np.sort(np.asarray(h0_stats, dtype=float).ravel())
    n = s.size
    p = np.asarray(pfa_targets, dtype=float)
    k = np.floor(p * n).astype(int)
    return s[np.clip(n - k - 1, 0, n - 1)]


def mean_bound(batch: TrialBatch, cfg: ScenarioConfig, lam) -> np.ndarray:
    """Missed-detection bound averaged over the batch's channel realizations."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    total = np.zeros_like(lam)
    for h2, bpi, bis in zip(batch.h_ps_abs2, batch.beta_pi, batch.beta_is):
        total += pmd_upper_bound(lam, cfg.analytic_params(h2, bpi, bis))
    return total / len(batch.h_ps_abs2)


@dataclass
class RocCurve:
    lam: np.ndarray
    pfa_emp: np.ndarray
    pmd_emp: np.ndarray
    pfa_se: np.ndarray
    pmd_se: np.ndarray
    pfa_analytic: np.ndarray | None = None
    pmd_bound: np.ndarray | None = None
    pfa_target: np.ndarray | None = None
    n_h0: int = 0
    n_h1: int = 0

    def columns(self) -> dict:
        cols = {"lambda": self.lam}
        if self.pfa_target is not None:
            cols["pfa_target"] = self.pfa_target
        cols.update(pfa_emp=self.pfa_emp, pmd_emp=self.pmd_emp, pfa_se=self.pfa_se, pmd_se=self.pmd_se)
        if self.pfa_analytic is not None:
            cols["pfa_analytic"] = self.pfa_analytic
        if self.pmd_bound is not None:
            cols["pmd_bound"] = self.pmd_bound
        return cols


def _roc_from_batches(cfg, lam, h0: TrialBatch, h1: TrialBatch, pfa_target=None) -> RocCurve:
    lam = np.asarray(lam, dtype=float)
    pfa = exceed_fraction(h0.stats, lam)
    pmd = 1.0 - exceed_fraction(h1.stats, lam)
    wed_like = cfg.scheme in (Scheme.WED, Scheme.NOIRS)
    return RocCurve(
        lam=lam,
        pfa_emp=pfa,
        pmd_emp=pmd,
        pfa_se=binomial_se(pfa, h0.n_trials),
        pmd_se=binomial_se(pmd, h1.n_trials),
        pfa_analytic=analytic_pfa(lam, cfg.analytic_params()) if wed_like else None,
        pmd_bound=mean_bound(h1, cfg, lam) if wed_like else None,
        pfa_target=pfa_target,
        n_h0=h0.n_trials,
        n_h1=h1.n_trials,
    )


def roc_sweep(cfg: ScenarioConfig, lam_grid, workers: int = 1) -> RocCurve:
    """Empirical and closed-form P_FA / P_MD on a threshold grid."""
    lam = np.asarray(lam_grid, dtype=float)
    if lam.size == 0:
        raise InvalidInputError("empty threshold grid")
    h0 = simulate(cfg, Hypothesis.H0, workers)
    h1 = simulate(cfg, Hypothesis.H1, workers)
    return _roc_from_batches(cfg, lam, h0, h1)


def roc_at_pfa(cfg: ScenarioConfig, pfa_targets, workers: int = 1) -> RocCurve:
    """ROC with thresholds calibrated on the empirical H0 statistics, so that
    different schemes are compared at matched false-alarm rates."""
    targets = np.asarray(pfa_targets, dtype=float)
    h0 = simulate(cfg, Hypothesis.H0, workers)
    h1 = simulate(cfg, Hypothesis.H1, workers)
    lam = empirical_thresholds(h0.stats, targets)
    return _roc_from_batches(cfg, lam, h0, h1, pfa_target=targets)


def log_pfa_grid(lo: float = 0.01, hi: float = 0.5, n: int = 25) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), n)


def analytic_lambda_grid(cfg: ScenarioConfig, pfa_targets) -> np.ndarray:
    """Thresholds from the closed-form inversion over a grid of target P_FA."""
    params = cfg.analytic_params()
    lam = np.array([threshold_for_pfa(p, params) for p in np.asarray(pfa_targets, dtype=float)])
    return np.sort(lam)


# ---------------------------------------------------------------------------
# Parameter sweeps at a fixed false-alarm target


@dataclass
class SweepResult:
    parameter: str
    values: np.ndarray
    lam: np.ndarray
    lam_analytic: np.ndarray
    pfa_emp: np.ndarray
    pmd_emp: np.ndarray
    pmd_se: np.ndarray
    pfa_target: float = 0.1
    calibration: str = "empirical"

    def columns(self) -> dict:
        return {
            self.parameter: self.values,
            "lambda": self.lam,
            "lambda_analytic": self.lam_analytic,
            "pfa_emp": self.pfa_emp,
            "pmd_emp": self.pmd_emp,
            "pmd_se": self.pmd_se,
        }


def _sweep_point(cfg: ScenarioConfig, pfa_target: float, calibration: str, workers: int):
    h0 = simulate(cfg, Hypothesis.H0, workers)
    h1 = simulate(cfg, Hypothesis.H1, workers)
    try:
        lam_a = threshold_for_pfa(pfa_target, cfg.analytic_params())
    except InvalidInputError:
        lam_a = float("nan")
    if calibration == "empirical":
        lam = float(empirical_thresholds(h0.stats, [pfa_target])[0])
    elif calibration == "analytic":
        lam = lam_a
    else:
        raise InvalidInputError(f"unknown calibration {calibration!r}")
    pfa = float(exceed_fraction(h0.stats, [lam])[0])
    pmd = 1.0 - float(exceed_fraction(h1.stats, [lam])[0])
    return lam, lam_a, pfa, pmd, float(binomial_se(pmd, h1.n_trials))


def _sweep(name, cfgs, values, pfa_target, calibration, workers) -> SweepResult:
    rows = np.array([_sweep_point(c, pfa_target, calibration, workers) for c in cfgs])
    return SweepResult(name, np.asarray(values), rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3],
                       rows[:, 4], pfa_target, calibration)


def sweep_blocks(cfg: ScenarioConfig, block_counts, pfa_target: float = 0.1,
                 calibration: str = "empirical", workers: int = 1) -> SweepResult:
    """P_MD at the target P_FA versus M, with N = M * nbar held fixed."""
    cfgs = [cfg.with_blocks(int(m)) for m in block_counts]
    return _sweep("M", cfgs, [int(m) for m in block_counts], pfa_target, calibration, workers)


def sweep_alpha(cfg: ScenarioConfig, alphas, pfa_target: float = 0.1,
                calibration: str = "empirical", workers: int = 1) -> SweepResult:
    """P_MD at the target P_FA versus the scaling factor alpha."""
    cfgs = [cfg.replace(alpha=float(a)) for a in alphas]
    return _sweep("alpha", cfgs, [float(a) for a in alphas], pfa_target, calibration, workers)


# ---------------------------------------------------------------------------
# Histograms


def histogram_density(stats, edges) -> np.ndarray:
    """Density on fixed ``edges``; mass outside the edges is dropped before normalising."""
    counts, _ = np.histogram(np.ravel(stats), bins=edges)
    total = counts.sum()
    if total == 0:
        return np.zeros(len(edges) - 1)
    return counts / (total * np.diff(edges))


def pdf_histogram(cfg: ScenarioConfig, hyp, bins=100, workers: int = 1):
    """Normalised histogram of the test statistic: ``(edges, density)``."""
    stats = simulate(cfg, hyp, workers).stats
    if np.isscalar(bins):
        if int(bins) < 1:
            raise InvalidInputError("need at least one bin")
        edges = np.linspace(stats.min(), stats.max(), int(bins) + 1)
        if edges[0] == edges[-1]:
            edges = np.linspace(edges[0] - 0.5, edges[0] + 0.5, int(bins) + 1)
    else:
        edges = np.asarray(bins, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise InvalidInputError("bin edges must be strictly increasing")
    return edges, histogram_density(stats, edges)
