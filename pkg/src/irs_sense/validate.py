"""Monte Carlo checks of the closed forms, shared by the CLI and the test suite."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sstats

from .analytic import analytic_pfa, mean_statistic_bounds, threshold_for_pfa
from .channel import GainLawParams, sample_channels, sample_gain_law
from .codebook import TWO_PI
from .detect import Scheme
from .frame import Hypothesis
from .mc import (ScenarioConfig, binomial_se, exceed_fraction, mean_bound, roc_at_pfa, simulate,
                 sweep_alpha, sweep_blocks)
from .rng import Purpose, substream


@dataclass
class Report:
    name: str
    passed: bool
    lines: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def render(self) -> str:
        head = f"[{'PASS' if self.passed else 'FAIL'}] {self.name}"
        return "\n".join([head] + ["    " + s for s in self.lines])


def _base(realizations, frames, seed, **kw) -> ScenarioConfig:
    return ScenarioConfig(channel_realizations=realizations, frames_per_realization=frames,
                          master_seed=seed, **kw)


def check_pfa(realizations=1000, frames=100, seed=2022, n_blocks=100, nbar=100, alpha=0.0,
              grid=None, tol=0.01) -> Report:
    """Empirical H0 exceedance against the closed-form false-alarm probability."""
    cfg = _base(realizations, frames, seed, n_blocks=n_blocks, nbar=nbar, alpha=alpha)
    lam = np.linspace(1.0, 1.05, 20) if grid is None else np.asarray(grid, dtype=float)
    h0 = simulate(cfg, Hypothesis.H0)
    emp = exceed_fraction(h0.stats, lam)
    ana = analytic_pfa(lam, cfg.analytic_params())
    err = np.abs(emp - ana)
    worst = int(np.argmax(err))
    return Report(
        "pfa", bool(err.max() <= tol),
        [f"{h0.n_trials} H0 frames, M={n_blocks}, nbar={nbar}, alpha={alpha}, {lam.size} thresholds",
         f"max |emp - analytic| = {err.max():.5f} at lambda = {lam[worst]:.5f} (tol {tol})"],
        {"lam": lam, "emp": emp, "analytic": ana, "max_abs_err": float(err.max())},
    )


def check_threshold(tol=1e-9) -> Report:
    lines, worst = [], 0.0
    for M, nbar, alpha in ((100, 100, 0.0), (100, 100, 0.2), (50, 200, 0.5)):
        cfg = ScenarioConfig(n_blocks=M, nbar=nbar, alpha=alpha)
        params = cfg.analytic_params()
        for p in (0.01, 0.05, 0.1, 0.3, 0.5):
            err = abs(float(analytic_pfa(threshold_for_pfa(p, params), params)) - p)
            worst = max(worst, err)
        lines.append(f"(M={M}, nbar={nbar}, alpha={alpha}) round trip ok")
    lam = threshold_for_pfa(0.1, ScenarioConfig(alpha=0.0).analytic_params())
    ok = worst <= tol and abs(lam - 1.023) <= 1e-3
    lines.append(f"max round-trip error {worst:.2e} (tol {tol}); lambda(0.1) = {lam:.6f}")
    return Report("threshold", ok, lines, {"max_err": worst, "lambda_0.1": lam})


def check_pmd_bound(realizations=1000, frames=100, seed=2022, n_elements=1024, azimuth=0.0,
                    n_points=50, k_se=3.0) -> Report:
    """Empirical P_MD must sit below the averaged upper bound at every threshold."""
    cfg = _base(realizations, frames, seed, n_elements=n_elements, pu_azimuth=azimuth)
    lam = np.linspace(1.0, 1.05, n_points)
    h1 = simulate(cfg, Hypothesis.H1)
    pmd = 1.0 - exceed_fraction(h1.stats, lam)
    se = binomial_se(pmd, h1.n_trials)
    bound = mean_bound(h1, cfg, lam)
    bad = pmd > bound + k_se * se
    return Report(
        "pmd-bound", not bad.any(),
        [f"{h1.n_trials} H1 frames, L={n_elements}, azimuth={azimuth}, {n_points} thresholds",
         f"violations beyond {k_se} std-err: {int(bad.sum())} / {n_points} "
         f"(fraction {bad.mean():.3f}, target 0)",
         f"min slack (bound - emp) = {np.min(bound - pmd):.5f}"],
        {"lam": lam, "pmd": pmd, "bound": bound, "se": se, "violations": int(bad.sum())},
    )


def gain_samples(n_elements, draws, seed=2022, fixed_pu_irs=False, azimuth=0.0):
    """|g|^2 under random codewords at a fixed h_PS, and matching draws of the large-L law.

    By default each draw also refreshes h_PI (the law's Rayleigh assumption);
    ``fixed_pu_irs=True`` keeps one h_PI and varies only the codeword.
    """
    cfg = ScenarioConfig(n_elements=n_elements, pu_azimuth=azimuth, master_seed=seed)
    geom, model = cfg.geometry(azimuth), cfg.pathloss
    base = sample_channels(geom, model, n_elements, substream(seed, 0, Purpose.CHANNEL))
    gains = np.empty(draws)
    for i in range(draws):
        if fixed_pu_irs:
            chan = base
        else:
            chan = sample_channels(geom, model, n_elements, substream(seed, i + 1, Purpose.CHANNEL))
        theta = substream(seed, i, Purpose.CODEBOOK).uniform(0.0, TWO_PI, n_elements)
        gains[i] = abs(base.h_ps + np.dot(chan.coupling, np.exp(1j * theta))) ** 2
    params = GainLawParams(n_elements, base.beta_pi, base.beta_is, abs(base.h_ps) ** 2)
    law = sample_gain_law(params, substream(seed, 0, Purpose.GAIN_LAW), size=draws)
    return gains, law, params


def check_gain_law(n_elements=1024, draws=10_000, seed=2022, tol=0.02, report_elements=16) -> Report:
    gains, law, _ = gain_samples(n_elements, draws, seed)
    ks = sstats.ks_2samp(gains, law).statistic
    lines = [f"L={n_elements}, {draws} draws: KS = {ks:.4f} (tol {tol})"]
    extra = {}
    fixed = sstats.ks_2samp(*gain_samples(n_elements, draws, seed, fixed_pu_irs=True)[:2]).statistic
    lines.append(f"L={n_elements}, one fixed h_PI: KS = {fixed:.4f} (reported)")
    if report_elements:
        g_s, l_s, _ = gain_samples(report_elements, draws, seed, fixed_pu_irs=True)
        extra["ks_small"] = sstats.ks_2samp(g_s, l_s).statistic
        lines.append(f"L={report_elements}, one fixed h_PI: KS = {extra['ks_small']:.4f} (reported)")
    return Report("lemma1", bool(ks < tol), lines, {"ks": ks, "ks_fixed": fixed, **extra})


def check_means(realizations=1000, frames=100, seed=2022, n_elements=1024, azimuth=0.0,
                rel_tol=0.01, k_se=3.0) -> Report:
    cfg = _base(realizations, frames, seed, n_elements=n_elements, pu_azimuth=azimuth)
    h0 = simulate(cfg, Hypothesis.H0)
    h1 = simulate(cfg, Hypothesis.H1)
    h0_target = mean_statistic_bounds(cfg.analytic_params()).h0_approx
    h0_mean = float(h0.stats.mean())
    lower = float(np.mean([mean_statistic_bounds(cfg.analytic_params(h2, bpi, bis)).h1_lower
                           for h2, bpi, bis in zip(h1.h_ps_abs2, h1.beta_pi, h1.beta_is)]))
    h1_mean = float(h1.stats.mean())
    h1_se = float(h1.stats.std(ddof=1) / np.sqrt(h1.n_trials))
    ok0 = abs(h0_mean - h0_target) <= rel_tol * h0_target
    ok1 = h1_mean >= lower - k_se * h1_se
    return Report(
        "means", bool(ok0 and ok1),
        [f"E[T|H0] = {h0_mean:.6f} vs 1 + 1/nbar = {h0_target:.6f} (rel tol {rel_tol})",
         f"E[T|H1] = {h1_mean:.6f} vs lower bound {lower:.6f} - {k_se} se ({h1_se:.2e})"],
        {"h0_mean": h0_mean, "h0_target": h0_target, "h1_mean": h1_mean, "h1_lower": lower,
         "h1_se": h1_se},
    )


# ---------------------------------------------------------------------------
# Qualitative orderings


def check_order_elements(realizations=1000, frames=100, seed=2022, threshold=1.023,
                         elements=(0, 64, 256, 1024)) -> Report:
    """P_MD strictly decreasing in L at a fixed threshold (common random numbers)."""
    base = _base(realizations, frames, seed)
    pmd = []
    for L in elements:
        cfg = base.replace(n_elements=L)
        h1 = simulate(cfg, Hypothesis.H1)
        pmd.append(1.0 - float(exceed_fraction(h1.stats, [threshold])[0]))
    pmd = np.array(pmd)
    ok = bool(np.all(np.diff(pmd) < 0))
    return Report("order-L", ok,
                  [f"P_MD at lambda={threshold}: " + ", ".join(f"L={L}: {p:.4f}" for L, p in zip(elements, pmd))],
                  {"pmd": pmd})


def check_order_schemes(realizations=1000, frames=100, seed=2022, k_se=2.0) -> Report:
    """Optimal phases <= WED with IRS <= SC in P_MD at matched empirical P_FA."""
    targets = np.logspace(np.log10(0.01), np.log10(0.5), 15)
    base = _base(realizations, frames, seed, alpha=0.2)
    wed = roc_at_pfa(base, targets)
    sc = roc_at_pfa(base.replace(scheme=Scheme.SC), targets)
    opt = roc_at_pfa(base.replace(scheme=Scheme.OPTIMAL, n_blocks=1, nbar=base.n_total), targets)

    def dominated(a, b):
        return a.pmd_emp <= b.pmd_emp + k_se * np.hypot(a.pmd_se, b.pmd_se)

    d1, d2 = dominated(opt, wed), dominated(wed, sc)
    return Report(
        "order-schemes", bool(d1.all() and d2.all()),
        [f"P_FA targets {targets[0]:.2f}..{targets[-1]:.2f} ({targets.size} points)",
         f"optimal <= WED+IRS at {int(d1.sum())}/{d1.size}; WED+IRS <= SC at {int(d2.sum())}/{d2.size}",
         f"mean P_MD: optimal {opt.pmd_emp.mean():.4f}, WED+IRS {wed.pmd_emp.mean():.4f}, SC {sc.pmd_emp.mean():.4f}"],
        {"optimal": opt, "wed": wed, "sc": sc},
    )


def check_order_blocks(realizations=1000, frames=100, seed=2022, blocks=(1, 10, 100), alpha=0.5,
                       k_se=2.0, calibration="analytic") -> Report:
    res = sweep_blocks(_base(realizations, frames, seed, alpha=alpha), blocks, calibration=calibration)
    step_ok = res.pmd_emp[1:] <= res.pmd_emp[:-1] + k_se * np.hypot(res.pmd_se[1:], res.pmd_se[:-1])
    return Report(
        "order-M", bool(step_ok.all()),
        ["P_MD at P_FA*=0.1 (" + calibration + " threshold): "
         + ", ".join(f"M={m}: {p:.4f} (pfa {f:.3f})" for m, p, f in zip(res.values, res.pmd_emp, res.pfa_emp))],
        {"sweep": res},
    )


def check_order_alpha(realizations=1000, frames=100, seed=2022, pt_dbm=8.0, nbar=100,
                      calibration="analytic") -> Report:
    alphas = np.round(np.arange(10) * 0.1, 1)
    base = _base(realizations, frames, seed, pt_dbm=pt_dbm).with_blocks(10_000 // nbar)
    res = sweep_alpha(base, alphas, calibration=calibration)
    best = int(np.argmin(res.pmd_emp))
    interior = 0 < best < len(alphas) - 1 and res.pmd_emp[best] < min(res.pmd_emp[0], res.pmd_emp[-1])
    return Report(
        "order-alpha", bool(interior),
        [f"P_MD at P_FA*=0.1 ({calibration} threshold), nbar={nbar}, Pt={pt_dbm} dBm: "
         + ", ".join(f"{a:.1f}: {p:.4f}" for a, p in zip(alphas, res.pmd_emp)),
         f"argmin alpha = {alphas[best]:.1f}"],
        {"sweep": res, "best_alpha": float(alphas[best])},
    )


SUITES = {
    "lemma1": check_gain_law,
    "pfa": check_pfa,
    "pmd-bound": check_pmd_bound,
    "means": check_means,
}
