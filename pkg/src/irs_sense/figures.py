"""Builders for the figure tables written by ``irs-sense figure``.

Each builder takes a resolved :class:`~irs_sense.mc.ScenarioConfig` plus the
figure's list parameters and returns ``{file stem: columns}``.
"""
from __future__ import annotations

import numpy as np

from .detect import Scheme
from .frame import Hypothesis
from .mc import (ScenarioConfig, exceed_fraction, histogram_density, log_pfa_grid, mean_bound,
                 roc_at_pfa, simulate, sweep_alpha, sweep_blocks)
from .analytic import analytic_pfa

FIGURES = ("2a", "2b", "3", "4a", "4b")

# caption parameters; ``lists`` are the per-figure series / sweep values
DEFAULTS = {
    "2a": dict(cfg=dict(n_blocks=100, nbar=100, alpha=0.0, pt_dbm=6.0),
               lists=dict(L=[64, 256, 1024], lam=(1.0, 1.05, 50))),
    "2b": dict(cfg=dict(n_elements=1024, n_blocks=100, nbar=100, alpha=0.0, pt_dbm=6.0),
               lists=dict(bins=100)),
    "3": dict(cfg=dict(n_elements=1024, n_blocks=100, nbar=100, alpha=0.2, pt_dbm=6.0),
              lists=dict(pfa=(0.01, 0.5, 25))),
    "4a": dict(cfg=dict(n_elements=1024, n_blocks=100, nbar=100, alpha=0.5, pt_dbm=6.0),
               lists=dict(M=[1, 2, 5, 10, 20, 50, 100], calibration="analytic")),
    "4b": dict(cfg=dict(n_elements=1024, n_blocks=100, nbar=100, pt_dbm=8.0),
               lists=dict(nbar=[50, 100, 200], alpha=[round(0.1 * k, 1) for k in range(10)],
                          calibration="analytic")),
}


def figure_2a(cfg: ScenarioConfig, L, lam, workers=1) -> dict:
    """P_FA and P_MD versus threshold, with and without IRS."""
    grid = np.linspace(*lam[:2], int(lam[2]))
    h0 = simulate(cfg, Hypothesis.H0, workers)
    cols = {
        "lambda": grid,
        "pfa_analytic": analytic_pfa(grid, cfg.analytic_params()),
        "pfa_emp": exceed_fraction(h0.stats, grid),
    }
    largest = None
    for n_el in L:
        c = cfg.replace(n_elements=int(n_el), scheme=Scheme.WED)
        h1 = simulate(c, Hypothesis.H1, workers)
        cols[f"pmd_emp_L{int(n_el)}"] = 1.0 - exceed_fraction(h1.stats, grid)
        if largest is None or n_el >= largest[0]:
            largest = (int(n_el), c, h1)
    noirs = cfg.replace(scheme=Scheme.NOIRS)
    cols["pmd_emp_noirs"] = 1.0 - exceed_fraction(simulate(noirs, Hypothesis.H1, workers).stats, grid)
    n_el, c, h1 = largest
    cols[f"pmd_bound_L{n_el}"] = mean_bound(h1, c, grid)
    return {"fig2a": cols}


def figure_2b(cfg: ScenarioConfig, bins, workers=1) -> dict:
    """Histogram densities of the statistic: H0, H1 with IRS, H1 without IRS."""
    series = {
        "pdf_h0": simulate(cfg, Hypothesis.H0, workers).stats,
        "pdf_h1_irs": simulate(cfg.replace(scheme=Scheme.WED), Hypothesis.H1, workers).stats,
        "pdf_h1_noirs": simulate(cfg.replace(scheme=Scheme.NOIRS), Hypothesis.H1, workers).stats,
    }
    lo = min(s.min() for s in series.values())
    hi = max(s.max() for s in series.values())
    edges = np.linspace(lo, hi, int(bins) + 1)
    cols = {"bin_left": edges[:-1], "bin_right": edges[1:], "bin_center": 0.5 * (edges[:-1] + edges[1:])}
    for name, stats in series.items():
        cols[name] = histogram_density(stats, edges)
    return {"fig2b": cols}


def figure_3(cfg: ScenarioConfig, pfa, workers=1) -> dict:
    """ROC of WED with IRS, selection combining, WED without IRS and optimal phases."""
    targets = log_pfa_grid(*pfa[:2], int(pfa[2]))
    variants = {
        "fig3_wed_irs": cfg.replace(scheme=Scheme.WED),
        "fig3_sc": cfg.replace(scheme=Scheme.SC),
        "fig3_wed_noirs": cfg.replace(scheme=Scheme.NOIRS),
        "fig3_optimal": cfg.replace(scheme=Scheme.OPTIMAL, n_blocks=1, nbar=cfg.n_total),
    }
    return {name: roc_at_pfa(c, targets, workers).columns() for name, c in variants.items()}


def figure_4a(cfg: ScenarioConfig, M, calibration="analytic", workers=1) -> dict:
    return {"fig4a": sweep_blocks(cfg, M, calibration=calibration, workers=workers).columns()}


def figure_4b(cfg: ScenarioConfig, nbar, alpha, calibration="analytic", workers=1) -> dict:
    out = {}
    for nb in nbar:
        c = cfg.with_blocks(cfg.n_total // int(nb)) if cfg.n_total % int(nb) == 0 else None
        if c is None or c.nbar != int(nb):
            raise ValueError(f"nbar={nb} does not divide N={cfg.n_total}")
        out[f"fig4b_nbar{int(nb)}"] = sweep_alpha(c, alpha, calibration=calibration, workers=workers).columns()
    return out


BUILDERS = {"2a": figure_2a, "2b": figure_2b, "3": figure_3, "4a": figure_4a, "4b": figure_4b}
