import numpy as np
import pytest

from irs_sense.analytic import threshold_for_pfa
from irs_sense.detect import Hypothesis, Scheme
from irs_sense.errors import InvalidInputError
from irs_sense.mc import (ScenarioConfig, empirical_thresholds, exceed_fraction, pdf_histogram,
                          roc_at_pfa, roc_sweep, run_trial, simulate, sweep_alpha, sweep_blocks)

SMALL = ScenarioConfig(channel_realizations=40, frames_per_realization=50, master_seed=7)


def test_config_defaults_and_units():
    cfg = ScenarioConfig()
    assert cfg.n_total == 10_000
    assert cfg.noise_mw == pytest.approx(1e-7)
    assert cfg.pt_mw == pytest.approx(10 ** 0.6)
    assert cfg.rho == pytest.approx(10 ** 0.6 / 1e-7)
    assert cfg.geometry(0.3).pu_distance == 80.0


@pytest.mark.parametrize("kw", [dict(alpha=1.0), dict(n_blocks=0), dict(channel_realizations=0),
                                dict(energy_sampler="fast"), dict(scheme="optimal"), dict(n_elements=-1)])
def test_config_validation(kw):
    with pytest.raises((InvalidInputError, ValueError)):
        ScenarioConfig(**kw)


def test_run_trial_deterministic():
    a = run_trial(SMALL, 3, 7, "H1", 1.023)
    b = run_trial(SMALL, 3, 7, "H1", 1.023)
    assert a == b
    assert a.statistic == simulate(SMALL, "H1").stats[3, 7]


def test_run_trial_index_checks():
    with pytest.raises(InvalidInputError):
        run_trial(SMALL, 40, 0, "H0", 1.0)
    with pytest.raises(InvalidInputError):
        run_trial(SMALL, 0, 50, "H0", 1.0)


def test_worker_count_does_not_change_results():
    a = simulate(SMALL, "H1", workers=1)
    b = simulate(SMALL, "H1", workers=2)
    np.testing.assert_array_equal(a.stats, b.stats)
    np.testing.assert_array_equal(a.h_ps_abs2, b.h_ps_abs2)


def test_seed_changes_results():
    a = simulate(SMALL, "H0").stats
    b = simulate(SMALL.replace(master_seed=8), "H0").stats
    assert not np.array_equal(a, b)


def test_false_alarm_rate_at_closed_form_threshold():
    cfg = ScenarioConfig(channel_realizations=1000, frames_per_realization=100)
    lam = threshold_for_pfa(0.1, cfg.analytic_params())
    rate = exceed_fraction(simulate(cfg, "H0").stats, [lam])[0]
    assert rate == pytest.approx(0.1, abs=0.01)


def test_irs_lowers_missed_detection():
    cfg = ScenarioConfig(channel_realizations=200, frames_per_realization=50)
    pmd = [1 - exceed_fraction(simulate(cfg.replace(n_elements=L), "H1").stats, [1.023])[0] for L in (0, 1024)]
    assert pmd[1] < pmd[0]


def test_noirs_scheme_equals_zero_elements():
    a = simulate(SMALL.replace(scheme=Scheme.NOIRS), "H1").stats
    b = simulate(SMALL.replace(n_elements=0), "H1").stats
    np.testing.assert_array_equal(a, b)


def test_samples_and_chi2_agree_in_law():
    cfg = ScenarioConfig(n_elements=64, n_blocks=10, nbar=20, channel_realizations=200,
                         frames_per_realization=50, pt_dbm=20.0)
    a = simulate(cfg, "H1").stats
    b = simulate(cfg.replace(energy_sampler="samples"), "H1").stats
    assert a.mean() == pytest.approx(b.mean(), rel=0.01)


def test_roc_columns_and_monotone():
    roc = roc_sweep(SMALL, np.linspace(0.98, 1.06, 30))
    assert np.all(np.diff(roc.pfa_emp) <= 0)
    assert np.all(np.diff(roc.pmd_emp) >= 0)
    for arr in (roc.pfa_emp, roc.pmd_emp, roc.pfa_analytic, roc.pmd_bound):
        assert np.all((arr >= 0) & (arr <= 1))
    assert roc.n_h0 == roc.n_h1 == 2000
    np.testing.assert_allclose(roc.pfa_se, np.sqrt(roc.pfa_emp * (1 - roc.pfa_emp) / 2000))
    with pytest.raises(InvalidInputError):
        roc_sweep(SMALL, [])


def test_empirical_thresholds_hit_target():
    stats = np.random.default_rng(0).standard_normal(10_000)
    lam = empirical_thresholds(stats, [0.01, 0.1, 0.5])
    np.testing.assert_allclose(exceed_fraction(stats, lam), [0.01, 0.1, 0.5])


def test_roc_at_pfa_for_sc_and_optimal():
    targets = [0.05, 0.1, 0.3]
    sc = roc_at_pfa(SMALL.replace(scheme=Scheme.SC, alpha=0.2), targets)
    assert sc.pfa_analytic is None
    np.testing.assert_allclose(sc.pfa_emp, targets, atol=1e-3)
    opt_cfg = SMALL.replace(scheme=Scheme.OPTIMAL, n_blocks=1, nbar=10_000)
    opt = roc_at_pfa(opt_cfg, targets)
    assert np.all(opt.pmd_emp <= sc.pmd_emp)


def test_single_block_collapses_to_energy_detection():
    cfg = ScenarioConfig(n_blocks=1, nbar=10_000, alpha=0.5, channel_realizations=5, frames_per_realization=20)
    from irs_sense.frame import synthesize_block_energies
    from irs_sense.rng import Purpose, substream
    stats = simulate(cfg, "H0").stats
    T = synthesize_block_energies("H0", None, cfg.layout, cfg.pt_mw, cfg.noise_mw,
                                  substream(cfg.master_seed, 2, Purpose.NOISE, 0), n_frames=20, method="chi2")
    np.testing.assert_allclose(stats[2], T[:, 0], rtol=1e-15)


def test_sweep_blocks_rejects_indivisible():
    with pytest.raises(InvalidInputError):
        sweep_blocks(SMALL, [3])


def test_sweeps_shape():
    r = sweep_blocks(SMALL.replace(alpha=0.5), [10, 100], calibration="empirical")
    assert list(r.values) == [10, 100]
    np.testing.assert_allclose(r.pfa_emp, 0.1, atol=1e-3)
    a = sweep_alpha(SMALL, [0.0, 0.5], calibration="analytic")
    assert a.columns()["alpha"].tolist() == [0.0, 0.5]
    with pytest.raises(InvalidInputError):
        sweep_alpha(SMALL, [0.1], calibration="magic")


def test_pdf_histogram():
    edges, dens = pdf_histogram(SMALL, "H0", bins=40)
    assert np.sum(dens * np.diff(edges)) == pytest.approx(1.0, abs=1e-9)
    centers = 0.5 * (edges[1:] + edges[:-1])
    mean = np.sum(centers * dens * np.diff(edges))
    assert mean == pytest.approx(1 + 1 / 100, abs=2e-3)


def test_pdf_shifts_right_with_irs():
    cfg = SMALL.replace(channel_realizations=100)
    means = []
    for scheme in (Scheme.WED, Scheme.NOIRS):
        edges, dens = pdf_histogram(cfg.replace(scheme=scheme), "H1", bins=60)
        means.append(np.sum(0.5 * (edges[1:] + edges[:-1]) * dens * np.diff(edges)))
    assert means[0] > means[1]


def test_pdf_histogram_bad_bins():
    with pytest.raises(InvalidInputError):
        pdf_histogram(SMALL, "H0", bins=[1.0, 1.0])
