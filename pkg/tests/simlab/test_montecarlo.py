import numpy as np
import pytest

from clustest import KMeansOptions, fit_clusters
from clustest.enum import TestMethod
from clustest.simlab import (DGPSpec, gen_panel, isotonic_deviation, ks_critical_value, ks_uniform_distance,
                             load_experiment, parse_config, run_cell, run_cells, run_power_curve,
                             two_proportion_band)
from clustest.simlab.presets import SMOKE_GRID


def _cell(dgp, test='f', replications=1000, restarts=20, **kwargs):
    return parse_config({'dgp': dgp, 'test': test, 'replications': replications, 'restarts': restarts, **kwargs})


def _means(n, t, means, proportions, **kwargs):
    return {'n': n, 't': t, 'kind': 'cluster_means', 'means': means, 'proportions': proportions, **kwargs}


def test_overfit_centers_stay_near_true_means():
    spec = DGPSpec(n=300, t=1000, kind='cluster_means', means=[0.0, 2.0], proportions=[0.5, 0.5])
    fit = fit_clusters(gen_panel(spec, 0).view(), 3, KMeansOptions(restarts=20))
    distance = np.min(np.abs(fit.means[:, 0][:, None] - np.array([0.0, 2.0])[None, :]), axis=1)
    assert np.all(distance < 0.05)


def test_underfit_centers_stay_apart():
    spec = DGPSpec(n=300, t=250, kind='cluster_means', means=[0.0, 1.0, 2.0], proportions=[1 / 3, 1 / 3, 1 / 3])
    fit = fit_clusters(gen_panel(spec, 0).view(), 2, KMeansOptions(restarts=20))
    assert abs(fit.means[0, 0] - fit.means[1, 0]) > 0.95


@pytest.mark.slow
@pytest.mark.parametrize("d, g, n, t, residuals", [c for c in SMOKE_GRID if c[1] != 'bonf'])
def test_f_test_size(d, g, n, t, residuals):
    result = run_cell(_cell({'n': n, 't': t, 'd': d, 'residuals': residuals}, g_alt=g))
    # reference size of this cell is about 0.076
    upper = 0.10 if (d, g, n, t) == (5, 4, 30, 50) else 0.075
    assert 0.025 <= result.rejection_rate <= upper


@pytest.mark.slow
def test_bonferroni_size():
    result = run_cell(_cell({'n': 150, 't': 250}, test='bonferroni', g_max=5))
    assert result.rejection_rate <= 0.075


@pytest.mark.slow
def test_f_test_p_values_uniform_under_null():
    result = run_cell(_cell({'n': 150, 't': 250}, retain_p_values=True))
    p_values = np.array(result.p_values)
    assert ks_uniform_distance(p_values[~np.isnan(p_values)]) < 0.0515


@pytest.mark.slow
def test_no_split_over_rejects():
    result = run_cell(_cell({'n': 150, 't': 250}, test='no-split', replications=200))
    assert result.rejection_rate >= 0.95


@pytest.mark.slow
def test_power_endpoints_and_monotonicity():
    base = _cell(_means(30, 50, [0.0, 0.0], [0.5, 0.5]))
    results = run_power_curve(base, 'mu2', [round(0.05 * k, 2) for k in range(11)])
    rates = [r.rejection_rate for r in results]
    assert rates[0] <= 0.10
    assert rates[-1] >= 0.95
    assert isotonic_deviation(rates) < 0.05


@pytest.mark.slow
def test_power_large_panel():
    config = _cell(_means(150, 1000, [0.0, 0.1], [0.5, 0.5]))
    assert run_cell(config).rejection_rate >= 0.95


@pytest.mark.slow
def test_power_robust_to_extra_groups():
    # both cells share cell_id, so the two tests see the same panels
    dgp = _means(30, 50, [0.0, 0.2], [0.5, 0.5])
    two = run_cell(_cell(dgp, g_alt=2, cell_id=11))
    five = run_cell(_cell(dgp, g_alt=5, cell_id=11))
    assert -0.02 <= two.rejection_rate - five.rejection_rate <= 0.05


@pytest.mark.slow
@pytest.mark.parametrize("pi3", [0.01, 0.1, 1 / 3])
def test_small_cluster_size(pi3):
    base = _cell(_means(150, 250, [0.0, 0.0, 0.0], [1 / 3, 1 / 3, 1 / 3]), test='small-cluster', g_alt=3,
                 pi_bar=0.1)
    result = run_power_curve(base, 'pi3', [pi3])[0]
    assert 0.025 <= result.rejection_rate <= 0.075


@pytest.mark.slow
def test_param_test_size():
    dgp = {'n': 150, 't': 250, 'kind': 'ar1_clusters', 'phis': [0.5, 0.5], 'proportions': [0.5, 0.5]}
    result = run_cell(_cell(dgp, test='param-ar1'))
    assert 0.03 <= result.rejection_rate <= 0.08


@pytest.mark.slow
@pytest.mark.parametrize("n, upper", [(30, 0.095), (600, 0.08)])
def test_finite_t_size_with_two_periods(n, upper):
    # N=30 has a reference size of about 0.07
    result = run_cell(_cell({'n': n, 't': 2}, test='finite-t'))
    assert result.rejection_rate <= upper


@pytest.mark.slow
def test_hac_size_under_ma_errors():
    dgp = {'n': 150, 't': 250, 'ma_theta': 0.5}
    robust = run_cell(_cell(dgp, test='hac', m_lags=1, replications=500))
    naive = run_cell(_cell(dgp, test='hac', m_lags=0, replications=500))
    assert 0.03 <= robust.rejection_rate <= 0.08
    assert naive.rejection_rate > 0.08


@pytest.mark.slow
def test_hac_p_values_uniform_under_white_noise():
    result = run_cell(_cell({'n': 150, 't': 100}, test='hac', m_lags=2, replications=500, retain_p_values=True))
    p_values = np.array(result.p_values)
    assert ks_uniform_distance(p_values[~np.isnan(p_values)]) < ks_critical_value(result.n_reps)


@pytest.mark.slow
def test_replications_in_separate_streams_agree():
    first = run_cell(_cell({'n': 30, 't': 50}, replications=500, cell_id=0))
    second = run_cell(_cell({'n': 30, 't': 50}, replications=500, cell_id=1))
    assert abs(first.rejection_rate - second.rejection_rate) <= two_proportion_band(500, 500, 0.05)


@pytest.mark.slow
def test_param_test_power():
    dgp = {'n': 150, 't': 250, 'kind': 'ar1_clusters', 'phis': [0.5, 0.9], 'proportions': [0.5, 0.5]}
    assert run_cell(_cell(dgp, test='param-ar1')).rejection_rate >= 0.9


@pytest.mark.slow
def test_table1_smoke_preset():
    for result in run_cells(load_experiment('table1_smoke').cells):
        lower = 0.0 if result.config.method == TestMethod.BONFERRONI else 0.02
        # 200 replications of a cell whose reference size is about 0.076
        upper = 0.12 if result.config.name.startswith('d=5 G=4') else 0.09
        assert lower <= result.rejection_rate <= upper, result.config.name


@pytest.mark.slow
def test_no_split_preset():
    for result in run_cells(load_experiment('tableSA1_smoke').cells):
        assert result.rejection_rate >= 0.95, result.config.name
