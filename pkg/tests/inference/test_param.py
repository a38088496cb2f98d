import numpy as np
import pytest

from clustest import KMeansOptions, Panel, TestMethod
from clustest.errors import DegenerateRegressor, DimensionMismatch, InvalidSplit, PanelTooShort
from clustest.inference import ParamPanel, ar1_estimate, ar1_param_panel, param_test


def test_ar1_estimate_on_a_line():
    phi0, phi1, v_hat = ar1_estimate([1.0, 2.0, 3.0, 4.0, 5.0])
    assert phi0 == pytest.approx(1.0)
    assert phi1 == pytest.approx(1.0)
    assert v_hat == pytest.approx(0.0, abs=1e-20)


def test_ar1_estimate_matches_least_squares():
    rng = np.random.default_rng(1)
    y = rng.standard_normal(60).cumsum() * 0.1 + rng.standard_normal(60)
    phi0, phi1, v_hat = ar1_estimate(y)
    slope, intercept = np.polyfit(y[:-1], y[1:], 1)
    assert phi1 == pytest.approx(slope)
    assert phi0 == pytest.approx(intercept)
    resid = y[1:] - intercept - slope * y[:-1]
    sxx = np.sum((y[:-1] - y[:-1].mean()) ** 2)
    assert v_hat == pytest.approx(59 * (resid @ resid / 57) / sxx)
    assert ar1_estimate(y, robust=True)[2] > 0.0


def test_ar1_estimate_white_noise():
    y = np.random.default_rng(2).standard_normal(1000)
    assert abs(ar1_estimate(y)[1]) < 0.1


def test_ar1_estimate_errors():
    with pytest.raises(PanelTooShort):
        ar1_estimate([1.0, 2.0])
    with pytest.raises(DegenerateRegressor):
        ar1_estimate([3.0, 3.0, 3.0, 3.0])


def test_ar1_param_panel_shapes():
    rng = np.random.default_rng(0)
    panel = Panel(rng.standard_normal((6, 20)))
    params = ar1_param_panel(panel)
    assert (params.n_units, params.n_params) == (6, 1)
    assert params.p_periods == 9
    assert params.variances_p.shape == (6, 1, 1)


def test_ar1_param_panel_errors():
    rng = np.random.default_rng(0)
    with pytest.raises(InvalidSplit):
        ar1_param_panel(Panel(rng.standard_normal((4, 20))), 'interleaved')
    with pytest.raises(DimensionMismatch):
        ar1_param_panel(Panel(rng.standard_normal((4, 20, 2))))


def test_param_panel_shape_check():
    with pytest.raises(DimensionMismatch):
        ParamPanel(np.zeros(4), np.zeros(3), np.ones(3), 10)


def test_param_test_worked_example():
    estimates_r = np.repeat([0.0, 1.0], 50)
    estimates_p = np.repeat([0.3, 0.8], 50)
    result = param_test(ParamPanel(estimates_r, estimates_p, np.ones(100), 250), 2, KMeansOptions(restarts=5))
    # Omega_g = (1/100) * 50 / 0.25 = 2, so F = 100 * 250 * 0.25 / 4
    assert result.statistic == pytest.approx(1562.5)
    assert result.df == 1
    assert result.method == TestMethod.PARAM_TEST
    assert np.allclose(result.diagnostics.means_p[:, 0], [0.3, 0.8])


def test_param_test_identical_estimates():
    estimates_r = np.repeat([0.0, 1.0], 5)
    result = param_test(ParamPanel(estimates_r, np.full(10, 0.5), np.ones(10), 50), 2, KMeansOptions(restarts=5))
    assert result.statistic == pytest.approx(0.0, abs=1e-12)
    assert result.p_value == pytest.approx(1.0)


def test_param_test_separates_ar1_groups():
    points = np.array([0.48, 0.93, 0.52, 0.5, 0.88, 0.47, 0.91, 0.53])
    result = param_test(ParamPanel(points, points, np.ones(8), 100), 2, KMeansOptions(restarts=10))
    assert result.diagnostics.assignments.tolist() == (points > 0.7).astype(int).tolist()
