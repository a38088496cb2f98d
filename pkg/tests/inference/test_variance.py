import numpy as np
import pytest

from clustest import Panel
from clustest.errors import EmptyGroupInP, InsufficientPSample, SingularVariance
from clustest.inference import long_run_variance, omega_group_residual, omega_hac, omega_iid, omega_param


def test_omega_iid_worked_example(worked_panel):
    omega = omega_iid(worked_panel.view([2, 3]), np.array([0, 0, 1, 1]), [0.5, 0.5])
    assert omega.n_groups == 2
    assert np.allclose(omega.assembled, np.eye(2))


def test_omega_iid_constant_panel():
    panel = Panel(np.array([[0.0, 0.0], [0.0, 0.0], [5.0, 5.0], [5.0, 5.0]]))
    with pytest.raises(SingularVariance):
        omega_iid(panel.view(), np.array([0, 0, 1, 1]), [0.5, 0.5])


def test_omega_iid_errors(worked_panel):
    with pytest.raises(InsufficientPSample):
        omega_iid(worked_panel.view([3]), np.array([0, 0, 1, 1]), [0.5, 0.5])
    with pytest.raises(EmptyGroupInP):
        omega_iid(worked_panel.view([2, 3]), np.array([0, 0, 0, 0]), [0.5, 0.5])


def test_omega_iid_restricted_to_leading_groups(worked_panel):
    omega = omega_iid(worked_panel.view([2, 3]), np.array([0, 1, 1, 2]), [0.25, 0.5])
    assert omega.n_groups == 2


def test_omega_group_residual_worked_example(two_period_panel):
    omega = omega_group_residual(
        two_period_panel.view([1]), np.array([0, 0, 1, 1]), [0.5, 0.5], np.array([[0.0], [10.0]]))
    assert np.allclose(omega.assembled, 2.0 * np.eye(2))


def test_omega_group_residual_perfect_fit():
    panel = Panel(np.array([[0.0, 0.0], [0.0, 0.0], [10.0, 10.0], [10.0, 10.0]]))
    with pytest.raises(SingularVariance):
        omega_group_residual(panel.view([1]), np.array([0, 0, 1, 1]), [0.5, 0.5], np.array([[0.0], [10.0]]))


def test_omega_group_residual_allows_one_zero_block():
    panel = Panel(np.array([[0.0, 0.0], [0.1, 1.0], [0.2, 2.0], [10.0, 10.0]]))
    omega = omega_group_residual(panel.view([1]), np.array([0, 0, 0, 1]), [0.75, 0.25], np.array([[1.0], [10.0]]))
    assert omega.blocks[0][0, 0] == pytest.approx(8.0 / 9.0)
    assert omega.blocks[1][0, 0] == 0.0


def test_long_run_variance():
    rng = np.random.default_rng(0)
    y = rng.standard_normal(50)
    assert long_run_variance(y, 0) == pytest.approx(np.var(y))
    e = y - y.mean()
    expected = np.var(y) + 2.0 * (1.0 - 1.0 / 50) * float(e[:-1] @ e[1:]) / 50
    assert long_run_variance(y, 1) == pytest.approx(expected)


def test_omega_hac_without_lags_equals_iid(random_panel):
    view = random_panel(n=12, t=8, seed=4).view([4, 5, 6, 7])
    assignments = np.repeat([0, 1], 6)
    hac = omega_hac(view, assignments, [0.5, 0.5], 0)
    iid = omega_iid(view, assignments, [0.5, 0.5])
    assert np.allclose(hac.assembled, iid.assembled)


def test_omega_hac_needs_more_periods_than_lags(worked_panel):
    with pytest.raises(InsufficientPSample):
        omega_hac(worked_panel.view([2, 3]), np.array([0, 0, 1, 1]), [0.5, 0.5], 2)


def test_omega_param():
    variances = np.ones((4, 1, 1))
    omega = omega_param(variances, np.array([0, 0, 1, 1]), [0.5, 0.5])
    assert np.allclose(omega.assembled, 2.0 * np.eye(2))
