import numpy as np
import pytest

from clustest.simlab import DGPSpec, gen_panel, group_counts, true_assignments


def test_group_counts():
    assert group_counts(30, [0.5, 0.5]).tolist() == [15, 15]
    assert group_counts(10, [1 / 3, 1 / 3, 1 / 3]).tolist() == [4, 3, 3]
    assert group_counts(150, [0.45, 0.45, 0.1]).sum() == 150


def test_true_assignments_blocks():
    spec = DGPSpec(n=30, t=4, kind='cluster_means', means=[0.0, 0.5], proportions=[0.5, 0.5])
    labels = true_assignments(spec)
    assert labels.tolist() == [0] * 15 + [1] * 15
    assert np.all(true_assignments(DGPSpec(n=5, t=4)) == 0)


def test_gen_panel_is_deterministic():
    spec = DGPSpec(n=20, t=6, d=2, residuals='heterogeneous', master_seed=3)
    a = gen_panel(spec, rep_index=4, cell_id=1)
    b = gen_panel(spec, rep_index=4, cell_id=1)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, gen_panel(spec, rep_index=5, cell_id=1).values)
    assert not np.array_equal(a.values, gen_panel(spec, rep_index=4, cell_id=1, attempt=1).values)
    assert a.values.shape == (20, 6, 2)


def test_null_panel_is_centered():
    spec = DGPSpec(n=100, t=50)
    panel = gen_panel(spec, 0)
    assert abs(panel.values.mean()) < 4.0 / np.sqrt(100 * 50)


def test_cluster_means_panel():
    spec = DGPSpec(n=30, t=400, kind='cluster_means', means=[0.0, 5.0], proportions=[0.5, 0.5])
    unit_means = gen_panel(spec, 0).values.mean(axis=1)[:, 0]
    assert np.all(np.abs(unit_means[:15]) < 0.5)
    assert np.all(np.abs(unit_means[15:] - 5.0) < 0.5)


def test_ar1_panel_persistence():
    spec = DGPSpec(n=40, t=400, kind='ar1_clusters', phis=[0.0, 0.9], proportions=[0.5, 0.5])
    y = gen_panel(spec, 0).values[:, :, 0]
    lag1 = np.array([np.corrcoef(row[:-1], row[1:])[0, 1] for row in y])
    assert lag1[:20].mean() == pytest.approx(0.0, abs=0.05)
    assert lag1[20:].mean() == pytest.approx(0.9, abs=0.05)


def test_ma_residuals_are_autocorrelated():
    spec = DGPSpec(n=50, t=400, ma_theta=0.5)
    y = gen_panel(spec, 0).values[:, :, 0]
    lag1 = np.mean([np.corrcoef(row[:-1], row[1:])[0, 1] for row in y])
    # theta / (1 + theta^2)
    assert lag1 == pytest.approx(0.4, abs=0.05)
