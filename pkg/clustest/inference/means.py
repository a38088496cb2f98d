"""Split-sample tests on cluster means.

Every test follows the same pipeline: split the periods into an assignment sample ``R`` and a testing
sample ``P``, fit the clusters on ``R``, compute the group means on ``P`` with the assignments held fixed,
and compare the group means with a variance estimated on ``P``. Reusing the assignments on fresh periods
removes the over-fitting that makes a same-sample comparison reject almost surely.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..enum import SplitMode, TestMethod
from ..errors import DimensionMismatch, InsufficientPSample, NeedTwoGroups, SingularVariance, TooFewLargeClusters
from ..kmeans import ClusterFit, KMeansOptions, fit_clusters, group_means_on
from ..panel import Panel, PanelView, SplitArg, SplitSpec, make_split
from .contrast import contrast_A, contrast_B
from .result import Diagnostics, TestResult, chi2_result, normal_result
from .variance import (VarianceEstimate, contrast_quadratic_form, omega_group_residual, omega_hac,
                       omega_iid)

logger = logging.getLogger(__name__)

NO_SPLIT_WARNING = (
    "assignments and means are estimated on the same periods; this test over-rejects "
    "and is not a valid test of the single-cluster null")


@dataclass(frozen=True)
class _SplitFit:
    split: Optional[SplitSpec]
    view_r: PanelView
    view_p: PanelView
    fit: ClusterFit
    means_p: np.ndarray

    @property
    def n_obs(self) -> int:
        return self.view_p.n_units * self.view_p.n_periods


def _require_groups(g_alt: int) -> None:
    if g_alt < 2:
        raise NeedTwoGroups(f"the alternative needs at least two groups, got {g_alt}")


def _require_scalar(panel: Panel, what: str) -> None:
    if panel.dim != 1:
        raise DimensionMismatch(f"{what} needs d = 1, got d = {panel.dim}")


def _split_and_fit(panel: Panel, split: SplitArg, g_alt: int, opts: Optional[KMeansOptions],
                   gap: int = 0) -> _SplitFit:
    spec = make_split(panel.n_periods, split, gap)
    view_r, view_p = panel.view(spec.r_indices), panel.view(spec.p_indices)
    fit = fit_clusters(view_r, g_alt, opts)
    means_p = group_means_on(view_p, fit.assignments, g_alt)
    logger.debug(f"G={g_alt}: R={len(spec.r_indices)} periods, P={len(spec.p_indices)} periods, "
                 f"proportions {np.round(fit.proportions, 3).tolist()}")
    return _SplitFit(spec, view_r, view_p, fit, means_p)


def _diagnostics(stage: _SplitFit, omega: VarianceEstimate, contrast: Optional[np.ndarray]) -> Diagnostics:
    return Diagnostics(
        assignments=stage.fit.assignments, proportions=stage.fit.proportions, means_r=stage.fit.means,
        means_p=stage.means_p, omega=omega.assembled, contrast=contrast, split=stage.split)


def _wald(stage: _SplitFit, omega: VarianceEstimate, method: TestMethod, g_alt: int,
          warning: Optional[str] = None) -> TestResult:
    d = stage.view_p.dim
    contrast = contrast_A(d, g_alt)
    statistic = stage.n_obs * contrast_quadratic_form(contrast, stage.means_p, omega)
    return chi2_result(statistic, d * (g_alt - 1), method, g_alt, g_alt,
                       _diagnostics(stage, omega, contrast), warning)


def _two_group_t(stage: _SplitFit, omega: VarianceEstimate, method: TestMethod) -> TestResult:
    omega_sq = float(omega.blocks[0][0, 0] + omega.blocks[1][0, 0])
    if not omega_sq > 0.0:
        raise SingularVariance("the variance of the difference of the group means is zero")
    diff = float(stage.means_p[0, 0] - stage.means_p[1, 0])
    statistic = np.sqrt(stage.n_obs) * diff / np.sqrt(omega_sq)
    return normal_result(statistic, method, 2, _diagnostics(stage, omega, contrast_A(1, 2)))


def f_test(panel: Panel, split: SplitArg = SplitMode.HALVES, g_alt: int = 2,
           opts: Optional[KMeansOptions] = None) -> TestResult:
    """Test the single-cluster null against ``g_alt`` clusters.

    Clusters are fit on ``R``; the statistic
    ``F = N P mu' A' (A Omega A')^{-1} A mu`` compares the group means ``mu`` on ``P`` with
    ``Omega`` from :func:`omega_iid` and is asymptotically chi-square with ``d (g_alt - 1)`` degrees of freedom.

    Args:
        panel:
            The panel to test.
        split:
            How to split the periods into ``R`` and ``P``.
        g_alt:
            Number of clusters under the alternative, at least 2.
        opts:
            K-means options. Defaults to ``KMeansOptions()``.

    Returns:
        A ``TestResult`` with ``method == TestMethod.F_TEST``.

    Examples:
        >>> import numpy as np
        >>> from clustest import Panel
        >>> from clustest.inference import f_test
        >>> y = np.array([[1, 3, 1, 3], [2, 2, 2, 2], [5, 7, 5, 7], [6, 6, 6, 6]])
        >>> round(f_test(Panel(y), 'halves', 2).statistic, 6)
        64.0
    """
    _require_groups(g_alt)
    stage = _split_and_fit(panel, split, g_alt, opts)
    omega = omega_iid(stage.view_p, stage.fit.assignments, stage.fit.proportions)
    return _wald(stage, omega, TestMethod.F_TEST, g_alt)


def t_test_two_groups(panel: Panel, split: SplitArg = SplitMode.HALVES,
                      opts: Optional[KMeansOptions] = None) -> TestResult:
    """Two-group t-test ``t = sqrt(N P) (mu_0 - mu_1) / omega`` for ``d = 1``.

    ``omega^2`` is the sum of the two blocks of :func:`omega_iid`, so ``t^2`` equals the
    statistic of :func:`f_test` with ``g_alt = 2``.
    """
    _require_scalar(panel, "the two-group t-test")
    stage = _split_and_fit(panel, split, 2, opts)
    omega = omega_iid(stage.view_p, stage.fit.assignments, stage.fit.proportions)
    return _two_group_t(stage, omega, TestMethod.T_TEST)


def large_group_count(proportions: np.ndarray, pi_bar: float) -> int:
    """Number of groups whose proportion is at least ``pi_bar``, for proportions in descending order."""
    proportions = np.asarray(proportions)
    assert np.all(np.diff(proportions) <= 0), "proportions must be in descending order"
    return int(np.sum(proportions >= pi_bar))


def small_cluster_test(panel: Panel, split: SplitArg = SplitMode.HALVES, g_alt: int = 2,
                       pi_bar: Optional[float] = None, opts: Optional[KMeansOptions] = None) -> TestResult:
    """Test that drops clusters whose estimated proportion falls below ``pi_bar``.

    Groups come out of the fit in descending order of proportion. Only the ``G_hat`` groups with
    proportion at least ``pi_bar`` enter the contrast ``B_{G_hat, G}``, and the statistic is compared to
    a chi-square with ``G_hat - 1`` degrees of freedom. When every cluster is large the result equals
    :func:`f_test`.

    Args:
        pi_bar:
            Proportion threshold. Defaults to ``opts.min_proportion``.

    Raises:
        DimensionMismatch: if ``d != 1``.
        TooFewLargeClusters: if fewer than two clusters reach ``pi_bar``.
    """
    _require_scalar(panel, "the small-cluster test")
    _require_groups(g_alt)
    opts = opts or KMeansOptions()
    pi_bar = opts.min_proportion if pi_bar is None else pi_bar
    spec = make_split(panel.n_periods, split)
    view_r, view_p = panel.view(spec.r_indices), panel.view(spec.p_indices)
    fit = fit_clusters(view_r, g_alt, opts)
    g_hat = large_group_count(fit.proportions, pi_bar)
    if g_hat < 2:
        raise TooFewLargeClusters(
            f"only {g_hat} of {g_alt} clusters have proportion >= {pi_bar}: {np.round(fit.proportions, 3).tolist()}")
    means_p = group_means_on(view_p, fit.assignments, g_hat)
    omega = omega_iid(view_p, fit.assignments, fit.proportions[:g_hat])
    stage = _SplitFit(spec, view_r, view_p, fit, means_p)
    # columns of B_{G_hat, G} past G_hat are zero
    statistic = stage.n_obs * contrast_quadratic_form(contrast_A(1, g_hat), means_p, omega)
    if g_hat < g_alt:
        logger.debug(f"small-cluster test keeps {g_hat} of {g_alt} groups at pi_bar={pi_bar}")
    return chi2_result(statistic, g_hat - 1, TestMethod.SMALL_CLUSTER, g_alt, g_hat,
                       _diagnostics(stage, omega, contrast_B(g_hat, g_alt)))


def finite_t_test(panel: Panel, split: SplitArg = SplitMode.HALVES,
                  opts: Optional[KMeansOptions] = None) -> TestResult:
    """Two-group t-test valid for a fixed, possibly very small, number of periods.

    Residuals are deviations from the group means on ``P`` summed within each unit
    (:func:`omega_group_residual`), so a testing sample of one period is allowed and the errors
    may be arbitrarily dependent across the testing periods.

    Examples:
        >>> import numpy as np
        >>> from clustest import Panel
        >>> from clustest.inference import finite_t_test
        >>> y = np.array([[0, -1], [0, 1], [10, 9], [10, 11]])
        >>> round(finite_t_test(Panel(y)).statistic, 6)
        -10.0
    """
    _require_scalar(panel, "the finite-T test")
    stage = _split_and_fit(panel, split, 2, opts)
    omega = omega_group_residual(stage.view_p, stage.fit.assignments, stage.fit.proportions, stage.means_p)
    return _two_group_t(stage, omega, TestMethod.FINITE_T)


def finite_t_wald(panel: Panel, split: SplitArg = SplitMode.HALVES, g_alt: int = 2,
                  opts: Optional[KMeansOptions] = None) -> TestResult:
    """Chi-square form of :func:`finite_t_test` for any ``d`` and ``g_alt``.

    For ``d = 1`` and ``g_alt = 2`` the statistic is the square of the finite-T t statistic.
    """
    _require_groups(g_alt)
    stage = _split_and_fit(panel, split, g_alt, opts)
    omega = omega_group_residual(stage.view_p, stage.fit.assignments, stage.fit.proportions, stage.means_p)
    return _wald(stage, omega, TestMethod.FINITE_T, g_alt)


def hac_test(panel: Panel, m_lags: int = 0, opts: Optional[KMeansOptions] = None) -> TestResult:
    """Two-group t-test robust to ``M``-dependent errors.

    The periods are split into halves with the last ``m_lags`` periods of ``R`` dropped, so the
    assignment and testing samples are independent under ``M``-dependence. ``omega^2`` uses per-unit
    autocovariances up to lag ``m_lags`` with weights ``1 - k/P`` (:func:`omega_hac`).
    With ``m_lags = 0`` the statistic equals :func:`t_test_two_groups`.

    Raises:
        InsufficientPSample: if the testing sample has at most ``m_lags`` periods.
        PanelTooShort: if dropping ``m_lags`` periods leaves ``R`` empty (``floor(T/2) <= m_lags``).
    """
    _require_scalar(panel, "the HAC test")
    if m_lags < 0:
        raise ValueError("m_lags must be non-negative")
    p_periods = panel.n_periods - panel.n_periods // 2
    if p_periods <= m_lags:
        raise InsufficientPSample(f"{p_periods} testing periods cannot carry {m_lags} lags")
    stage = _split_and_fit(panel, SplitMode.HALVES, 2, opts, gap=m_lags)
    omega = omega_hac(stage.view_p, stage.fit.assignments, stage.fit.proportions, m_lags)
    return _two_group_t(stage, omega, TestMethod.HAC)


def no_split_test(panel: Panel, g_alt: int = 2, opts: Optional[KMeansOptions] = None) -> TestResult:
    """The F statistic computed with ``R = P =`` all periods.

    Fitting and testing on the same periods over-rejects almost surely, even when every unit has the
    same mean. The result carries a warning and is only meant as a negative control.
    """
    _require_groups(g_alt)
    view = panel.view()
    fit = fit_clusters(view, g_alt, opts)
    means = group_means_on(view, fit.assignments, g_alt)
    stage = _SplitFit(None, view, view, fit, means)
    omega = omega_iid(view, fit.assignments, fit.proportions)
    return _wald(stage, omega, TestMethod.NO_SPLIT, g_alt, warning=NO_SPLIT_WARNING)
