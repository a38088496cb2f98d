"""Estimators of the variance of the testing-sample group means."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import linalg

from ..errors import EmptyGroupInP, InsufficientPSample, SingularContrastVariance, SingularVariance
from ..panel import PanelView


@dataclass(frozen=True)
class VarianceEstimate:
    """Block-diagonal variance ``Omega = diag(Omega_0, ..., Omega_{G-1})`` of the stacked group means.

    Args:
        blocks:
            One symmetric ``d x d`` block per group.
    """
    blocks: tuple[np.ndarray, ...]

    @property
    def n_groups(self) -> int:
        return len(self.blocks)

    @property
    def dim(self) -> int:
        return self.blocks[0].shape[0]

    @property
    def assembled(self) -> np.ndarray:
        """The ``dG x dG`` block-diagonal matrix."""
        return linalg.block_diag(*self.blocks)


def _group_members(assignments: np.ndarray, n_groups: int) -> list[np.ndarray]:
    members = [np.flatnonzero(assignments == g) for g in range(n_groups)]
    empty = [g for g, m in enumerate(members) if len(m) == 0]
    if empty:
        raise EmptyGroupInP(f"groups {empty} have no member")
    return members


def _symmetric(block: np.ndarray) -> np.ndarray:
    return (block + block.T) / 2.0


def _nonzero(blocks: list[np.ndarray]) -> VarianceEstimate:
    # single zero blocks pass, a singleton group at P = 1 has one
    if not any(np.any(b) for b in blocks):
        raise SingularVariance("every variance block is zero")
    return VarianceEstimate(tuple(blocks))


def omega_iid(view_p: PanelView, assignments: np.ndarray, proportions: Sequence[float] | np.ndarray) -> VarianceEstimate:
    """Variance of the group means for errors independent over time.

    ``Omega_g = (1/(N P)) sum_{t in P} sum_{i in g} (Y_it - Ybar_iP)(Y_it - Ybar_iP)' / pi_g^2``,
    where the unit means ``Ybar_iP`` are taken over the testing sample and ``pi_g`` are the
    proportions estimated on the assignment sample. One block is built per entry of ``proportions``,
    so passing the first ``G'`` proportions restricts the estimate to the first ``G'`` groups.

    Raises:
        InsufficientPSample: if the testing sample has fewer than two periods.
        EmptyGroupInP: if a group has no member.
        SingularVariance: if every block is zero. A zero block alone is left to the contrast variance.
    """
    if view_p.n_periods < 2:
        raise InsufficientPSample("per-unit demeaning needs at least two testing periods")
    assignments = np.asarray(assignments)
    proportions = np.asarray(proportions, dtype=np.float64)
    values = view_p.values
    resid = values - values.mean(axis=1, keepdims=True)
    scale = view_p.n_units * view_p.n_periods
    blocks = []
    for g, members in enumerate(_group_members(assignments, len(proportions))):
        e = resid[members].reshape(-1, view_p.dim)
        blocks.append(_symmetric(e.T @ e / (scale * proportions[g] ** 2)))
    return _nonzero(blocks)


def omega_group_residual(
        view_p: PanelView, assignments: np.ndarray, proportions: Sequence[float] | np.ndarray,
        group_means: np.ndarray) -> VarianceEstimate:
    """Variance of the group means that stays valid for a fixed number of testing periods.

    Residuals are taken from the group means rather than the unit means and summed within each unit
    before the outer product, so any dependence across the testing periods is allowed and a single
    testing period suffices:
    ``Omega_g = (1/(N P)) sum_{i in g} (sum_t e_it)(sum_t e_it)' / pi_g^2`` with ``e_it = Y_it - mu_g``.
    """
    assignments = np.asarray(assignments)
    proportions = np.asarray(proportions, dtype=np.float64)
    group_means = np.asarray(group_means, dtype=np.float64)
    values = view_p.values
    scale = view_p.n_units * view_p.n_periods
    blocks = []
    for g, members in enumerate(_group_members(assignments, len(proportions))):
        summed = (values[members] - group_means[g]).sum(axis=1)
        blocks.append(_symmetric(summed.T @ summed / (scale * proportions[g] ** 2)))
    return _nonzero(blocks)


def long_run_variance(series: np.ndarray, m_lags: int) -> float:
    """Truncated long-run variance ``psi_0 + 2 sum_{k=1}^{M} (1 - k/P) psi_k`` of a demeaned series.

    ``psi_k = (1/P) sum_t (y_t - ybar)(y_{t+k} - ybar)`` where ``P`` is the series length.
    """
    y = np.asarray(series, dtype=np.float64)
    e = y - y.mean()
    p = len(e)
    total = float(e @ e) / p
    for k in range(1, m_lags + 1):
        total += 2.0 * (1.0 - k / p) * float(e[:-k] @ e[k:]) / p
    return total


def omega_hac(
        view_p: PanelView, assignments: np.ndarray, proportions: Sequence[float] | np.ndarray,
        m_lags: int) -> VarianceEstimate:
    """Variance of the group means for ``M``-dependent errors (``d = 1``).

    ``Omega_g = (1/N) sum_{i in g} lrv_i / pi_g^2`` with the per-unit truncated long-run variance
    ``lrv_i`` from :func:`long_run_variance`. With ``m_lags = 0`` this equals :func:`omega_iid`.

    Raises:
        InsufficientPSample: if the testing sample has at most ``m_lags`` periods.
    """
    if view_p.n_periods <= m_lags:
        raise InsufficientPSample(f"{view_p.n_periods} testing periods cannot carry {m_lags} lags")
    if view_p.n_periods < 2:
        raise InsufficientPSample("per-unit demeaning needs at least two testing periods")
    assignments = np.asarray(assignments)
    proportions = np.asarray(proportions, dtype=np.float64)
    values = view_p.values[:, :, 0]
    lrv = np.array([long_run_variance(row, m_lags) for row in values])
    blocks = []
    for g, members in enumerate(_group_members(assignments, len(proportions))):
        total = float(lrv[members].sum()) / (view_p.n_units * proportions[g] ** 2)
        blocks.append(np.array([[total]]))
    return _nonzero(blocks)


def omega_param(
        variances: np.ndarray, assignments: np.ndarray, proportions: Sequence[float] | np.ndarray) -> VarianceEstimate:
    """Variance of clustered parameter estimates, ``Omega_g = (1/N) sum_{i in g} V_i / pi_g^2``.

    Args:
        variances:
            Per-unit variances ``V_i`` of shape ``(N, b, b)``, each the variance of the
            root-``P``-scaled estimator.
    """
    variances = np.asarray(variances, dtype=np.float64)
    assignments = np.asarray(assignments)
    proportions = np.asarray(proportions, dtype=np.float64)
    n = variances.shape[0]
    blocks = []
    for g, members in enumerate(_group_members(assignments, len(proportions))):
        block = variances[members].sum(axis=0) / (n * proportions[g] ** 2)
        blocks.append(_symmetric(block))
    return VarianceEstimate(tuple(blocks))


def contrast_quadratic_form(contrast: np.ndarray, means: np.ndarray, omega: VarianceEstimate) -> float:
    """Return ``(C mu)' (C Omega C')^{-1} (C mu)`` for the stacked group means ``mu``.

    ``C Omega C'`` is factorized by Cholesky. It must be positive definite with the ratio of its smallest
    to largest eigenvalue above ``1e-12``.

    Raises:
        SingularContrastVariance: if ``C Omega C'`` is not numerically positive definite.
    """
    contrast = np.asarray(contrast, dtype=np.float64)
    vec = np.asarray(means, dtype=np.float64).reshape(-1)
    assert contrast.shape[1] == vec.shape[0], f"contrast {contrast.shape} does not match {vec.shape[0]} means"
    cov = contrast @ omega.assembled @ contrast.T
    cov = (cov + cov.T) / 2.0
    eigvals = np.linalg.eigvalsh(cov)
    if not eigvals[-1] > 0.0 or eigvals[0] <= 1e-12 * eigvals[-1]:
        raise SingularContrastVariance(
            f"contrast variance is not positive definite (eigenvalues {eigvals.min():.3g}..{eigvals.max():.3g})")
    diff = contrast @ vec
    return float(diff @ linalg.cho_solve(linalg.cho_factor(cov), diff))
