"""Tests on clustered unit-level parameter estimates."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..enum import SplitMode, TestMethod
from ..errors import DegenerateRegressor, DimensionMismatch, EmptyGroupInP, InvalidSplit, PanelTooShort
from ..kmeans import KMeansOptions, PointSet, fit_point_clusters
from ..panel import Panel, SplitArg, make_split
from .contrast import contrast_A
from .result import Diagnostics, TestResult, chi2_result
from .variance import contrast_quadratic_form, omega_param

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParamPanel:
    """Per-unit parameter estimates on the assignment and testing samples.

    Args:
        estimates_r:
            Estimates on ``R``, shape ``(N, b)``. Used only to fit the clusters.
        estimates_p:
            Estimates on ``P``, shape ``(N, b)``.
        variances_p:
            Variances of the root-``p_periods``-scaled estimates on ``P``, shape ``(N, b, b)``.
        p_periods:
            Number of observations behind each testing-sample estimate.
    """
    estimates_r: np.ndarray
    estimates_p: np.ndarray
    variances_p: np.ndarray
    p_periods: int

    def __post_init__(self) -> None:
        r = np.asarray(self.estimates_r, dtype=np.float64)
        p = np.asarray(self.estimates_p, dtype=np.float64)
        v = np.asarray(self.variances_p, dtype=np.float64)
        r = r[:, None] if r.ndim == 1 else r
        p = p[:, None] if p.ndim == 1 else p
        v = v[:, None, None] if v.ndim == 1 else v
        n, b = p.shape
        if r.shape != (n, b) or v.shape != (n, b, b):
            raise DimensionMismatch(
                f"inconsistent shapes: estimates_r {r.shape}, estimates_p {p.shape}, variances_p {v.shape}")
        if not np.allclose(v, np.swapaxes(v, 1, 2)):
            raise ValueError("variances_p must be symmetric")
        if self.p_periods < 1:
            raise ValueError("p_periods must be positive")
        for arr in (r, p, v):
            arr.flags.writeable = False
        object.__setattr__(self, 'estimates_r', r)
        object.__setattr__(self, 'estimates_p', p)
        object.__setattr__(self, 'variances_p', v)

    @property
    def n_units(self) -> int:
        return self.estimates_p.shape[0]

    @property
    def n_params(self) -> int:
        return self.estimates_p.shape[1]


def ar1_estimate(series: np.ndarray, robust: bool = False) -> tuple[float, float, float]:
    """Fit ``Y_t = phi0 + phi1 Y_{t-1} + e_t`` by ordinary least squares.

    Args:
        series:
            ``T >= 3`` observations.
        robust:
            Use the heteroskedasticity-consistent variance of the slope instead of the classical one.

    Returns:
        ``(phi0, phi1, v_hat)`` where ``v_hat`` estimates the variance of ``sqrt(T - 1) (phi1_hat - phi1)``.
        The classical variance uses the residual variance with divisor ``T - 3``.

    Examples:
        >>> from clustest.inference import ar1_estimate
        >>> ar1_estimate([1.0, 2.0, 3.0, 4.0, 5.0])
        (1.0, 1.0, 0.0)
    """
    y = np.asarray(series, dtype=np.float64).reshape(-1)
    if len(y) < 3:
        raise PanelTooShort(f"an AR(1) fit needs at least 3 observations, got {len(y)}")
    x, z = y[:-1], y[1:]
    n = len(x)
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if sxx <= 1e-12 * max(1.0, float(x @ x)):
        raise DegenerateRegressor("the lagged series has no variation")
    phi1 = float(xc @ (z - z.mean())) / sxx
    phi0 = float(z.mean() - phi1 * x.mean())
    resid = z - phi0 - phi1 * x
    if robust:
        v_hat = n * float(np.sum(xc ** 2 * resid ** 2)) / sxx ** 2
    else:
        s2 = float(resid @ resid) / max(n - 2, 1)
        v_hat = n * s2 / sxx
    return phi0, phi1, v_hat


def _is_contiguous(indices: tuple[int, ...]) -> bool:
    return all(b - a == 1 for a, b in zip(indices, indices[1:]))


def ar1_param_panel(panel: Panel, split: SplitArg = SplitMode.HALVES, robust: bool = False) -> ParamPanel:
    """Estimate a per-unit AR(1) slope on ``R`` and on ``P``.

    Raises:
        DimensionMismatch: if ``d != 1``.
        InvalidSplit: if ``R`` or ``P`` are not contiguous runs of periods.
    """
    if panel.dim != 1:
        raise DimensionMismatch(f"AR(1) estimation needs d = 1, got d = {panel.dim}")
    spec = make_split(panel.n_periods, split)
    if not (_is_contiguous(spec.r_indices) and _is_contiguous(spec.p_indices)):
        raise InvalidSplit("AR(1) estimation needs contiguous R and P periods")
    values = panel.values[:, :, 0]
    r_idx, p_idx = list(spec.r_indices), list(spec.p_indices)
    estimates_r = np.array([ar1_estimate(row[r_idx], robust)[1] for row in values])
    fits_p = [ar1_estimate(row[p_idx], robust) for row in values]
    estimates_p = np.array([f[1] for f in fits_p])
    variances_p = np.array([f[2] for f in fits_p])
    logger.debug(f"AR(1) slopes for {panel.n_units} units on {len(r_idx)} + {len(p_idx)} periods")
    return ParamPanel(estimates_r, estimates_p, variances_p, p_periods=len(p_idx) - 1)


def param_test(params: ParamPanel, g_alt: int = 2, opts: Optional[KMeansOptions] = None) -> TestResult:
    """Test the single-cluster null on unit-level parameter estimates.

    Clusters are fit on ``params.estimates_r``. The group means ``alpha`` of ``params.estimates_p`` are
    compared by ``F = N P alpha' A' (A Omega A')^{-1} A alpha`` with
    ``Omega_g = (1/N) sum_{i in g} V_i / pi_g^2`` and ``P = params.p_periods``. Since ``V_i`` is the
    variance of the root-``P``-scaled estimate, ``F`` with ``b = 1`` and ``g_alt = 2`` is the square of the
    two-sample z statistic of the group means.
    """
    b = params.n_params
    contrast = contrast_A(b, g_alt)
    fit = fit_point_clusters(PointSet(params.estimates_r), g_alt, opts)
    sizes = fit.group_sizes
    if np.any(sizes == 0):
        raise EmptyGroupInP(f"groups {np.flatnonzero(sizes == 0).tolist()} have no member")
    alpha = np.stack([params.estimates_p[fit.members(g)].mean(axis=0) for g in range(g_alt)])
    omega = omega_param(params.variances_p, fit.assignments, fit.proportions)
    statistic = params.n_units * params.p_periods * contrast_quadratic_form(contrast, alpha, omega)
    diagnostics = Diagnostics(
        assignments=fit.assignments, proportions=fit.proportions, means_r=fit.means, means_p=alpha,
        omega=omega.assembled, contrast=contrast)
    return chi2_result(statistic, b * (g_alt - 1), TestMethod.PARAM_TEST, g_alt, g_alt, diagnostics)
