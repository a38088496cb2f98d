from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..enum import TestMethod
from ..panel import SplitSpec
from ..statfun import chi2_sf, normal_two_sided


@dataclass(frozen=True)
class Diagnostics:
    """Intermediate quantities behind a ``TestResult``.

    Args:
        assignments:
            Group labels estimated on the assignment sample.
        proportions:
            Group proportions estimated on the assignment sample.
        means_r:
            Group means over the assignment sample, shape ``(G, d)``.
        means_p:
            Group means over the testing sample, shape ``(G, d)``.
        omega:
            The assembled variance estimate used by the statistic.
        contrast:
            The contrast matrix of the quadratic form.
        split:
            The split between the assignment and testing samples.
        p_values:
            Component p-values keyed by group count, for combined tests.
    """
    assignments: Optional[np.ndarray] = None
    proportions: Optional[np.ndarray] = None
    means_r: Optional[np.ndarray] = None
    means_p: Optional[np.ndarray] = None
    omega: Optional[np.ndarray] = None
    contrast: Optional[np.ndarray] = None
    split: Optional[SplitSpec] = None
    p_values: dict[int, float] = field(default_factory=dict)


@dataclass(frozen=True)
class TestResult:
    """Outcome of a test of the single-cluster null.

    Args:
        statistic:
            The test statistic: a chi-square form, or a t statistic when ``df`` is ``None``.
        df:
            Chi-square degrees of freedom, or ``None`` for statistics compared to the standard normal.
        p_value:
            The p-value, computed as a survival function.
        method:
            Which test produced the result.
        g_alt:
            Number of groups fit on the assignment sample.
        g_effective:
            Number of groups entering the contrast. Differs from ``g_alt`` only for the small-cluster test
            and the Bonferroni combination.
        diagnostics:
            Intermediate estimates.
        warning:
            A validity warning to show next to the result, if any.
    """
    __test__ = False

    statistic: float
    df: Optional[int]
    p_value: float
    method: TestMethod
    g_alt: int
    g_effective: int
    diagnostics: Diagnostics = field(default_factory=Diagnostics)
    warning: Optional[str] = None

    @property
    def is_normal(self) -> bool:
        return self.df is None

    def rejects(self, level: float = 0.05) -> bool:
        return self.p_value < level


def chi2_result(statistic: float, df: int, method: TestMethod, g_alt: int, g_effective: int,
                diagnostics: Diagnostics, warning: Optional[str] = None) -> TestResult:
    """Wrap a chi-square statistic with its upper-tail p-value."""
    return TestResult(
        statistic=float(statistic), df=df, p_value=chi2_sf(max(float(statistic), 0.0), df),
        method=method, g_alt=g_alt, g_effective=g_effective, diagnostics=diagnostics, warning=warning)


def normal_result(statistic: float, method: TestMethod, g_alt: int,
                  diagnostics: Diagnostics, warning: Optional[str] = None) -> TestResult:
    """Wrap a t statistic with its two-sided standard normal p-value."""
    return TestResult(
        statistic=float(statistic), df=None, p_value=normal_two_sided(float(statistic)),
        method=method, g_alt=g_alt, g_effective=g_alt, diagnostics=diagnostics, warning=warning)
