from __future__ import annotations

from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from ..enum import SplitMode, TestMethod
from ..errors import InvalidPValue, NeedTwoGroups
from ..kmeans import KMeansOptions
from ..panel import Panel, SplitArg
from .means import f_test
from .result import TestResult


def bonferroni(p_values: Sequence[float] | np.ndarray) -> float:
    """Combine p-values over group counts ``2..G_max``: ``min(1, (G_max - 1) * min(p))``.

    Examples:
        >>> from clustest.inference import bonferroni
        >>> round(bonferroni([0.01, 0.5, 0.9, 0.2]), 12)
        0.04
    """
    p = np.asarray(p_values, dtype=np.float64).reshape(-1)
    if len(p) == 0:
        raise InvalidPValue("at least one p-value is needed")
    if np.any(~np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
        raise InvalidPValue(f"p-values must lie in [0, 1], got {p.tolist()}")
    return float(min(1.0, len(p) * p.min()))


def bonferroni_test(panel: Panel, split: SplitArg = SplitMode.HALVES, g_max: int = 5,
                    opts: Optional[KMeansOptions] = None) -> TestResult:
    """Run :func:`f_test` for every ``g_alt`` in ``2..g_max`` and combine the p-values by Bonferroni.

    The returned statistic and degrees of freedom are those of the component with the smallest p-value,
    and ``g_effective`` is its group count. Component p-values are kept in ``diagnostics.p_values``.
    """
    if g_max < 2:
        raise NeedTwoGroups(f"g_max must be at least 2, got {g_max}")
    results = {g: f_test(panel, split, g, opts) for g in range(2, g_max + 1)}
    p_values = {g: r.p_value for g, r in results.items()}
    best = min(p_values, key=lambda g: (p_values[g], g))
    component = results[best]
    return replace(
        component, p_value=bonferroni(list(p_values.values())), method=TestMethod.BONFERRONI,
        g_alt=g_max, g_effective=best, diagnostics=replace(component.diagnostics, p_values=p_values))
