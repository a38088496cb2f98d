"""Distributional checks on simulated p-values and rejection rates."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import optimize, stats


def ks_uniform_distance(p_values: Sequence[float] | np.ndarray) -> float:
    """Kolmogorov-Smirnov distance between the empirical CDF of ``p_values`` and Uniform(0, 1)."""
    return float(stats.kstest(np.asarray(p_values, dtype=np.float64), 'uniform').statistic)


def ks_critical_value(n: int, alpha: float = 0.01) -> float:
    """Critical value of the one-sample KS distance at level ``alpha`` for ``n`` observations."""
    return float(stats.kstwo.ppf(1.0 - alpha, n))


def binomial_band(p: float, n: int, level: float = 0.99) -> tuple[float, float]:
    """Normal-approximation band ``p -/+ z sqrt(p (1 - p) / n)`` for a rejection rate over ``n`` draws.

    Examples:
        >>> from clustest.simlab import binomial_band
        >>> lo, hi = binomial_band(0.05, 1000)
        >>> round(lo, 3), round(hi, 3)
        (0.032, 0.068)
    """
    z = float(stats.norm.ppf(0.5 + level / 2.0))
    half = z * math.sqrt(p * (1.0 - p) / n)
    return max(0.0, p - half), min(1.0, p + half)


def two_proportion_band(n1: int, n2: int, p: float, level: float = 0.99) -> float:
    """Half-width of the band for the difference of two rejection rates with common probability ``p``."""
    z = float(stats.norm.ppf(0.5 + level / 2.0))
    return z * math.sqrt(p * (1.0 - p) * (1.0 / n1 + 1.0 / n2))


def wilson_interval(successes: int, n: int, level: float = 0.95) -> tuple[float, float]:
    """Wilson score interval of a binomial proportion."""
    if n == 0:
        return 0.0, 1.0
    ci = stats.binomtest(int(successes), int(n)).proportion_ci(confidence_level=level, method='wilson')
    return float(ci.low), float(ci.high)


def isotonic_deviation(rates: Sequence[float] | np.ndarray) -> float:
    """Sup-norm distance between ``rates`` and their non-decreasing isotonic fit."""
    y = np.asarray(rates, dtype=np.float64)
    if len(y) < 2:
        return 0.0
    fitted = optimize.isotonic_regression(y, increasing=True).x
    return float(np.max(np.abs(fitted - y)))
