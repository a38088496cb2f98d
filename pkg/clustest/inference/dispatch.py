from __future__ import annotations

from typing import Optional, Union

from ..enum import SplitMode, TestMethod
from ..kmeans import KMeansOptions
from ..panel import Panel, SplitArg
from .combine import bonferroni_test
from .means import f_test, finite_t_test, finite_t_wald, hac_test, no_split_test, small_cluster_test, t_test_two_groups
from .param import ar1_param_panel, param_test
from .result import TestResult


def run_method(
    method: Union[TestMethod, str],
    panel: Panel,
    split: SplitArg = SplitMode.HALVES,
    g_alt: int = 2,
    opts: Optional[KMeansOptions] = None,
    pi_bar: Optional[float] = None,
    m_lags: int = 0,
    g_max: int = 5,
) -> TestResult:
    """Run the test selected by ``method`` on ``panel``.

    Arguments that a method does not use are ignored: ``g_alt`` by the two-group tests,
    ``split`` by the HAC and no-split tests, ``g_max`` by everything but the Bonferroni combination.
    ``TestMethod.FINITE_T`` runs the t form for ``d = 1, g_alt = 2`` and the chi-square form otherwise.
    """
    if isinstance(method, str):
        method = TestMethod.from_string(method)
    if method == TestMethod.F_TEST:
        return f_test(panel, split, g_alt, opts)
    elif method == TestMethod.T_TEST:
        return t_test_two_groups(panel, split, opts)
    elif method == TestMethod.PARAM_TEST:
        return param_test(ar1_param_panel(panel, split), g_alt, opts)
    elif method == TestMethod.SMALL_CLUSTER:
        return small_cluster_test(panel, split, g_alt, pi_bar, opts)
    elif method == TestMethod.FINITE_T:
        if panel.dim == 1 and g_alt == 2:
            return finite_t_test(panel, split, opts)
        return finite_t_wald(panel, split, g_alt, opts)
    elif method == TestMethod.HAC:
        return hac_test(panel, m_lags, opts)
    elif method == TestMethod.NO_SPLIT:
        return no_split_test(panel, g_alt, opts)
    elif method == TestMethod.BONFERRONI:
        return bonferroni_test(panel, split, g_max, opts)
    else:
        raise ValueError(f"Unknown test method: {method}")
