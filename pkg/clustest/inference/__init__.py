from .combine import bonferroni, bonferroni_test  # noqa
from .contrast import contrast_A, contrast_B  # noqa
from .dispatch import run_method  # noqa
from .means import (NO_SPLIT_WARNING, f_test, finite_t_test, finite_t_wald, hac_test, large_group_count,  # noqa
                    no_split_test, small_cluster_test, t_test_two_groups)
from .param import ParamPanel, ar1_estimate, ar1_param_panel, param_test  # noqa
from .result import Diagnostics, TestResult, chi2_result, normal_result  # noqa
from .variance import (VarianceEstimate, contrast_quadratic_form, long_run_variance, omega_group_residual,  # noqa
                       omega_hac, omega_iid, omega_param)
