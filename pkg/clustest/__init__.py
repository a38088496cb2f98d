from . import inference  # noqa
from . import simlab  # noqa
from .enum import DGPKind, DistFamily, ResidualType, SplitMode, SweepParameter, TestMethod  # noqa
from .errors import ClusterTestError, DataError  # noqa
from .inference import (TestResult, bonferroni_test, f_test, finite_t_test, finite_t_wald, hac_test,  # noqa
                        no_split_test, param_test, run_method, small_cluster_test, t_test_two_groups)
from .kmeans import (ClusterFit, KMeansOptions, PointSet, fit_clusters, fit_point_clusters,  # noqa
                     group_means_on, kmeans_objective, kmeanspp_seed, lloyd)
from .panel import (Panel, PanelView, SplitSpec, load_panel, make_split, split_panel, standardize,  # noqa
                    unit_means, within_unit_variation, write_panel)
from .vehicles import VehicleReplication, replicate_vehicles  # noqa

__version__ = '0.1.0'
