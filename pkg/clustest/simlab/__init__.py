from .checks import (binomial_band, isotonic_deviation, ks_critical_value, ks_uniform_distance,  # noqa
                     two_proportion_band, wilson_interval)
from .config import (DGPSpec, ExperimentConfig, ExperimentFile, Sweep, apply_sweep, parse_config,  # noqa
                     parse_experiment)
from .dgp import gen_panel, group_counts, true_assignments  # noqa
from .output import p_value_frame, power_curve_frame, results_frame, write_frame, write_power_svg  # noqa
from .presets import PRESETS, load_experiment  # noqa
from .runner import (CellResult, ExperimentResult, run_cell, run_cells, run_experiment, run_power_curve,  # noqa
                     run_replication, run_table1, table1_config)
