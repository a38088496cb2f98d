"""Text and CSV renderings of test results and cluster fits.

Reports number groups from 1.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
import pandas as pd

from .inference import TestResult
from .kmeans import ClusterFit
from .vehicles import VehicleReplication


def _fmt_vector(values: np.ndarray) -> str:
    return ' '.join(f"{v:.4f}" for v in np.atleast_1d(values))


def format_p_value(p: float) -> str:
    return f"{p:.3e}" if p < 1e-4 else f"{p:.4f}"


def format_test_report(result: TestResult) -> str:
    """Human-readable summary of a ``TestResult``."""
    lines = []
    if result.warning:
        lines += ['=' * 72, f"WARNING: {result.warning}", '=' * 72]
    lines.append(f"method:        {result.method.label}")
    lines.append(f"G alternative: {result.g_alt}")
    if result.g_effective != result.g_alt:
        lines.append(f"G effective:   {result.g_effective}")
    lines.append(f"statistic:     {result.statistic:.6f}")
    lines.append(f"df:            {'normal' if result.df is None else result.df}")
    lines.append(f"p-value:       {format_p_value(result.p_value)}")
    diag = result.diagnostics
    if diag.p_values:
        parts = ', '.join(f"G={g}: {format_p_value(p)}" for g, p in diag.p_values.items())
        lines.append(f"components:    {parts}")
    if diag.proportions is not None:
        lines.append(f"proportions:   {_fmt_vector(diag.proportions)}")
    for label, means in (('R', diag.means_r), ('P', diag.means_p)):
        if means is None:
            continue
        lines.append(f"group means ({label}):")
        for g, row in enumerate(np.atleast_2d(means)):
            lines.append(f"  group {g + 1}: {_fmt_vector(row)}")
    return '\n'.join(lines)


def result_frame(result: TestResult) -> pd.DataFrame:
    """One row per group with the test outcome repeated on every row."""
    diag = result.diagnostics
    n_groups = 0 if diag.proportions is None else len(diag.proportions)
    rows = []
    for g in range(max(n_groups, 1)):
        row = {
            'method': result.method.label, 'g_alt': result.g_alt, 'g_effective': result.g_effective,
            'statistic': result.statistic, 'df': 'normal' if result.df is None else result.df,
            'p_value': result.p_value, 'group': g + 1 if n_groups else None,
            'proportion': diag.proportions[g] if n_groups else None}
        for label, means in (('r', diag.means_r), ('p', diag.means_p)):
            if means is not None and g < len(means):
                for k, v in enumerate(np.atleast_1d(means[g])):
                    row[f"mean_{label}_{k + 1}"] = v
        rows.append(row)
    return pd.DataFrame(rows)


def format_fit_report(fit: ClusterFit, unit_labels: Sequence[str]) -> str:
    """Human-readable summary of a ``ClusterFit``."""
    lines = [f"groups:      {fit.n_groups}", f"objective:   {fit.objective:.6g}",
             f"restarts:    {fit.restarts_used}", f"proportions: {_fmt_vector(fit.proportions)}"]
    for g in range(fit.n_groups):
        members = ', '.join(unit_labels[i] for i in fit.members(g))
        lines.append(f"group {g + 1}: mean {_fmt_vector(fit.means[g])}")
        lines.append(f"  members: {members}")
    return '\n'.join(lines)


def fit_frame(fit: ClusterFit, unit_labels: Sequence[str]) -> pd.DataFrame:
    """Unit-level assignments (1-based groups)."""
    return pd.DataFrame({'unit': list(unit_labels), 'group': fit.assignments + 1})


def format_vehicle_report(rep: VehicleReplication, origins_label: Optional[str] = 'origin') -> str:
    """Attribute means per group (Panel A) and group constituents (Panel B) of the manufacturer study."""
    lines = [f"manufacturers: {len(rep.manufacturers)}", '', 'Panel A: normalized attribute means']
    for label, frame in (('R sample', rep.means_r), ('P sample', rep.means_p)):
        lines.append(f"  {label}")
        lines += ['    ' + line for line in frame.to_string(float_format=lambda v: f"{v:.3f}").splitlines()]
    lines += ['', 'Panel B: constituents']
    for g, names in sorted(rep.constituents().items()):
        lines.append(f"  group {g + 1}: {', '.join(names)}")
    lines += ['', f"statistic: {rep.result.statistic:.4f} (df {rep.result.df})",
              f"p-value:   {format_p_value(rep.result.p_value)}"]
    cleaves = rep.cleaves_by_origin()
    if cleaves is not None:
        lines.append(f"groups cleave by {origins_label}: {'yes' if cleaves else 'no'}")
    return '\n'.join(lines)
