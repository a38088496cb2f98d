from __future__ import annotations

import logging
from os import PathLike
from typing import TYPE_CHECKING, Mapping, Sequence, Union

import numpy as np
import pandas as pd

from .checks import wilson_interval

if TYPE_CHECKING:
    from .runner import CellResult

logger = logging.getLogger(__name__)

CELL_COLUMNS = [
    'cell_id', 'name', 'test', 'd', 'g_alt', 'n', 't', 'residuals', 'split', 'replications',
    'rejection_rate', 'n_reps', 'n_failures', 'flagged', 'seconds']
CURVE_COLUMNS = ['x', 'rejection_rate', 'ci_lo', 'ci_hi', 'n_reps']


def results_frame(results: Sequence['CellResult']) -> pd.DataFrame:
    """One row per cell with the cell parameters, the rejection rate and the failure counts."""
    rows = []
    for r in results:
        c = r.config
        rows.append({
            'cell_id': c.cell_id, 'name': c.name, 'test': c.test, 'd': c.dgp.d,
            'g_alt': c.g_max if c.test == 'bonferroni' else c.g_alt, 'n': c.dgp.n, 't': c.dgp.t,
            'residuals': c.dgp.residuals.value, 'split': c.split, 'replications': c.replications,
            'rejection_rate': r.rejection_rate, 'n_reps': r.n_reps, 'n_failures': r.n_failures,
            'flagged': r.flagged, 'seconds': round(r.seconds, 3)})
    return pd.DataFrame(rows, columns=CELL_COLUMNS)


def power_curve_frame(results: Sequence['CellResult'], xs: Sequence[float]) -> pd.DataFrame:
    """Plot data of a power curve with Wilson 95% intervals around each rejection rate."""
    assert len(results) == len(xs), "one x value per cell is needed"
    rows = []
    for x, r in zip(xs, results):
        rejections = int(round(r.rejection_rate * r.n_reps)) if r.n_reps > 0 else 0
        lo, hi = wilson_interval(rejections, r.n_reps)
        rows.append({'x': float(x), 'rejection_rate': r.rejection_rate, 'ci_lo': lo, 'ci_hi': hi, 'n_reps': r.n_reps})
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def p_value_frame(results: Sequence['CellResult']) -> pd.DataFrame:
    """Long table ``cell_id, rep, p_value`` of the retained per-replication p-values."""
    frames = [
        pd.DataFrame({'cell_id': r.config.cell_id, 'rep': np.arange(len(r.p_values)), 'p_value': r.p_values})
        for r in results if r.p_values is not None]
    if not frames:
        return pd.DataFrame(columns=['cell_id', 'rep', 'p_value'])
    return pd.concat(frames, ignore_index=True)


def write_frame(frame: pd.DataFrame, path: Union[str, PathLike]) -> None:
    frame.to_csv(path, index=False, float_format='%.6g')
    logger.info(f"wrote {len(frame)} rows to {path}")


def write_power_svg(curves: Mapping[str, pd.DataFrame], path: Union[str, PathLike], title: str = '',
                    xlabel: str = 'x') -> None:
    """Draw power curves with their interval bands into a static SVG file."""
    from matplotlib.figure import Figure

    fig = Figure(figsize=(6.4, 4.0))
    ax = fig.subplots()
    for name, frame in curves.items():
        line, = ax.plot(frame['x'], frame['rejection_rate'], marker='o', markersize=3, label=name)
        ax.fill_between(frame['x'], frame['ci_lo'], frame['ci_hi'], color=line.get_color(), alpha=0.15)
    ax.axhline(0.05, color='gray', linestyle=':', linewidth=1)
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel(xlabel)
    ax.set_ylabel('rejection rate')
    if title:
        ax.set_title(title)
    ax.legend(fontsize='small')
    fig.savefig(path, format='svg', metadata={'Date': None})
    logger.info(f"wrote power curves to {path}")
