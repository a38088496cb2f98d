"""Monte Carlo runner: replications, cells, tables and power curves."""
from __future__ import annotations

import logging
import time
from collections import Counter
from concurrent import futures
from dataclasses import dataclass, field
from itertools import repeat
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd
from diskcache import Cache
from tqdm import tqdm

from ..enum import DGPKind, ResidualType, SweepParameter
from ..errors import ClusterTestError
from ..inference import run_method
from ..statfun import substream
from .config import DGPSpec, ExperimentConfig, ExperimentFile, apply_sweep, parse_config
from .dgp import gen_panel
from .output import power_curve_frame, results_frame

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 3
MAX_FAILURE_RATE = 0.01


@dataclass(frozen=True)
class CellResult:
    """Aggregated outcome of one experiment cell.

    Args:
        config:
            The configuration that produced the cell.
        digest:
            ``config.digest()``.
        rejection_rate:
            Share of successful replications with ``p < config.level``.
        n_reps:
            Number of successful replications.
        n_failures:
            Number of replications that failed on every attempt.
        failure_reasons:
            Error codes of all failed attempts, with counts.
        p_values:
            Per-replication p-values (``NaN`` for failed replications) when ``config.retain_p_values`` is set.
        seconds:
            Wall time spent on the cell.
    """
    config: ExperimentConfig
    digest: str
    rejection_rate: float
    n_reps: int
    n_failures: int
    failure_reasons: dict[str, int] = field(default_factory=dict)
    p_values: Optional[tuple[float, ...]] = None
    seconds: float = 0.0

    @property
    def flagged(self) -> bool:
        """Whether more than 1% of the replications failed."""
        return self.n_failures > MAX_FAILURE_RATE * self.config.replications


def run_replication(config: ExperimentConfig, rep_index: int) -> tuple[Optional[float], list[str]]:
    """Run one replication, redrawing the panel up to ``MAX_ATTEMPTS`` times on a data error.

    Returns:
        The p-value (``None`` if every attempt failed) and the error codes of the failed attempts.
    """
    failures: list[str] = []
    for attempt in range(MAX_ATTEMPTS):
        panel = gen_panel(config.dgp, rep_index, config.cell_id, attempt)
        seed = int(substream(config.dgp.master_seed, config.cell_id, rep_index, attempt, 1).integers(2 ** 62))
        try:
            result = run_method(
                config.method, panel, config.split_mode, config.g_alt, config.kmeans_options(seed),
                pi_bar=config.pi_bar, m_lags=config.m_lags, g_max=config.g_max)
        except ClusterTestError as e:
            failures.append(e.code)
            continue
        return result.p_value, failures
    return None, failures


def run_cell(config: Union[ExperimentConfig, dict], jobs: int = 1, progress: bool = False,
             cache: Optional[Cache] = None) -> CellResult:
    """Run every replication of a cell and aggregate the rejection rate.

    Args:
        config:
            The cell configuration, or a mapping validated into one.
        jobs:
            Number of worker processes. Results do not depend on it.
        progress:
            Show a progress bar over the replications.
        cache:
            Optional ``diskcache.Cache``; finished cells are stored under their config digest.

    Raises:
        InvalidConfig: if ``config`` does not validate.
    """
    config = parse_config(config)
    digest = config.digest()
    if cache is not None and digest in cache:
        logger.debug(f"cell {config.cell_id}: cached result {digest[:12]}")
        cached: CellResult = cache[digest]
        return cached

    start = time.perf_counter()
    reps = range(config.replications)
    desc = f"cell {config.cell_id} {config.name}".strip()
    if jobs > 1:
        with futures.ProcessPoolExecutor(max_workers=jobs) as executor:
            chunksize = max(1, config.replications // (4 * jobs))
            outcomes = list(tqdm(
                executor.map(run_replication, repeat(config), reps, chunksize=chunksize),
                total=config.replications, desc=desc, disable=not progress))
    else:
        outcomes = [run_replication(config, r) for r in tqdm(reps, desc=desc, disable=not progress)]

    p_values = np.array([np.nan if p is None else p for p, _ in outcomes], dtype=np.float64)
    reasons = Counter(code for _, codes in outcomes for code in codes)
    ok = ~np.isnan(p_values)
    n_reps = int(ok.sum())
    rate = float(np.mean(p_values[ok] < config.level)) if n_reps > 0 else float('nan')
    result = CellResult(
        config=config, digest=digest, rejection_rate=rate, n_reps=n_reps,
        n_failures=config.replications - n_reps, failure_reasons=dict(sorted(reasons.items())),
        p_values=tuple(p_values.tolist()) if config.retain_p_values else None,
        seconds=time.perf_counter() - start)
    if reasons:
        logger.warning(f"cell {config.cell_id}: failed attempts {dict(reasons)}")
    if result.flagged:
        logger.warning(f"cell {config.cell_id}: {result.n_failures} of {config.replications} replications failed")
    if cache is not None:
        cache[digest] = result
    return result


def run_cells(configs: Sequence[ExperimentConfig], jobs: int = 1, progress: bool = False,
              cache: Optional[Cache] = None) -> list[CellResult]:
    return [run_cell(c, jobs=jobs, progress=progress, cache=cache) for c in configs]


def table1_config(d: int, g: Union[int, str], n: int, t: int, residuals: Union[ResidualType, str] = 'normal',
                  replications: int = 1000, master_seed: int = 0, restarts: int = 100,
                  cell_id: int = 0) -> ExperimentConfig:
    """Size cell of the split-sample test under the null: ``g`` is a group count or ``'bonf'``."""
    residuals = ResidualType(residuals)
    dgp = DGPSpec(n=n, t=t, d=d, kind=DGPKind.NULL_MEANS, residuals=residuals, master_seed=master_seed)
    if isinstance(g, str):
        test, g_alt = 'bonferroni', 2
    else:
        test, g_alt = 'f', int(g)
    return ExperimentConfig(
        dgp=dgp, test=test, g_alt=g_alt, g_max=5, replications=replications, restarts=restarts,
        cell_id=cell_id, name=f"d={d} G={g} N={n} T={t} {residuals.value}")


def run_table1(subset: Sequence[tuple], replications: int = 1000, master_seed: int = 0, restarts: int = 100,
               jobs: int = 1, progress: bool = False, cache: Optional[Cache] = None) -> pd.DataFrame:
    """Run the size table for the requested cells.

    Args:
        subset:
            Tuples ``(d, g, n, t, residuals)``; ``g`` is a group count or ``'bonf'`` for the Bonferroni row.

    Returns:
        One row per cell, see :func:`results_frame`.
    """
    configs = [
        table1_config(d, g, n, t, residuals, replications, master_seed, restarts, cell_id=i)
        for i, (d, g, n, t, residuals) in enumerate(subset)]
    return results_frame(run_cells(configs, jobs=jobs, progress=progress, cache=cache))


def run_power_curve(base: ExperimentConfig, parameter: Union[SweepParameter, str], values: Sequence[float],
                    jobs: int = 1, progress: bool = False, cache: Optional[Cache] = None) -> list[CellResult]:
    """Evaluate ``base`` at every value of ``parameter``; grid point ``k`` runs as cell ``k``."""
    configs = [apply_sweep(base, parameter, v, cell_id=k) for k, v in enumerate(values)]
    return run_cells(configs, jobs=jobs, progress=progress, cache=cache)


@dataclass(frozen=True)
class ExperimentResult:
    """Outcome of an experiment file.

    Args:
        cells:
            One row per cell, including the cells of the sweeps (``curve`` and ``x`` columns).
        curves:
            Plot data of each sweep, keyed by sweep name.
        results:
            The raw cell results in the order of ``cells``.
    """
    cells: pd.DataFrame
    curves: dict[str, pd.DataFrame]
    results: tuple[CellResult, ...]


def run_experiment(experiment: ExperimentFile, jobs: int = 1, progress: bool = False,
                   cache: Optional[Cache] = None) -> ExperimentResult:
    """Run the cells and the sweeps of an experiment file."""
    results = list(run_cells(experiment.cells, jobs=jobs, progress=progress, cache=cache))
    frames = [results_frame(results)] if results else []
    curves = {}
    for sweep in experiment.sweeps:
        logger.info(f"sweep {sweep.name}: {sweep.parameter.value} over {len(sweep.values)} values")
        sweep_results = run_power_curve(sweep.base, sweep.parameter, sweep.values, jobs, progress, cache)
        curves[sweep.name] = power_curve_frame(sweep_results, sweep.values)
        frame = results_frame(sweep_results)
        frame.insert(0, 'x', list(sweep.values))
        frame.insert(0, 'curve', sweep.name)
        frames.append(frame)
        results.extend(sweep_results)
    cells = pd.concat(frames, ignore_index=True) if frames else results_frame([])
    return ExperimentResult(cells=cells, curves=curves, results=tuple(results))
