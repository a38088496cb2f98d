"""Clustering vehicle manufacturers on their average car attributes.

The raw file has one row per model and model year. Weight is logged, the rows are split into the
assignment years 1970-1975 and the testing years 1976-1982, attributes are averaged by manufacturer within
each sample, and only manufacturers present in both samples with complete attributes are kept. Each
attribute is standardized across manufacturers within each sample. The result is a panel with two periods
(``R`` and ``P``) and one dimension per attribute, tested with the fixed-``T`` variance.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from .errors import InsufficientUnits, MalformedRow
from .inference import TestResult, finite_t_wald
from .kmeans import KMeansOptions
from .panel import CSVSource, Panel, SplitSpec, zscore_columns

logger = logging.getLogger(__name__)

ATTRIBUTES = ('acceleration', 'cylinders', 'displacement', 'horsepower', 'mpg', 'weight')
R_YEARS = (1970, 1975)
P_YEARS = (1976, 1982)
DEFAULT_RESTARTS = 1000


@dataclass(frozen=True)
class VehicleReplication:
    """Outcome of the vehicle manufacturer study.

    Args:
        panel:
            Standardized attribute averages, shape ``(N, 2, 6)`` with periods ``('R', 'P')``.
        result:
            The split-sample test of a single cluster against two.
        means_r:
            Standardized attribute means per group on ``R`` (rows are groups).
        means_p:
            Standardized attribute means per group on ``P``.
        origins:
            Origin of each manufacturer when the raw file carries an ``origin`` column.
    """
    panel: Panel
    result: TestResult
    means_r: pd.DataFrame
    means_p: pd.DataFrame
    origins: Optional[dict[str, str]] = None

    @property
    def manufacturers(self) -> tuple[str, ...]:
        return self.panel.unit_labels

    @property
    def assignments(self) -> np.ndarray:
        assignments = self.result.diagnostics.assignments
        assert assignments is not None
        return assignments

    def constituents(self) -> dict[int, list[str]]:
        """Manufacturers of each group, keyed by 0-based group label."""
        groups: dict[int, list[str]] = {}
        for name, g in zip(self.manufacturers, self.assignments):
            groups.setdefault(int(g), []).append(name)
        return groups

    def cleaves_by_origin(self) -> Optional[bool]:
        """Whether no origin spans two groups, so that the groups are unions of whole origins."""
        if self.origins is None:
            return None
        by_origin: dict[str, set[int]] = {}
        for name, g in zip(self.manufacturers, self.assignments):
            origin = self.origins[name]
            by_origin.setdefault(origin, set()).add(int(g))
        return all(len(v) == 1 for v in by_origin.values())


def load_vehicles(source: CSVSource) -> pd.DataFrame:
    """Read the raw per-model file and keep the rows with every attribute present.

    Two-digit model years are read as ``19xx``. Non-numeric attribute entries (such as ``?``) count as missing.

    Raises:
        InsufficientUnits: if the file is empty.
        MalformedRow: if a required column is absent.
    """
    try:
        frame = pd.read_csv(source, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise InsufficientUnits("the vehicle file is empty") from e
    except pd.errors.ParserError as e:
        raise MalformedRow(f"cannot parse the vehicle file: {e}") from e
    except UnicodeDecodeError as e:
        raise MalformedRow(f"the vehicle file is not UTF-8 text: {e.reason} at byte {e.start}") from e
    frame.columns = [str(c).strip().lower() for c in frame.columns]
    required = ('manufacturer', 'model_year') + ATTRIBUTES
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise MalformedRow(f"missing columns {missing}")
    frame = frame.copy()
    for column in ('model_year',) + ATTRIBUTES:
        frame[column] = pd.to_numeric(frame[column], errors='coerce')
    before = len(frame)
    frame = frame.dropna(subset=list(required)).copy()
    frame['manufacturer'] = frame['manufacturer'].astype(str).str.strip().str.lower()
    if 'origin' in frame.columns:
        frame['origin'] = frame['origin'].astype(str).str.strip()
    frame = frame[frame['manufacturer'] != ''].copy()
    frame['model_year'] = frame['model_year'].astype(int)
    frame.loc[frame['model_year'] < 100, 'model_year'] += 1900
    logger.debug(f"kept {len(frame)} of {before} vehicle rows with complete attributes")
    return frame.reset_index(drop=True)


def _sample_averages(frame: pd.DataFrame, years: tuple[int, int]) -> pd.DataFrame:
    in_sample = frame[(frame['model_year'] >= years[0]) & (frame['model_year'] <= years[1])]
    return in_sample.groupby('manufacturer')[list(ATTRIBUTES)].mean()


def vehicle_panel(frame: pd.DataFrame) -> Panel:
    """Average, filter and standardize the attributes into an ``(N, 2, 6)`` panel.

    Raises:
        InsufficientUnits: if fewer than two manufacturers appear in both samples.
    """
    frame = frame.assign(weight=np.log(frame['weight'].astype(float)))
    avg_r = _sample_averages(frame, R_YEARS)
    avg_p = _sample_averages(frame, P_YEARS)
    common = sorted(set(avg_r.index) & set(avg_p.index))
    if len(common) < 2:
        raise InsufficientUnits(f"{len(common)} manufacturers appear in both samples, at least 2 are needed")
    z_r = zscore_columns(avg_r.loc[common].to_numpy())
    z_p = zscore_columns(avg_p.loc[common].to_numpy())
    logger.info(f"{len(common)} manufacturers appear in both samples")
    return Panel(np.stack([z_r, z_p], axis=1), tuple(common), ('R', 'P'))


def _origins(frame: pd.DataFrame, manufacturers: tuple[str, ...]) -> Optional[dict[str, str]]:
    if 'origin' not in frame.columns:
        return None
    first = frame.groupby('manufacturer')['origin'].agg(lambda s: s.mode().iloc[0])
    return {m: str(first[m]) for m in manufacturers}


def replicate_vehicles(source: CSVSource, g: int = 2, opts: Optional[KMeansOptions] = None) -> VehicleReplication:
    """Run the manufacturer study on a raw vehicle file.

    Clusters are fit on the ``R`` averages and tested on the ``P`` averages with :func:`finite_t_wald`,
    since each sample contributes one averaged observation per manufacturer.
    Groups are reported in canonical order (largest group first).
    """
    opts = opts or KMeansOptions(restarts=DEFAULT_RESTARTS)
    frame = load_vehicles(source)
    panel = vehicle_panel(frame)
    result = finite_t_wald(panel, SplitSpec((0,), (1,)), g, opts)
    diagnostics = result.diagnostics
    assert diagnostics.means_r is not None and diagnostics.means_p is not None
    groups = [f"group {k + 1}" for k in range(g)]
    return VehicleReplication(
        panel=panel, result=result,
        means_r=pd.DataFrame(diagnostics.means_r, index=groups, columns=list(ATTRIBUTES)),
        means_p=pd.DataFrame(diagnostics.means_p, index=groups, columns=list(ATTRIBUTES)),
        origins=_origins(frame, panel.unit_labels))
