"""Validated configuration of Monte Carlo experiments."""
from __future__ import annotations

import hashlib
import json
from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..enum import DGPKind, ResidualType, SplitMode, SweepParameter, TestMethod
from ..errors import InvalidConfig
from ..kmeans import KMeansOptions


class DGPSpec(BaseModel):
    """Data generating process of one experiment cell.

    ``Y_it = m_i + e_it`` for the mean processes and ``Y_it = phi_i Y_i,t-1 + e_it`` for the AR(1) process.
    Units are assigned to groups in contiguous blocks whose sizes are the largest-remainder rounding of
    ``n * proportions``.
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    n: int = Field(ge=2)
    t: int = Field(ge=2)
    d: int = Field(default=1, ge=1)
    kind: DGPKind = DGPKind.NULL_MEANS
    means: Optional[list[list[float]]] = None
    phis: Optional[list[float]] = None
    proportions: Optional[list[float]] = None
    residuals: ResidualType = ResidualType.NORMAL
    ma_theta: float = Field(default=0.0, ge=-1.0, le=1.0)
    master_seed: int = 0

    @field_validator('means', mode='before')
    @classmethod
    def _scalar_means(cls, value: Any) -> Any:
        # a flat list is read as one mean per group for d = 1
        if isinstance(value, (list, tuple)) and all(isinstance(v, (int, float)) for v in value):
            return [[float(v)] for v in value]
        return value

    @model_validator(mode='after')
    def _check_kind(self) -> 'DGPSpec':
        if self.kind == DGPKind.NULL_MEANS:
            if self.means is not None or self.phis is not None:
                raise ValueError("null_means takes neither means nor phis")
            return self
        if self.proportions is None:
            raise ValueError(f"{self.kind.value} needs proportions")
        if any(p <= 0 for p in self.proportions) or abs(sum(self.proportions) - 1.0) > 1e-9:
            raise ValueError("proportions must be positive and sum to 1")
        if self.kind == DGPKind.CLUSTER_MEANS:
            if self.means is None or len(self.means) != len(self.proportions):
                raise ValueError("cluster_means needs one mean vector per proportion")
            if any(len(row) != self.d for row in self.means):
                raise ValueError(f"every mean vector must have length d={self.d}")
        else:
            if self.phis is None or len(self.phis) != len(self.proportions):
                raise ValueError("ar1_clusters needs one phi per proportion")
            if any(not -1.0 < phi < 1.0 for phi in self.phis):
                raise ValueError("AR(1) coefficients must lie in (-1, 1)")
            if self.d != 1:
                raise ValueError("ar1_clusters needs d = 1")
        return self

    @property
    def n_groups(self) -> int:
        return 1 if self.proportions is None else len(self.proportions)


class ExperimentConfig(BaseModel):
    """One cell of a Monte Carlo experiment: a DGP, a test and the replication protocol.

    ``test`` accepts the names of :meth:`TestMethod.from_string` and is stored in its canonical label.
    The Bonferroni combination runs ``g_alt`` over ``2..g_max``.
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    dgp: DGPSpec
    test: str = 'f'
    g_alt: int = Field(default=2, ge=2)
    g_max: int = Field(default=5, ge=2)
    split: str = 'halves'
    pi_bar: float = Field(default=0.1, ge=0.0, lt=0.5)
    m_lags: int = Field(default=0, ge=0)
    replications: int = Field(default=1000, ge=1)
    level: float = Field(default=0.05, gt=0.0, lt=1.0)
    restarts: int = Field(default=100, ge=1)
    retain_p_values: bool = False
    cell_id: int = Field(default=0, ge=0)
    name: str = ''

    @field_validator('test')
    @classmethod
    def _canonical_test(cls, value: str) -> str:
        return TestMethod.from_string(value).label

    @field_validator('split')
    @classmethod
    def _canonical_split(cls, value: str) -> str:
        return SplitMode.from_string(value).name.lower()

    @property
    def method(self) -> TestMethod:
        return TestMethod.from_string(self.test)

    @property
    def split_mode(self) -> SplitMode:
        return SplitMode.from_string(self.split)

    def kmeans_options(self, seed: int) -> KMeansOptions:
        return KMeansOptions(restarts=self.restarts, seed=seed, min_proportion=self.pi_bar)

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form; identical configurations share a digest."""
        payload = json.dumps(self.model_dump(mode='json'), sort_keys=True)
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()


class Sweep(BaseModel):
    """A power curve: ``base`` evaluated at every value of one parameter."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    name: str
    base: ExperimentConfig
    parameter: SweepParameter
    values: list[float] = Field(min_length=1)


class ExperimentFile(BaseModel):
    """Contents of an experiment file: independent cells, named sweeps, or both."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    name: str = ''
    cells: list[ExperimentConfig] = Field(default_factory=list)
    sweeps: list[Sweep] = Field(default_factory=list)

    @model_validator(mode='after')
    def _not_empty(self) -> 'ExperimentFile':
        if not self.cells and not self.sweeps:
            raise ValueError("an experiment needs at least one cell or sweep")
        return self

    def with_overrides(self, replications: Optional[int] = None, master_seed: Optional[int] = None,
                       restarts: Optional[int] = None) -> 'ExperimentFile':
        """Return a copy with the given settings replaced in every cell and sweep base."""
        def patch(config: dict) -> dict:
            if replications is not None:
                config['replications'] = replications
            if restarts is not None:
                config['restarts'] = restarts
            if master_seed is not None:
                config['dgp']['master_seed'] = master_seed
            return config

        data = self.model_dump(mode='json')
        data['cells'] = [patch(c) for c in data['cells']]
        for sweep in data['sweeps']:
            sweep['base'] = patch(sweep['base'])
        return parse_experiment(data)


def _format_errors(e: ValidationError) -> str:
    parts = []
    for err in e.errors():
        loc = '.'.join(str(x) for x in err['loc']) or '<root>'
        parts.append(f"{loc}: {err['msg']}")
    return '; '.join(parts)


def parse_config(data: Union[dict, ExperimentConfig]) -> ExperimentConfig:
    """Validate a mapping as an ``ExperimentConfig``.

    Raises:
        InvalidConfig: with one ``field: message`` entry per problem.
    """
    if isinstance(data, ExperimentConfig):
        return data
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise InvalidConfig(_format_errors(e)) from e


def parse_experiment(data: Union[dict, str, bytes]) -> ExperimentFile:
    """Validate a mapping or a JSON document as an ``ExperimentFile``.

    Raises:
        InvalidConfig: with one ``field: message`` entry per problem.
    """
    try:
        if isinstance(data, (str, bytes)):
            return ExperimentFile.model_validate_json(data)
        return ExperimentFile.model_validate(data)
    except ValidationError as e:
        raise InvalidConfig(_format_errors(e)) from e


def apply_sweep(base: ExperimentConfig, parameter: Union[SweepParameter, str], value: float,
                cell_id: int) -> ExperimentConfig:
    """Return ``base`` with ``parameter`` set to ``value`` and the given cell id.

    ``mu2`` sets the mean vector of the second group to ``(value, ..., value)``; ``pi3`` sets the
    proportions to ``((1 - value) / 2, (1 - value) / 2, value)``; ``phi2`` sets the AR(1) coefficient of
    the second group; ``g_alt`` and ``t_periods`` set the group count and the number of periods.

    Raises:
        InvalidConfig: if the parameter does not apply to the base configuration.
    """
    parameter = SweepParameter(parameter)
    data = base.model_dump(mode='json')
    dgp = data['dgp']
    if parameter == SweepParameter.MU2:
        if dgp['kind'] != DGPKind.CLUSTER_MEANS.value or len(dgp['means']) < 2:
            raise InvalidConfig("mu2 sweeps need a cluster_means DGP with at least two groups")
        dgp['means'][1] = [float(value)] * dgp['d']
    elif parameter == SweepParameter.PI3:
        if dgp['kind'] != DGPKind.CLUSTER_MEANS.value or len(dgp['proportions']) != 3:
            raise InvalidConfig("pi3 sweeps need a three-group cluster_means DGP")
        dgp['proportions'] = [(1.0 - value) / 2.0, (1.0 - value) / 2.0, float(value)]
    elif parameter == SweepParameter.PHI2:
        if dgp['kind'] != DGPKind.AR1_CLUSTERS.value or len(dgp['phis']) < 2:
            raise InvalidConfig("phi2 sweeps need an ar1_clusters DGP with at least two groups")
        dgp['phis'][1] = float(value)
    elif parameter == SweepParameter.G_ALT:
        data['g_alt'] = int(round(value))
    else:
        dgp['t'] = int(round(value))
    data['cell_id'] = cell_id
    return parse_config(data)
