"""Bundled experiments: the size tables and the power curves of the simulation study."""
from __future__ import annotations

import logging
from os import PathLike
from pathlib import Path
from typing import Callable, Union

from ..errors import InvalidConfig
from .config import ExperimentFile, parse_experiment

logger = logging.getLogger(__name__)

SMALL = (30, 50)
LARGE = (150, 250)
# distance between the outer cluster means giving power strictly inside (0.05, 1)
SEPARATION = {SMALL: 0.2, LARGE: 0.075}
MU2_GRID = [round(0.05 * k, 2) for k in range(11)]
PI3_GRID = [0.01, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 1.0 / 3.0]
PHI2_GRID = [round(0.1 * k, 1) for k in range(1, 10)]


def _null(n: int, t: int, d: int = 1, residuals: str = 'normal') -> dict:
    return {'n': n, 't': t, 'd': d, 'kind': 'null_means', 'residuals': residuals}


def _means(n: int, t: int, means: list, proportions: list, d: int = 1, residuals: str = 'normal') -> dict:
    return {'n': n, 't': t, 'd': d, 'kind': 'cluster_means', 'means': means, 'proportions': proportions,
            'residuals': residuals}


def _cell(dgp: dict, test: str = 'f', g_alt: int = 2, replications: int = 1000, restarts: int = 100,
          name: str = '', **kwargs) -> dict:
    return {'dgp': dgp, 'test': test, 'g_alt': g_alt, 'replications': replications, 'restarts': restarts,
            'name': name, **kwargs}


def table1(replications: int = 1000) -> dict:
    cells = []
    for residuals in ('normal', 'heterogeneous'):
        for d in (1, 2, 5):
            for g in (2, 3, 4, 5, 'bonf'):
                for n in (30, 150, 600):
                    for t in (50, 250, 1000):
                        test, g_alt = ('bonferroni', 2) if g == 'bonf' else ('f', g)
                        cells.append(_cell(_null(n, t, d, residuals), test, g_alt, replications,
                                           name=f"d={d} G={g} N={n} T={t} {residuals}", cell_id=len(cells)))
    return {'name': 'table1', 'cells': cells}


SMOKE_GRID = [(1, 2, 30, 50, 'normal'), (1, 2, 150, 250, 'normal'), (1, 5, 600, 1000, 'normal'),
              (2, 3, 150, 250, 'heterogeneous'), (5, 4, 30, 50, 'heterogeneous'), (1, 'bonf', 150, 250, 'normal')]


def table1_smoke() -> dict:
    cells = []
    for i, (d, g, n, t, residuals) in enumerate(SMOKE_GRID):
        test, g_alt = ('bonferroni', 2) if g == 'bonf' else ('f', g)
        cells.append(_cell(_null(n, t, d, residuals), test, g_alt, 200, restarts=20,
                           name=f"d={d} G={g} N={n} T={t} {residuals}", cell_id=i))
    return {'name': 'table1_smoke', 'cells': cells}


def tablesa1_smoke() -> dict:
    subset = [(1, 2, 30, 50), (2, 3, 30, 50), (1, 2, 150, 250)]
    cells = [_cell(_null(n, t, d), 'no-split', g, 200, restarts=20, name=f"d={d} G={g} N={n} T={t}", cell_id=i)
             for i, (d, g, n, t) in enumerate(subset)]
    return {'name': 'tableSA1_smoke', 'cells': cells}


def figure1() -> dict:
    sweeps = []
    for residuals in ('normal', 'heterogeneous'):
        for n in (30, 150):
            for t in (50, 250, 1000):
                base = _cell(_means(n, t, [0.0, 0.0], [0.5, 0.5], residuals=residuals))
                sweeps.append({'name': f"N={n} T={t} {residuals}", 'base': base, 'parameter': 'mu2',
                               'values': MU2_GRID})
    return {'name': 'figure1', 'sweeps': sweeps}


def figure2() -> dict:
    sweeps = []
    for (n, t), delta in SEPARATION.items():
        two = _cell(_means(n, t, [0.0, delta], [0.5, 0.5]))
        sweeps.append({'name': f"G=2 N={n} T={t}", 'base': two, 'parameter': 'g_alt', 'values': [2, 3, 4, 5]})
        five = _cell(_means(n, t, [k * delta / 4.0 for k in range(5)], [0.2] * 5))
        sweeps.append({'name': f"G=5 N={n} T={t}", 'base': five, 'parameter': 'g_alt', 'values': [2, 3, 4, 5]})
    return {'name': 'figure2', 'sweeps': sweeps}


def figure3() -> dict:
    sweeps = []
    for n, t in (SMALL, LARGE):
        dgp = _means(n, t, [0.0, 0.0], [0.5, 0.5])
        sweeps.append({'name': f"G=2 N={n} T={t}", 'base': _cell(dgp), 'parameter': 'mu2', 'values': MU2_GRID})
        sweeps.append({'name': f"Bonferroni N={n} T={t}", 'base': _cell(dgp, 'bonferroni', g_max=5),
                       'parameter': 'mu2', 'values': MU2_GRID})
    return {'name': 'figure3', 'sweeps': sweeps}


def figure4() -> dict:
    sweeps = []
    for (n, t), delta in SEPARATION.items():
        for mu3, label in ((0.0, 'size'), (delta, 'power')):
            dgp = _means(n, t, [0.0, mu3 / 2.0, mu3], [1.0 / 3.0] * 3)
            base = _cell(dgp, 'small-cluster', 3, pi_bar=0.1)
            sweeps.append({'name': f"{label} N={n} T={t}", 'base': base, 'parameter': 'pi3', 'values': PI3_GRID})
    return {'name': 'figure4', 'sweeps': sweeps}


def figure5() -> dict:
    sweeps = []
    for n, t in (SMALL, LARGE):
        dgp = {'n': n, 't': t, 'kind': 'ar1_clusters', 'phis': [0.5, 0.5], 'proportions': [0.5, 0.5]}
        sweeps.append({'name': f"N={n} T={t}", 'base': _cell(dgp, 'param-ar1'), 'parameter': 'phi2',
                       'values': PHI2_GRID})
    return {'name': 'figure5', 'sweeps': sweeps}


def figure6() -> dict:
    sweeps = []
    for n in (30, 150, 600):
        for t in (2, 4, 6, 10):
            base = _cell(_means(n, t, [0.0, 0.0], [0.5, 0.5]), 'finite-t')
            sweeps.append({'name': f"N={n} T={t}", 'base': base, 'parameter': 'mu2', 'values': MU2_GRID})
    return {'name': 'figure6', 'sweeps': sweeps}


PRESETS: dict[str, Callable[[], dict]] = {
    'table1': table1,
    'table1_smoke': table1_smoke,
    'tableSA1_smoke': tablesa1_smoke,
    'figure1': figure1,
    'figure2': figure2,
    'figure3': figure3,
    'figure4': figure4,
    'figure5': figure5,
    'figure6': figure6,
}
_PRESET_KEYS = {name.lower(): name for name in PRESETS}


def load_experiment(source: Union[str, PathLike]) -> ExperimentFile:
    """Load a bundled preset by name (case-insensitive), or an experiment JSON file by path.

    Raises:
        InvalidConfig: if the file is missing, is not UTF-8 text or does not validate.
    """
    if isinstance(source, str) and source.lower() in _PRESET_KEYS:
        name = _PRESET_KEYS[source.lower()]
        logger.debug(f"using preset {name}")
        return parse_experiment(PRESETS[name]())
    path = Path(source)
    if not path.is_file():
        raise InvalidConfig(f"{source} is neither a preset ({', '.join(PRESETS)}) nor a file")
    try:
        text = path.read_text(encoding='utf-8')
    except UnicodeDecodeError as e:
        raise InvalidConfig(f"{source} is not UTF-8 text: {e.reason} at byte {e.start}") from e
    return parse_experiment(text)
