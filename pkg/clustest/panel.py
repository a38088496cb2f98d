from __future__ import annotations

import logging
from dataclasses import dataclass
from os import PathLike
from typing import IO, Sequence, Union

import numpy as np
import pandas as pd

from .enum import SplitMode
from .errors import (DegenerateAttribute, DuplicateCell, IncompletePanel, InsufficientUnits, InvalidSplit,
                     MalformedRow, NonFiniteValue, PanelTooShort)

logger = logging.getLogger(__name__)

CSVSource = Union[str, PathLike, IO]


@dataclass(frozen=True)
class Panel:
    """A balanced panel of ``N`` units observed over ``T`` periods in ``d`` dimensions.

    The panel is immutable. ``values`` is stored as a read-only ``float64`` array of shape ``(N, T, d)``.

    Args:
        values:
            Observations indexed ``(unit, period, dimension)``. A two-dimensional array is read as ``d = 1``.
        unit_labels:
            Optional labels of the units. Defaults to ``'0'``, ``'1'``, ...
        period_labels:
            Optional labels of the periods. Defaults to ``'0'``, ``'1'``, ...

    Examples:
        >>> import numpy as np
        >>> from clustest import Panel
        >>> panel = Panel(np.arange(8.0).reshape(2, 4))
        >>> panel.n_units, panel.n_periods, panel.dim
        (2, 4, 1)
    """
    values: np.ndarray
    unit_labels: tuple[str, ...] = ()
    period_labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim == 2:
            values = values[:, :, None]
        if values.ndim != 3:
            raise ValueError(f"values must have shape (N, T, d), got {values.shape}")
        n, t, d = values.shape
        if n < 2:
            raise InsufficientUnits(f"a panel needs at least 2 units, got {n}")
        if t < 2:
            raise PanelTooShort(f"a panel needs at least 2 periods, got {t}")
        if d < 1:
            raise ValueError("a panel needs at least one dimension")
        if not np.all(np.isfinite(values)):
            raise NonFiniteValue("panel values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)

        units = tuple(str(u) for u in self.unit_labels) if self.unit_labels else tuple(str(i) for i in range(n))
        periods = tuple(str(p) for p in self.period_labels) if self.period_labels \
            else tuple(str(i) for i in range(t))
        if len(units) != n or len(periods) != t:
            raise ValueError("label counts must match the panel shape")
        object.__setattr__(self, 'unit_labels', units)
        object.__setattr__(self, 'period_labels', periods)

    @classmethod
    def from_array(
        cls,
        values: np.ndarray,
        unit_labels: Sequence[str] | None = None,
        period_labels: Sequence[str] | None = None,
    ) -> "Panel":
        """Create a panel from an ``(N, T)`` or ``(N, T, d)`` array."""
        return cls(
            np.asarray(values),
            tuple(unit_labels) if unit_labels is not None else (),
            tuple(period_labels) if period_labels is not None else ())

    @property
    def n_units(self) -> int:
        return self.values.shape[0]

    @property
    def n_periods(self) -> int:
        return self.values.shape[1]

    @property
    def dim(self) -> int:
        return self.values.shape[2]

    def view(self, periods: Sequence[int] | np.ndarray | None = None) -> "PanelView":
        """Return a read-only view restricted to the given (0-based) periods. ``None`` selects all periods."""
        if periods is None:
            periods = range(self.n_periods)
        return PanelView(self, tuple(int(p) for p in periods))

    def with_values(self, values: np.ndarray) -> "Panel":
        """Return a panel with the same labels and new values of the same shape."""
        return Panel(np.asarray(values).reshape(self.values.shape), self.unit_labels, self.period_labels)


@dataclass(frozen=True)
class PanelView:
    """A read-only selection of periods of a ``Panel``."""
    parent: Panel
    periods: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.periods) == 0:
            raise InvalidSplit("a panel view needs at least one period")
        if any(p < 0 or p >= self.parent.n_periods for p in self.periods):
            raise InvalidSplit(f"periods {self.periods} out of range for T={self.parent.n_periods}")

    @property
    def values(self) -> np.ndarray:
        """Observations of the view, shape ``(N, len(periods), d)``."""
        return self.parent.values[:, list(self.periods), :]

    @property
    def n_units(self) -> int:
        return self.parent.n_units

    @property
    def n_periods(self) -> int:
        return len(self.periods)

    @property
    def dim(self) -> int:
        return self.parent.dim


@dataclass(frozen=True)
class SplitSpec:
    """Disjoint 0-based period index sets for the assignment sample ``R`` and the testing sample ``P``.

    Args:
        r_indices:
            Periods used to estimate the cluster assignments.
        p_indices:
            Periods used to test the differences between the clusters.
        gap:
            Number of periods dropped between ``R`` and ``P`` to absorb ``M``-dependence.
            A positive gap requires ``max(R) + gap < min(P)``.
    """
    r_indices: tuple[int, ...]
    p_indices: tuple[int, ...]
    gap: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, 'r_indices', tuple(sorted(int(i) for i in self.r_indices)))
        object.__setattr__(self, 'p_indices', tuple(sorted(int(i) for i in self.p_indices)))

    def validate(self, n_periods: int) -> None:
        """Raise ``InvalidSplit`` if the split is not valid for a panel with ``n_periods`` periods."""
        r, p = set(self.r_indices), set(self.p_indices)
        if not r or not p:
            raise InvalidSplit("both R and P must be non-empty")
        if len(r) != len(self.r_indices) or len(p) != len(self.p_indices):
            raise InvalidSplit("R and P must not contain repeated periods")
        if r & p:
            raise InvalidSplit(f"R and P overlap in periods {sorted(r & p)}")
        if min(r | p) < 0 or max(r | p) >= n_periods:
            raise InvalidSplit(f"split indices out of range for T={n_periods}")
        if self.gap < 0:
            raise InvalidSplit("gap must be non-negative")
        if self.gap > 0 and not max(r) + self.gap < min(p):
            raise InvalidSplit(f"gap {self.gap} requires max(R) + gap < min(P)")


SplitArg = Union[SplitMode, str, SplitSpec]


def make_split(n_periods: int, mode: SplitArg = SplitMode.HALVES, gap: int = 0) -> SplitSpec:
    """Build the ``SplitSpec`` for a split mode on a panel with ``n_periods`` periods."""
    if isinstance(mode, SplitSpec):
        mode.validate(n_periods)
        return mode
    if isinstance(mode, str):
        mode = SplitMode.from_string(mode)
    if n_periods < 2:
        raise PanelTooShort(f"splitting needs at least 2 periods, got {n_periods}")
    if mode == SplitMode.HALVES:
        half = n_periods // 2
        if half <= gap:
            raise PanelTooShort(f"halves with gap {gap} need floor(T/2) > {gap}, got T={n_periods}")
        spec = SplitSpec(tuple(range(half - gap)), tuple(range(half, n_periods)), gap)
    elif mode == SplitMode.INTERLEAVED:
        if gap != 0:
            raise InvalidSplit("a gap is only supported for the halves split")
        spec = SplitSpec(tuple(range(0, n_periods, 2)), tuple(range(1, n_periods, 2)))
    else:
        raise ValueError(f"Unknown split mode: {mode}")
    spec.validate(n_periods)
    return spec


def split_panel(panel: Panel, mode: SplitArg = SplitMode.HALVES, gap: int = 0) -> tuple[PanelView, PanelView]:
    """Split a panel along time into the ``R`` and ``P`` views.

    Args:
        panel:
            The panel to split.
        mode:
            ``SplitMode.HALVES`` (default), ``SplitMode.INTERLEAVED``, their string names,
            or an explicit ``SplitSpec`` used verbatim.
        gap:
            Number of periods dropped at the end of ``R`` (halves only).

    Returns:
        The pair ``(view_r, view_p)``.

    Examples:
        >>> import numpy as np
        >>> from clustest import Panel, split_panel
        >>> r, p = split_panel(Panel(np.zeros((2, 10))), 'halves', gap=2)
        >>> r.periods, p.periods
        ((0, 1, 2), (5, 6, 7, 8, 9))
    """
    spec = make_split(panel.n_periods, mode, gap)
    return panel.view(spec.r_indices), panel.view(spec.p_indices)


def unit_means(view: PanelView) -> np.ndarray:
    """Time average of each unit over the periods of the view, shape ``(N, d)``."""
    return view.values.mean(axis=1)


def within_unit_variation(view: PanelView) -> float:
    """Average squared deviation of the observations from their unit means over the view."""
    values = view.values
    dev = values - values.mean(axis=1, keepdims=True)
    return float(np.sum(dev ** 2) / (view.n_units * view.n_periods))


def standardize(view: PanelView) -> np.ndarray:
    """Standardize the unit means of a view to z-scores across units.

    Each column of the result has mean zero and sample standard deviation one (divisor ``N - 1``).

    Raises:
        DegenerateAttribute: if a column of unit means has zero variance.
    """
    means = unit_means(view)
    return zscore_columns(means)


def zscore_columns(matrix: np.ndarray) -> np.ndarray:
    """Demean each column and divide it by its sample standard deviation (divisor ``N - 1``)."""
    matrix = np.asarray(matrix, dtype=np.float64)
    center = matrix.mean(axis=0)
    scale = matrix.std(axis=0, ddof=1)
    degenerate = ~(scale > 1e-14 * np.maximum(1.0, np.abs(center)))
    if np.any(degenerate):
        raise DegenerateAttribute(f"zero variance across units in columns {np.flatnonzero(degenerate).tolist()}")
    return (matrix - center) / scale


def _sorted_periods(labels: Sequence[str]) -> list[str]:
    try:
        return sorted(labels, key=lambda s: float(s))
    except ValueError:
        return sorted(labels)


NON_FINITE_TOKENS = frozenset({'nan', 'inf', 'infinity'})


def _parse_real(token: str) -> float:
    """Parse one value cell with ``float``, so a panel written by ``write_panel`` reloads bit for bit."""
    token = token.strip()
    if token.lower().lstrip('+-') in NON_FINITE_TOKENS:
        raise NonFiniteValue(f"CSV contains the non-finite value {token!r}")
    if '_' in token:
        raise MalformedRow(f"value {token!r} does not parse as a real number")
    try:
        return float(token)
    except ValueError as e:
        raise MalformedRow(f"value {token!r} does not parse as a real number") from e


def load_panel(source: CSVSource) -> Panel:
    """Load a panel from long-format CSV text with header ``unit,period,y1[,y2,...,yd]``.

    Units are ordered by first appearance and periods are sorted ascending
    (numerically when every period label is a number).

    Args:
        source:
            A path or a readable text / byte stream.

    Raises:
        MalformedRow: if the header is wrong, a row is ragged, or a value does not parse as a real.
        DuplicateCell: if a ``(unit, period)`` pair appears more than once.
        IncompletePanel: if a ``(unit, period)`` combination is missing.
        NonFiniteValue: if a value is ``nan`` or infinite.
    """
    # header=None keeps pandas from promoting a longer first row to an index column
    try:
        raw = pd.read_csv(source, header=None, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.ParserError as e:
        raise MalformedRow(f"ragged CSV row: {e}") from e
    except pd.errors.EmptyDataError as e:
        raise MalformedRow("empty CSV input") from e
    except UnicodeDecodeError as e:
        raise MalformedRow(f"CSV input is not UTF-8 text: {e.reason} at byte {e.start}") from e

    columns = [str(c).strip() for c in raw.iloc[0].fillna('')]
    value_columns = columns[2:]
    expected = ['unit', 'period'] + [f'y{k + 1}' for k in range(len(value_columns))]
    if len(columns) < 3 or columns != expected:
        raise MalformedRow(f"header must be 'unit,period,y1,...,yd', got {','.join(columns)}")
    frame = raw.iloc[1:].reset_index(drop=True)
    frame.columns = columns
    if len(frame) == 0:
        raise IncompletePanel("CSV has a header but no rows")
    short = frame.isna().any(axis=1).to_numpy() | (frame == '').any(axis=1).to_numpy()
    if np.any(short):
        bad = int(np.flatnonzero(short)[0])
        raise MalformedRow(f"row {bad + 2} has too few fields")

    units = frame['unit'].str.strip()
    periods = frame['period'].str.strip()
    numbers = frame[value_columns].apply(lambda col: col.map(_parse_real))
    if not np.all(np.isfinite(numbers.to_numpy(dtype=np.float64))):
        raise NonFiniteValue("CSV contains a value that overflows to infinity")

    keys = pd.DataFrame({'unit': units, 'period': periods})
    duplicated = keys.duplicated()
    if duplicated.any():
        row = keys[duplicated].iloc[0]
        raise DuplicateCell(f"duplicate cell (unit={row['unit']}, period={row['period']})")

    unit_order = list(pd.unique(units))
    period_order = _sorted_periods(list(pd.unique(periods)))
    n, t, d = len(unit_order), len(period_order), len(value_columns)
    if n * t != len(frame):
        raise IncompletePanel(f"expected {n * t} cells for {n} units x {t} periods, got {len(frame)}")

    unit_index = {u: i for i, u in enumerate(unit_order)}
    period_index = {p: j for j, p in enumerate(period_order)}
    values = np.empty((n, t, d), dtype=np.float64)
    values[units.map(unit_index).to_numpy(), periods.map(period_index).to_numpy(), :] = \
        numbers.to_numpy(dtype=np.float64)
    logger.debug(f"loaded panel N={n} T={t} d={d}")
    return Panel(values, tuple(unit_order), tuple(period_order))


def write_panel(panel: Panel, dest: CSVSource) -> None:
    """Write a panel as long-format CSV readable by ``load_panel``."""
    n, t, d = panel.values.shape
    frame = pd.DataFrame({
        'unit': np.repeat(panel.unit_labels, t),
        'period': np.tile(panel.period_labels, n),
    })
    flat = panel.values.reshape(n * t, d)
    for k in range(d):
        frame[f'y{k + 1}'] = flat[:, k]
    frame.to_csv(dest, index=False, float_format='%.17g')
