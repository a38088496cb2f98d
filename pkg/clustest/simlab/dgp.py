from __future__ import annotations

import numpy as np

from ..enum import DGPKind, ResidualType
from ..panel import Panel
from ..statfun import HETEROGENEOUS_FAMILIES, sample_array, substream
from .config import DGPSpec


def group_counts(n: int, proportions: list[float]) -> np.ndarray:
    """Largest-remainder rounding of ``n * proportions`` to integers summing to ``n``.

    Ties in the remainders go to the earlier group.

    Examples:
        >>> from clustest.simlab import group_counts
        >>> group_counts(30, [0.495, 0.495, 0.01]).tolist()
        [15, 15, 0]
    """
    raw = n * np.asarray(proportions, dtype=np.float64)
    counts = np.floor(raw).astype(np.int64)
    missing = n - int(counts.sum())
    order = np.argsort(-(raw - counts), kind='stable')
    counts[order[:missing]] += 1
    return counts


def true_assignments(spec: DGPSpec) -> np.ndarray:
    """Block assignment of the ``spec.n`` units to the true groups: the first ``n_0`` units form group 0, etc."""
    if spec.kind == DGPKind.NULL_MEANS:
        return np.zeros(spec.n, dtype=np.int64)
    counts = group_counts(spec.n, spec.proportions)
    return np.repeat(np.arange(len(counts)), counts)


def _residuals(spec: DGPSpec, rng: np.random.Generator) -> np.ndarray:
    periods = spec.t + (1 if spec.ma_theta != 0.0 else 0)
    if spec.residuals == ResidualType.NORMAL:
        u = rng.standard_normal((spec.n, periods, spec.d))
    else:
        # each unit keeps one family for all periods; families are redrawn every replication
        families = rng.integers(len(HETEROGENEOUS_FAMILIES), size=spec.n)
        u = np.stack([sample_array(HETEROGENEOUS_FAMILIES[k], rng, (periods, spec.d)) for k in families])
    if spec.ma_theta != 0.0:
        return u[:, 1:, :] + spec.ma_theta * u[:, :-1, :]
    return u


def gen_panel(spec: DGPSpec, rep_index: int, cell_id: int = 0, attempt: int = 0) -> Panel:
    """Draw one panel from ``spec``.

    The draw depends only on ``(spec.master_seed, cell_id, rep_index, attempt)``, never on the order in
    which replications run.

    Args:
        spec:
            The data generating process.
        rep_index:
            Replication index within the cell.
        cell_id:
            Index of the experiment cell.
        attempt:
            Redraw counter, used when a replication has to be repeated.
    """
    rng = substream(spec.master_seed, cell_id, rep_index, attempt)
    eps = _residuals(spec, rng)
    labels = true_assignments(spec)
    if spec.kind == DGPKind.NULL_MEANS:
        values = eps
    elif spec.kind == DGPKind.CLUSTER_MEANS:
        means = np.asarray(spec.means, dtype=np.float64)
        values = means[labels][:, None, :] + eps
    else:
        phi = np.asarray(spec.phis, dtype=np.float64)[labels]
        values = np.empty_like(eps)
        values[:, 0, 0] = rng.standard_normal(spec.n) / np.sqrt(1.0 - phi ** 2)
        for t in range(1, spec.t):
            values[:, t, 0] = phi * values[:, t - 1, 0] + eps[:, t, 0]
    return Panel.from_array(values)
