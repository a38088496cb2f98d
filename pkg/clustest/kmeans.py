"""K-means estimation of cluster assignments and cluster means.

Clusters are fit on the unit time-means of a panel view. The panel criterion
``(1/NT) sum_i sum_t ||Y_it - mu_{g_i}||^2`` equals the point-set criterion on the unit means plus the
within-unit variation, which does not depend on the assignments, so both problems share their minimizers.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from tqdm import tqdm

from .errors import EmptyGroupInP, NonFiniteValue, TooFewDistinctPoints
from .panel import PanelView, unit_means, within_unit_variation
from .statfun import substream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PointSet:
    """``N`` points in ``d`` dimensions, e.g. unit means or per-unit parameter estimates."""
    coordinates: np.ndarray

    def __post_init__(self) -> None:
        coords = np.array(self.coordinates, dtype=np.float64)
        if coords.ndim == 1:
            coords = coords[:, None]
        if coords.ndim != 2 or coords.shape[0] == 0:
            raise ValueError(f"coordinates must be a non-empty (N, d) matrix, got shape {coords.shape}")
        if not np.all(np.isfinite(coords)):
            raise NonFiniteValue("point coordinates must be finite")
        coords.flags.writeable = False
        object.__setattr__(self, 'coordinates', coords)

    @property
    def n_points(self) -> int:
        return self.coordinates.shape[0]

    @property
    def dim(self) -> int:
        return self.coordinates.shape[1]


@dataclass(frozen=True)
class KMeansOptions:
    """Options of the k-means estimator.

    Args:
        restarts:
            Number of k-means++ initializations. The fit with the lowest objective is kept;
            ties go to the earliest restart.
        max_iterations:
            Maximum number of Lloyd iterations per restart.
        tolerance:
            Lloyd stops once the objective improves by less than this amount.
        seed:
            Master seed. Restart ``r`` draws from ``substream(seed, r)``.
        min_proportion:
            Threshold ``pi_bar`` below which a cluster counts as small. It is not enforced while fitting.
        progress:
            Show a progress bar over the restarts.
    """
    restarts: int = 100
    max_iterations: int = 300
    tolerance: float = 1e-10
    seed: int = 0
    min_proportion: float = 0.1
    progress: bool = False

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")
        if not 0.0 <= self.min_proportion < 0.5:
            raise ValueError("min_proportion must lie in [0, 0.5)")


@dataclass(frozen=True)
class ClusterFit:
    """Result of a k-means fit.

    Groups are labelled ``0..G-1`` in canonical order: descending proportion,
    ties broken by the smallest member index.

    Args:
        assignments:
            Group label of each unit, shape ``(N,)``.
        means:
            Group means, shape ``(G, d)``.
        proportions:
            Share of units in each group, shape ``(G,)``.
        objective:
            Mean squared deviation from the assigned group means.
        restarts_used:
            Number of restarts that produced a fit.
        iterations:
            Lloyd iterations of the selected restart.
    """
    assignments: np.ndarray
    means: np.ndarray
    proportions: np.ndarray
    objective: float
    restarts_used: int = 1
    iterations: int = 0

    @property
    def n_groups(self) -> int:
        return self.means.shape[0]

    @property
    def group_sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.n_groups)

    def members(self, group: int) -> np.ndarray:
        """Indices of the units assigned to ``group``."""
        return np.flatnonzero(self.assignments == group)


def _as_points(points: PointSet | np.ndarray) -> np.ndarray:
    return points.coordinates if isinstance(points, PointSet) else PointSet(points).coordinates


def _sq_distances(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    return np.sum((x[:, None, :] - centers[None, :, :]) ** 2, axis=2)


def kmeans_objective(points: PointSet | np.ndarray, means: np.ndarray, assignments: np.ndarray) -> float:
    """Mean squared Euclidean distance of each point to the mean of its group."""
    x = _as_points(points)
    return float(np.mean(np.sum((x - np.asarray(means)[assignments]) ** 2, axis=1)))


def kmeanspp_seed(points: PointSet | np.ndarray, g: int, rng: np.random.Generator) -> np.ndarray:
    """Choose ``g`` initial centers by k-means++.

    The first center is a uniformly drawn point; each further center is drawn with probability
    proportional to the squared distance to the nearest center chosen so far.

    Raises:
        TooFewDistinctPoints: if the points have fewer than ``g`` distinct rows.
    """
    x = _as_points(points)
    if g < 1:
        raise ValueError("g must be positive")
    n_distinct = len(np.unique(x, axis=0))
    if n_distinct < g:
        raise TooFewDistinctPoints(f"{n_distinct} distinct points cannot seed {g} groups")

    n = x.shape[0]
    centers = np.empty((g, x.shape[1]), dtype=np.float64)
    centers[0] = x[rng.integers(n)]
    closest = np.sum((x - centers[0]) ** 2, axis=1)
    for j in range(1, g):
        idx = rng.choice(n, p=closest / closest.sum())
        centers[j] = x[idx]
        closest = np.minimum(closest, np.sum((x - centers[j]) ** 2, axis=1))
    return centers


def _reseed_empty(x: np.ndarray, centers: np.ndarray, labels: np.ndarray, empty: np.ndarray) -> np.ndarray:
    """Move each empty center onto a point far from its current center, one distinct point per center."""
    dist = np.sum((x - centers[labels]) ** 2, axis=1)
    order = np.argsort(-dist, kind='stable')
    centers = centers.copy()
    for k, idx in zip(empty, order):
        if dist[idx] <= 0.0:
            break
        centers[k] = x[idx]
    return centers


def _update_centers(x: np.ndarray, labels: np.ndarray, centers: np.ndarray) -> np.ndarray:
    g = centers.shape[0]
    counts = np.bincount(labels, minlength=g)
    sums = np.zeros_like(centers)
    np.add.at(sums, labels, x)
    updated = centers.copy()
    nonempty = counts > 0
    updated[nonempty] = sums[nonempty] / counts[nonempty, None]
    return updated


def relabel_canonical(fit: ClusterFit) -> ClusterFit:
    """Relabel groups by descending proportion, ties broken by ascending smallest member index."""
    g = fit.n_groups
    counts = fit.group_sizes
    n = len(fit.assignments)
    first = np.full(g, n, dtype=np.int64)
    for k in range(g):
        members = fit.members(k)
        if len(members) > 0:
            first[k] = members[0]
    order = sorted(range(g), key=lambda k: (-counts[k], first[k], k))
    permutation = np.empty(g, dtype=np.int64)
    permutation[order] = np.arange(g)
    return permute_labels(fit, permutation)


def permute_labels(fit: ClusterFit, permutation: Sequence[int] | np.ndarray) -> ClusterFit:
    """Rename group ``k`` to ``permutation[k]``."""
    permutation = np.asarray(permutation, dtype=np.int64)
    g = fit.n_groups
    if sorted(permutation.tolist()) != list(range(g)):
        raise ValueError(f"{permutation.tolist()} is not a permutation of 0..{g - 1}")
    means = np.empty_like(fit.means)
    means[permutation] = fit.means
    proportions = np.empty_like(fit.proportions)
    proportions[permutation] = fit.proportions
    return replace(fit, assignments=permutation[fit.assignments], means=means, proportions=proportions)


def lloyd(points: PointSet | np.ndarray, centers: np.ndarray, opts: KMeansOptions | None = None) -> ClusterFit:
    """Run Lloyd iterations from the given initial centers.

    Each iteration assigns every point to its nearest center (ties go to the lowest group index),
    reseeds empty groups on far-away points, and moves every non-empty center to the mean of its members.
    Iteration stops when the objective improves by less than ``opts.tolerance`` with no empty group,
    or after ``opts.max_iterations`` iterations.

    Returns:
        A canonically labelled ``ClusterFit`` whose means are the member means of its assignments.
    """
    opts = opts or KMeansOptions()
    x = _as_points(points)
    centers = np.array(centers, dtype=np.float64)
    if centers.ndim == 1:
        centers = centers[:, None]
    if not np.all(np.isfinite(centers)):
        raise NonFiniteValue("initial centers must be finite")
    g = centers.shape[0]

    previous = np.inf
    labels = np.zeros(x.shape[0], dtype=np.int64)
    objective = np.inf
    iteration = 0
    for iteration in range(1, opts.max_iterations + 1):
        labels = np.argmin(_sq_distances(x, centers), axis=1)
        empty = np.flatnonzero(np.bincount(labels, minlength=g) == 0)
        if len(empty) > 0:
            centers = _reseed_empty(x, centers, labels, empty)
            labels = np.argmin(_sq_distances(x, centers), axis=1)
        centers = _update_centers(x, labels, centers)
        objective = kmeans_objective(x, centers, labels)
        assert objective <= previous + 1e-9 * max(1.0, objective), \
            f"k-means objective increased from {previous} to {objective}"
        converged = previous - objective < opts.tolerance and len(empty) == 0
        previous = objective
        if converged:
            break

    proportions = np.bincount(labels, minlength=g) / x.shape[0]
    fit = ClusterFit(
        assignments=labels.astype(np.int64), means=centers, proportions=proportions,
        objective=float(objective), restarts_used=1, iterations=iteration)
    return relabel_canonical(fit)


def fit_point_clusters(points: PointSet | np.ndarray, g: int, opts: KMeansOptions | None = None) -> ClusterFit:
    """Fit ``g`` clusters to a point set, keeping the best of ``opts.restarts`` k-means++ restarts.

    Raises:
        TooFewDistinctPoints: if every restart failed to seed ``g`` distinct centers.
    """
    opts = opts or KMeansOptions()
    x = _as_points(points)
    if g < 1:
        raise ValueError("g must be positive")
    best: ClusterFit | None = None
    used = 0
    last_error: TooFewDistinctPoints | None = None
    restarts = range(opts.restarts)
    if opts.progress:
        restarts = tqdm(restarts, total=opts.restarts, desc=f"k-means G={g}")
    for r in restarts:
        try:
            centers = kmeanspp_seed(x, g, substream(opts.seed, r))
        except TooFewDistinctPoints as e:
            last_error = e
            continue
        fit = lloyd(x, centers, opts)
        used += 1
        if best is None or fit.objective < best.objective:
            best = fit
    if best is None:
        assert last_error is not None
        raise last_error
    logger.debug(f"k-means G={g}: objective {best.objective:.6g} after {used} restarts")
    return replace(best, restarts_used=used)


def fit_clusters(view: PanelView, g: int, opts: KMeansOptions | None = None) -> ClusterFit:
    """Fit ``g`` clusters to the units of a panel view.

    Clusters are fit on the unit means of the view; the reported objective adds the within-unit
    variation so that it equals the panel criterion ``(1/(N|view|)) sum_i sum_t ||Y_it - mu_{g_i}||^2``.
    """
    fit = fit_point_clusters(PointSet(unit_means(view)), g, opts)
    return replace(fit, objective=fit.objective + within_unit_variation(view))


def group_means_on(view: PanelView, assignments: np.ndarray, n_groups: int | None = None) -> np.ndarray:
    """Pooled mean of the observations of each group over the periods of the view, shape ``(G, d)``.

    Units labelled ``n_groups`` or above are left out.

    Raises:
        EmptyGroupInP: if a group has no member.
    """
    assignments = np.asarray(assignments, dtype=np.int64)
    if len(assignments) != view.n_units:
        raise ValueError("assignments must have one entry per unit")
    g = int(assignments.max()) + 1 if n_groups is None else n_groups
    counts = np.bincount(assignments, minlength=g)[:g]
    if np.any(counts == 0):
        raise EmptyGroupInP(f"groups {np.flatnonzero(counts == 0).tolist()} have no member")
    keep = assignments < g
    sums = np.zeros((g, view.dim))
    np.add.at(sums, assignments[keep], unit_means(view)[keep])
    return sums / counts[:, None]
