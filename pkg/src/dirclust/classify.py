"""Outskirts classification, Adjusted Rand Index, spherical k-means.

Unlabelled points are assigned by block allocation: one kernel density
per cluster core is fitted once (shared bandwidth), then every point
outside the cores goes to the group with the largest density ratio
r_j(x) = f_{n,j}(x) / max_{i != j} f_{n,i}(x).  Since the top of that
ordering coincides with the plain density argmax whenever there are at
least two groups, the assignment is computed as the log-density argmax.
"""

import math
from dataclasses import dataclass

import numpy as np

from .density import KernelDensity, as_generator
from .errors import DegenerateSampleError, DimMismatchError, EmptySampleError
from .geometry import pairwise_geodesic
from .tree import CoreAssignment

_LOG_TINY = math.log(np.finfo(float).tiny)


@dataclass
class Labeling:
    """Group ids 1..k per observation."""

    labels: np.ndarray
    k: int
    single_group: bool = False
    underflow_fallbacks: int = 0


def classify(cores: CoreAssignment, sample: np.ndarray, h: float) -> Labeling:
    """Label every observation from the cluster cores.

    Core members keep their core label.  n_c = 1 is the trivial
    assignment (flagged, not an error).  Points whose density underflows
    in every group fall back to the nearest core member by geodesic
    distance; ties in the argmax break to the lowest group index.
    """
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    if sample.shape[0] != cores.labels.shape[0]:
        raise DimMismatchError("sample size does not match core assignment")
    labels = cores.labels.copy()
    if cores.n_c == 1:
        labels[:] = 1
        return Labeling(labels=labels, k=1, single_group=True)

    group_points = []
    for j in range(1, cores.n_c + 1):
        pts = sample[cores.labels == j]
        if pts.shape[0] == 0:
            raise EmptySampleError(f"cluster core {j} is empty")
        group_points.append(pts)
    models = [KernelDensity(pts, h) for pts in group_points]

    unlabelled = np.where(cores.labels == 0)[0]
    n_fallback = 0
    if unlabelled.size:
        logf = np.column_stack([m.log_density(sample[unlabelled]) for m in models])
        assigned = np.argmax(logf, axis=1) + 1  # argmax takes the first (lowest) index on ties
        underflow = logf.max(axis=1) < _LOG_TINY
        if underflow.any():
            n_fallback = int(np.count_nonzero(underflow))
            core_idx = np.where(cores.labels > 0)[0]
            dist = pairwise_geodesic(sample[unlabelled[underflow]], sample[core_idx])
            nearest = core_idx[np.argmin(dist, axis=1)]
            assigned[underflow] = cores.labels[nearest]
        labels[unlabelled] = assigned
    return Labeling(labels=labels, k=cores.n_c, underflow_fallbacks=n_fallback)


def _as_labels(x) -> np.ndarray:
    if isinstance(x, Labeling):
        return x.labels
    return np.asarray(x)


def adjusted_rand_index(a, b) -> float:
    """Hubert-Arabie ARI from the contingency table, exact integer arithmetic.

    Returns 1.0 when the correction denominator vanishes (which only
    happens for identical trivial partitions).
    """
    a = _as_labels(a)
    b = _as_labels(b)
    if a.shape[0] != b.shape[0]:
        raise DimMismatchError("labelings have different lengths")
    n = a.shape[0]
    if n < 2:
        raise ValueError("ARI needs at least two observations")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)

    def comb2(m):
        return int(m) * (int(m) - 1) // 2

    sum_cells = sum(comb2(v) for v in table.ravel())
    sum_a = sum(comb2(v) for v in table.sum(axis=1))
    sum_b = sum(comb2(v) for v in table.sum(axis=0))
    # (sum_cells - E) / (mean_ab - E) with E = sum_a sum_b / C(n,2),
    # scaled by 2 C(n,2) so both sides stay exact integers
    pairs = comb2(n)
    numerator = 2 * sum_cells * pairs - 2 * sum_a * sum_b
    denominator = pairs * (sum_a + sum_b) - 2 * sum_a * sum_b
    if denominator == 0:
        return 1.0
    return numerator / denominator


def spherical_kmeans(sample: np.ndarray, k: int, seed=None, *, n_init: int = 10,
                     max_iter: int = 100) -> Labeling:
    """k-means with cosine similarity on the unit sphere.

    Assignment maximizes x . c, recentring takes the normalized mean.
    kmeans++-style seeding on geodesic distance; the best of `n_init`
    restarts by the objective sum_i x_i . c_{label(i)} is kept.  Empty
    clusters are re-seeded with the point farthest from its centroid.
    """
    sample = np.atleast_2d(np.asarray(sample, dtype=float))
    n = sample.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > n:
        raise DegenerateSampleError(f"k = {k} exceeds sample size {n}")
    rng = as_generator(seed)

    best_labels, best_obj = None, -np.inf
    for _ in range(n_init):
        labels, obj = _kmeans_once(sample, k, rng, max_iter)
        if obj > best_obj:
            best_labels, best_obj = labels, obj
    return Labeling(labels=best_labels + 1, k=k)


def _seed_centroids(sample: np.ndarray, k: int, rng) -> np.ndarray:
    n = sample.shape[0]
    centroids = np.empty((k, sample.shape[1]))
    centroids[0] = sample[rng.integers(n)]
    d2 = pairwise_geodesic(sample, centroids[:1]).ravel() ** 2
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            centroids[j] = sample[rng.integers(n)]
        else:
            centroids[j] = sample[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, pairwise_geodesic(sample, centroids[j : j + 1]).ravel() ** 2)
    return centroids


def _kmeans_once(sample: np.ndarray, k: int, rng, max_iter: int):
    n = sample.shape[0]
    centroids = _seed_centroids(sample, k, rng)
    labels = np.full(n, -1)
    prev_obj = -np.inf
    for _ in range(max_iter):
        sims = sample @ centroids.T
        new_labels = np.argmax(sims, axis=1)
        obj = float(sims[np.arange(n), new_labels].sum())
        if obj < prev_obj - 1e-9:
            raise AssertionError("spherical k-means objective decreased")
        prev_obj = obj
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            members = sample[labels == j]
            if members.shape[0] == 0:
                worst = int(np.argmin(sims[np.arange(n), labels]))
                centroids[j] = sample[worst]
                continue
            mean = members.mean(axis=0)
            norm = np.linalg.norm(mean)
            if norm < 1e-12:
                worst = int(np.argmin(sims[np.arange(n), labels]))
                centroids[j] = sample[worst]
            else:
                centroids[j] = mean / norm
    sims = sample @ centroids.T
    labels = np.argmax(sims, axis=1)
    obj = float(sims[np.arange(n), labels].sum())
    return labels, obj
