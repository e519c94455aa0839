"""Density-based clustering of 2D projections.

Classical DBSCAN with deterministic tie-breaking plus a k-distance elbow
heuristic for choosing eps. Points that belong to no dense cluster keep
the reserved noise label -1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NOISE = -1

DEFAULT_MIN_PTS = 5


@dataclass(frozen=True)
class Clustering:
    """Per-point integer labels; -1 is the noise label."""

    labels: np.ndarray
    eps: float
    min_pts: int

    @property
    def cluster_ids(self) -> list[int]:
        return sorted(int(c) for c in np.unique(self.labels) if c != NOISE)

    @property
    def n_clusters(self) -> int:
        return len(self.cluster_ids)

    def members(self, cluster_id: int) -> np.ndarray:
        return np.flatnonzero(self.labels == cluster_id)


def _pairwise_distances(points: np.ndarray) -> np.ndarray:
    sq = np.sum(points**2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (points @ points.T)
    return np.sqrt(np.maximum(d2, 0.0))


def dbscan(points, eps: float, min_pts: int = DEFAULT_MIN_PTS) -> Clustering:
    """Cluster points with Euclidean DBSCAN.

    A point is core iff at least min_pts points (itself included) lie
    within eps. Clusters are grown from core points in index order, so a
    border point reachable from several clusters goes to the cluster
    created first; remaining points are noise. Cluster ids count up from
    0 in order of each cluster's first core point.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError("points must be an n x 2 array")
    if not np.all(np.isfinite(points)):
        raise ValueError("points contain non-finite coordinates")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if min_pts < 1:
        raise ValueError("min_pts must be >= 1")

    n = points.shape[0]
    dist = _pairwise_distances(points)
    within = dist <= eps
    neighbor_counts = within.sum(axis=1)
    core = neighbor_counts >= min_pts

    labels = np.full(n, NOISE, dtype=int)
    cluster_id = 0
    for seed in range(n):
        if not core[seed] or labels[seed] != NOISE:
            continue
        labels[seed] = cluster_id
        queue = [seed]
        while queue:
            q = queue.pop(0)
            for nb in np.flatnonzero(within[q]):
                if labels[nb] == NOISE:
                    labels[nb] = cluster_id
                    if core[nb]:
                        queue.append(int(nb))
        cluster_id += 1
    return Clustering(labels=labels, eps=float(eps), min_pts=int(min_pts))


def kth_neighbor_distances(points, k: int) -> np.ndarray:
    """Distance to the k-th nearest neighbor (self excluded), per point."""
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if n <= k:
        raise ValueError(f"need more than k={k} points, got {n}")
    dist = _pairwise_distances(points)
    dist_sorted = np.sort(dist, axis=1)
    return dist_sorted[:, k]  # column 0 is the point itself


def suggest_eps(points, k: int = DEFAULT_MIN_PTS - 1) -> float:
    """Advisory eps from the k-distance elbow.

    Sorts every point's k-th neighbor distance descending and returns
    the value where the discrete second difference is largest, i.e. the
    sharpest bend of the curve.
    """
    curve = np.sort(kth_neighbor_distances(points, k))[::-1]
    if curve.shape[0] < 3:
        return float(curve[-1])
    second = curve[:-2] + curve[2:] - 2.0 * curve[1:-1]
    idx = int(np.argmax(second)) + 1
    return float(curve[idx])
