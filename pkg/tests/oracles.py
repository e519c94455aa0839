"""Independent reference implementations used only to check the library.

Each oracle takes a deliberately different route from the code it
verifies: hull membership by exhaustive triangle-interiority tests,
polygon area by fan triangulation, DBSCAN by dense-matrix component
expansion, and the low-dimensional kernel fit by grid search.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def brute_force_hull_vertex_set(points) -> set[tuple[float, float]]:
    """Hull vertices by the all-triples interiority rule: a point is on
    the hull iff it lies strictly inside no triangle of other points.
    Assumes generic position (no duplicates, no 3 collinear)."""
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    triples = np.array(list(combinations(range(n), 3)))
    vertices = set()
    for p in range(n):
        others = triples[~np.any(triples == p, axis=1)]
        a, b, c = pts[others[:, 0]], pts[others[:, 1]], pts[others[:, 2]]
        q = pts[p]

        def orient(u, v):
            return (v[:, 0] - u[:, 0]) * (q[1] - u[:, 1]) - (v[:, 1] - u[:, 1]) * (
                q[0] - u[:, 0]
            )

        d1, d2, d3 = orient(a, b), orient(b, c), orient(c, a)
        inside = ((d1 > 0) & (d2 > 0) & (d3 > 0)) | ((d1 < 0) & (d2 < 0) & (d3 < 0))
        if not inside.any():
            vertices.add((float(q[0]), float(q[1])))
    return vertices


def fan_triangulation_area(vertices) -> float:
    """Polygon area as the sum of triangle areas fanned from vertex 0."""
    v = np.asarray(vertices, dtype=float)
    total = 0.0
    for i in range(1, v.shape[0] - 1):
        ab = v[i] - v[0]
        ac = v[i + 1] - v[0]
        total += 0.5 * abs(ab[0] * ac[1] - ab[1] * ac[0])
    return total


def reference_dbscan(points, eps: float, min_pts: int) -> np.ndarray:
    """Textbook DBSCAN on the full distance matrix.

    Core components are grown in index order (cluster ids follow the
    first core point of each component); border points go to the
    earliest-created cluster that covers them; the rest is noise (-1).
    """
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    within = dist <= eps
    core = within.sum(axis=1) >= min_pts

    labels = np.full(n, -1, dtype=int)
    cid = 0
    for i in range(n):
        if not core[i] or labels[i] != -1:
            continue
        labels[i] = cid
        stack = [i]
        while stack:
            q = stack.pop()
            for r in np.flatnonzero(within[q] & core):
                if labels[r] == -1:
                    labels[r] = cid
                    stack.append(int(r))
        cid += 1
    for p in np.flatnonzero(~core):
        covering = labels[within[p] & core]
        if covering.size:
            labels[p] = covering.min()
    return labels


def grid_search_kernel_fit(min_dist: float, spread: float = 1.0) -> tuple[float, float]:
    """(a, b) for 1/(1 + a r^(2b)) by coarse grid search plus refinement."""
    r = np.linspace(0.0, 3.0 * spread, 300)
    y = np.where(r < min_dist, 1.0, np.exp(-(r - min_dist) / spread))

    def sse(a, b):
        return float(np.sum((1.0 / (1.0 + a * r ** (2.0 * b)) - y) ** 2))

    a_lo, a_hi, b_lo, b_hi = 0.1, 5.0, 0.1, 3.0
    best = (1.0, 1.0)
    for _ in range(6):
        grid_a = np.linspace(a_lo, a_hi, 41)
        grid_b = np.linspace(b_lo, b_hi, 41)
        errors = [(sse(a, b), a, b) for a in grid_a for b in grid_b]
        _, a_best, b_best = min(errors)
        best = (a_best, b_best)
        a_step = (a_hi - a_lo) / 40
        b_step = (b_hi - b_lo) / 40
        a_lo, a_hi = a_best - 2 * a_step, a_best + 2 * a_step
        b_lo, b_hi = b_best - 2 * b_step, b_best + 2 * b_step
    return best


def quadratic_cluster_relabeling(labels_a, labels_b) -> bool:
    """True if two labelings agree up to a bijection of cluster ids
    (noise must map to noise)."""
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.shape != b.shape:
        return False
    mapping: dict[int, int] = {}
    reverse: dict[int, int] = {}
    for x, y in zip(a.tolist(), b.tolist()):
        if (x == -1) != (y == -1):
            return False
        if x == -1:
            continue
        if mapping.setdefault(x, y) != y or reverse.setdefault(y, x) != x:
            return False
    return True
