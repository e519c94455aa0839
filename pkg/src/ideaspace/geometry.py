"""Vector and planar geometry primitives.

Cosine similarity and similarity matrices over embedding rows, convex
hulls and polygon areas in projection space, spider-polygon areas for the
per-cluster sparsity plots, and seeded synthetic point scenarios for the
four dispersion/distribution regimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SCENARIO_KINDS = ("HD-UD", "HD-NUD", "LD-UD", "LD-NUD")


@dataclass(frozen=True)
class SimilarityMatrix:
    """Pairwise cosine similarities, optionally min-max normalized."""

    values: np.ndarray
    normalized: bool
    row_ids: tuple[str, ...]


@dataclass(frozen=True)
class Polygon2D:
    """A simple polygon; counter-clockwise when produced by convex_hull.

    ``degenerate`` marks hulls of fewer than 3 non-collinear points; their
    area is exactly 0.
    """

    vertices: np.ndarray
    degenerate: bool = False


def cosine_similarity(a, b) -> float:
    """Cosine of the angle between two vectors, clamped to [-1, 1]."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"vectors must share one shape, got {a.shape} and {b.shape}")
    na = math.sqrt(float(a @ a))
    nb = math.sqrt(float(b @ b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return float(np.clip(float(a @ b) / (na * nb), -1.0, 1.0))


def similarity_matrix(vectors, row_ids=None, normalize: bool = False) -> SimilarityMatrix:
    """Pairwise cosine similarity over matrix rows (or an embedding
    matrix object carrying ``vectors`` and ``row_ids``).

    With ``normalize`` the off-diagonal entries are min-max rescaled to
    [0, 1] (the diagonal stays 1); normalization is computed over
    off-diagonal entries only so the diagonal 1s do not pin the maximum.
    """
    if row_ids is None:
        row_ids = getattr(vectors, "row_ids", None)
    vectors = np.asarray(getattr(vectors, "vectors", vectors), dtype=float)
    if vectors.ndim != 2 or vectors.shape[0] < 2:
        raise ValueError("similarity_matrix needs an n x d matrix with n >= 2")
    n = vectors.shape[0]
    if row_ids is None:
        row_ids = tuple(str(i) for i in range(n))
    else:
        row_ids = tuple(row_ids)
        if len(row_ids) != n:
            raise ValueError("row_ids length must match row count")
    norms = np.linalg.norm(vectors, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ValueError(f"zero vector at row {row_ids[zero[0]]!r}")
    unit = vectors / norms[:, None]
    sims = np.clip(unit @ unit.T, -1.0, 1.0)
    sims = (sims + sims.T) / 2.0
    np.fill_diagonal(sims, 1.0)
    if normalize:
        off = ~np.eye(n, dtype=bool)
        lo, hi = sims[off].min(), sims[off].max()
        if hi > lo:
            sims_scaled = (sims - lo) / (hi - lo)
            sims = np.where(off, sims_scaled, sims)
        else:
            sims = np.where(off, 1.0, sims)
        np.fill_diagonal(sims, 1.0)
    return SimilarityMatrix(values=sims, normalized=normalize, row_ids=row_ids)


def convex_hull(points) -> Polygon2D:
    """Convex hull by Andrew's monotone chain, counter-clockwise.

    Collinear boundary points are excluded. Fewer than 3 distinct
    non-collinear points yield a degenerate polygon with area 0.
    """
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return Polygon2D(vertices=np.empty((0, 2)), degenerate=True)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an n x 2 array")
    uniq = np.unique(pts, axis=0)  # lexicographic sort by (x, y)
    if uniq.shape[0] < 3:
        return Polygon2D(vertices=uniq, degenerate=True)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[np.ndarray] = []
    for p in uniq:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[np.ndarray] = []
    for p in uniq[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = np.array(lower[:-1] + upper[:-1])
    if hull.shape[0] < 3:
        return Polygon2D(vertices=hull, degenerate=True)
    return Polygon2D(vertices=hull, degenerate=False)


def polygon_area(polygon: Polygon2D) -> float:
    """Area by the shoelace formula; degenerate polygons have area 0."""
    if polygon.degenerate or polygon.vertices.shape[0] < 3:
        return 0.0
    v = polygon.vertices
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def point_in_polygon(point, polygon: Polygon2D, tol: float = 1e-9) -> bool:
    """True if the point is inside or on a convex CCW polygon."""
    if polygon.degenerate:
        return False
    v = polygon.vertices
    nxt = np.roll(v, -1, axis=0)
    cross = (nxt[:, 0] - v[:, 0]) * (point[1] - v[:, 1]) - (nxt[:, 1] - v[:, 1]) * (
        point[0] - v[:, 0]
    )
    return bool(np.all(cross >= -tol))


def spider_polygon_area(spokes) -> float:
    """Area of the polygon whose k-th vertex sits at polar (r_k, 2*pi*k/C).

    With equal spokes r this is the regular C-gon of circumradius r:
    C * r^2 * sin(2*pi/C) / 2.
    """
    r = np.asarray(spokes, dtype=float)
    if r.ndim != 1 or r.shape[0] < 3:
        raise ValueError("spider polygon needs at least 3 spokes")
    if np.any(r < 0):
        raise ValueError("spoke lengths must be non-negative")
    c = r.shape[0]
    s = math.sin(2.0 * math.pi / c)
    return 0.5 * math.fsum(float(r[k]) * float(r[(k + 1) % c]) * s for k in range(c))


def synthesize_point_scenario(kind: str, n: int, seed: int) -> np.ndarray:
    """Seeded synthetic 2D point sets for the four exploration regimes.

    High/low dispersion controls the extent ([-10, 10]^2 vs [-1, 1]^2);
    uniform/non-uniform distribution controls whether points are spread
    evenly or drawn from 5 Gaussian blobs.
    """
    if kind not in SCENARIO_KINDS:
        raise ValueError(f"kind must be one of {SCENARIO_KINDS}, got {kind!r}")
    if n < 10:
        raise ValueError("n must be at least 10")
    rng = np.random.default_rng(seed)
    half = 10.0 if kind.startswith("HD") else 1.0
    if kind.endswith("-UD"):
        return rng.uniform(-half, half, size=(n, 2))
    # Non-uniform: 5 blobs whose centers stay inside the box with margin
    # for the blob radius; rejection sampling keeps the centers spread out
    # so the blobs do not collapse into one another.
    n_blobs = 5
    std = 0.08 * half
    min_sep = 0.55 * half
    centers = [rng.uniform(-0.8 * half, 0.8 * half, size=2)]
    while len(centers) < n_blobs:
        candidate = rng.uniform(-0.8 * half, 0.8 * half, size=2)
        if all(np.linalg.norm(candidate - c) >= min_sep for c in centers):
            centers.append(candidate)
    centers = np.asarray(centers)
    assign = rng.integers(n_blobs, size=n)
    return centers[assign] + rng.normal(scale=std, size=(n, 2))
