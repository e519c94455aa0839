"""Evaluation metrics for an explored idea space.

Per-cluster idea sparsity, whole-space cluster sparsity, the spider-plot
distribution score, eigenvalue dispersion profiling, and the
human-selection metrics (selection index, sampling score) with triad
sampling for similarity questionnaires.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .cluster import NOISE, Clustering
from .geometry import Polygon2D, convex_hull, polygon_area, spider_polygon_area
from .reduce import EigenSpectrum, Projection, eigen_gaps


@dataclass(frozen=True)
class ClusterGeometry:
    """Hull and area of one cluster's points in projection space."""

    cluster_id: int
    n_ideas: int
    hull: Polygon2D
    area: float


@dataclass(frozen=True)
class IdeaSpaceMetrics:
    """All distribution/dispersion measures for one idea set."""

    per_cluster_sparsity: dict[int, float]
    cluster_geometry: dict[int, ClusterGeometry]
    total_area: float
    cluster_sparsity: float | None
    distribution_score: float | None
    spider_area: float | None
    regular_polygon_area: float | None
    ds_flag: str | None
    cs_flag: str | None
    eigen_spectrum: EigenSpectrum
    eigen_gaps: list[float]
    flatness: float


def idea_sparsity(area: float, n_ideas: int) -> float:
    """Area-per-idea sparsity (a/n) * exp(-a/n).

    Peaks at 1/e when area equals the idea count; 0 for degenerate hulls.
    """
    if n_ideas < 1:
        raise ValueError("n_ideas must be >= 1")
    if area < 0:
        raise ValueError("area must be non-negative")
    ratio = area / n_ideas
    return ratio * math.exp(-ratio)


def cluster_sparsity(cluster_areas, total_area: float) -> float:
    """Fraction of the explored area not covered by cluster hulls:
    1 - sum(areas) / total_area, clamped to [0, 1].

    Noise points are excluded from ``cluster_areas`` by convention; their
    hull would overlap the real clusters.
    """
    if total_area <= 0:
        raise ValueError("total_area must be positive")
    areas = np.asarray(list(cluster_areas), dtype=float)
    if np.any(areas < 0):
        raise ValueError("cluster areas must be non-negative")
    covered = float(areas.sum()) if areas.size else 0.0
    value = 1.0 - covered / total_area
    if value < 0.0:
        warnings.warn(
            "cluster hulls overlap beyond the total hull; clamping cluster sparsity to 0",
            RuntimeWarning,
            stacklevel=2,
        )
        return 0.0
    return min(value, 1.0)


def distribution_score(spokes) -> tuple[float, float, float]:
    """(DS, spider area, regular-polygon area) for per-cluster sparsity spokes.

    The spider polygon places one spoke per cluster at uniform angles; the
    reference is the regular polygon with every spoke at max(spokes), so a
    perfectly uniform profile scores exactly 1.
    """
    r = np.asarray(list(spokes), dtype=float)
    if r.shape[0] < 3:
        raise ValueError("distribution score needs at least 3 clusters")
    peak = float(r.max())
    if peak <= 0.0:
        raise ValueError("undefined score: all sparsity spokes are zero")
    c = r.shape[0]
    spider = spider_polygon_area(r)
    regular = 0.5 * c * peak * peak * math.sin(2.0 * math.pi / c)
    return spider / regular, spider, regular


def dispersion_profile(spectrum: EigenSpectrum, top_k: int = 10) -> dict:
    """Summary of eigenvalue dispersion: leading values, gaps, flatness.

    Flatness is 1 - (first gap / (lambda_1 - lambda_k)): 1 for flat
    spectra (evenly spread exploration), near 0 when a single dominant
    gap marks a directed exploration.
    """
    values = spectrum.values[:top_k]
    if values.shape[0] < 2:
        raise ValueError("need at least 2 eigenvalues")
    gaps = np.abs(np.diff(values))
    span = float(values[0] - values[-1])
    flatness = 1.0 - float(gaps[0]) / span if span > 0 else 1.0
    return {
        "top_k": [float(v) for v in values],
        "gaps": [float(g) for g in gaps],
        "flatness": flatness,
    }


def cluster_geometries(
    projection_points: np.ndarray, clustering: Clustering
) -> dict[int, ClusterGeometry]:
    """Hull and area per label, the noise label included."""
    points = np.asarray(projection_points, dtype=float)
    out: dict[int, ClusterGeometry] = {}
    for label in sorted(int(v) for v in np.unique(clustering.labels)):
        members = points[clustering.labels == label]
        hull = convex_hull(members)
        out[label] = ClusterGeometry(
            cluster_id=label,
            n_ideas=members.shape[0],
            hull=hull,
            area=polygon_area(hull),
        )
    return out


def compute_idea_space_metrics(
    projection: Projection | np.ndarray,
    clustering: Clustering,
    spectrum: EigenSpectrum,
) -> IdeaSpaceMetrics:
    """Assemble all idea-space metrics for one projection + clustering.

    Idea sparsity spokes cover every cluster including noise; cluster
    sparsity covers real clusters only; the distribution score needs at
    least 3 spokes and is flagged absent otherwise.
    """
    points = projection.points if isinstance(projection, Projection) else np.asarray(projection)
    if points.shape[0] != clustering.labels.shape[0]:
        raise ValueError("projection and clustering row counts differ")

    geoms = cluster_geometries(points, clustering)
    total_hull = convex_hull(points)
    total_area = polygon_area(total_hull)

    spokes = {
        label: idea_sparsity(g.area, g.n_ideas) for label, g in sorted(geoms.items())
    }

    cs: float | None = None
    cs_flag: str | None = None
    real_areas = [g.area for label, g in geoms.items() if label != NOISE]
    if total_area > 0:
        cs = cluster_sparsity(real_areas, total_area)
    else:
        cs_flag = "total hull is degenerate"

    ds: float | None = None
    spider = regular = None
    ds_flag: str | None = None
    spoke_values = [spokes[label] for label in sorted(spokes)]
    if len(spoke_values) < 3:
        ds_flag = "fewer than 3 clusters"
    elif max(spoke_values) <= 0.0:
        ds_flag = "all sparsity spokes are zero"
    else:
        ds, spider, regular = distribution_score(spoke_values)

    profile = dispersion_profile(spectrum)
    return IdeaSpaceMetrics(
        per_cluster_sparsity=spokes,
        cluster_geometry=geoms,
        total_area=total_area,
        cluster_sparsity=cs,
        distribution_score=ds,
        spider_area=spider,
        regular_polygon_area=regular,
        ds_flag=ds_flag,
        cs_flag=cs_flag,
        eigen_spectrum=spectrum,
        eigen_gaps=profile["gaps"],
        flatness=profile["flatness"],
    )


def selection_index(
    records, clustering: Clustering, row_ids
) -> dict[int, int]:
    """Per-cluster count of distinct participants who picked at least one
    idea there; every label (noise included) appears, unselected ones as 0."""
    row_ids = list(row_ids)
    if len(row_ids) != clustering.labels.shape[0]:
        raise ValueError("row_ids length must match clustering size")
    label_of = {rid: int(lbl) for rid, lbl in zip(row_ids, clustering.labels)}
    si = {int(lbl): set() for lbl in np.unique(clustering.labels)}
    for record in records:
        for idea_id in record.selected_idea_ids:
            if idea_id not in label_of:
                raise ValueError(f"selection references unknown idea id {idea_id!r}")
            si[label_of[idea_id]].add(record.participant_id)
    return {label: len(participants) for label, participants in sorted(si.items())}


def sampling_score(si: dict[int, int], x_participants: int, n_clusters: int) -> float:
    """M/C where M counts non-noise clusters selected by all X
    participants and C is the non-noise cluster count."""
    if n_clusters < 1:
        raise ValueError("n_clusters must be >= 1")
    if x_participants < 1:
        raise ValueError("x_participants must be >= 1")
    full = sum(
        1 for label, count in si.items() if label != NOISE and count == x_participants
    )
    return full / n_clusters


@dataclass(frozen=True)
class SelectionRecord:
    """One participant's picks on one plot."""

    participant_id: str
    plot_id: str
    selected_idea_ids: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "selected_idea_ids", frozenset(self.selected_idea_ids))


def triad_sample(
    clustering: Clustering,
    projection: Projection | np.ndarray,
    row_ids,
    reference_idea: str,
    seed: int = 0,
) -> tuple[str, str, str]:
    """Pick comparison ideas for a reference: one from its own cluster,
    one from the nearest other cluster (by centroid), one from the
    farthest. Deterministic per seed."""
    points = projection.points if isinstance(projection, Projection) else np.asarray(projection)
    row_ids = list(row_ids)
    if reference_idea not in row_ids:
        raise ValueError(f"unknown reference idea {reference_idea!r}")
    ref_idx = row_ids.index(reference_idea)
    ref_cluster = int(clustering.labels[ref_idx])
    if ref_cluster == NOISE:
        raise ValueError("reference idea sits in the noise cluster")
    cluster_ids = clustering.cluster_ids
    if len(cluster_ids) < 3:
        raise ValueError(f"need at least 3 clusters, have {len(cluster_ids)}")

    centroids = {
        c: points[clustering.labels == c].mean(axis=0) for c in cluster_ids
    }
    same = [i for i in np.flatnonzero(clustering.labels == ref_cluster) if i != ref_idx]
    if not same:
        raise ValueError("reference cluster has no other member to sample")

    ref_centroid = centroids[ref_cluster]
    others = [c for c in cluster_ids if c != ref_cluster]
    dist = {c: float(np.linalg.norm(centroids[c] - ref_centroid)) for c in others}
    near = min(others, key=lambda c: (dist[c], c))
    far = max(others, key=lambda c: (dist[c], -c))

    rng = np.random.default_rng(seed)

    def pick(indices) -> str:
        return row_ids[int(rng.choice(np.asarray(indices)))]

    a = pick(same)
    b = pick(np.flatnonzero(clustering.labels == near))
    c = pick(np.flatnonzero(clustering.labels == far))
    return a, b, c
