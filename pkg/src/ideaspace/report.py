"""Pipeline orchestration and reporting.

Runs embed -> similarity -> projection -> clustering -> metrics per idea
set, serializes self-contained JSON analysis reports, and renders the
standard plots (cluster scatter, similarity heatmap, sparsity spider,
eigenvalue lines) as standalone SVG documents.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .cluster import NOISE, Clustering, dbscan, suggest_eps
from .corpus import DEFAULT_TEMPLATE, IdeaSet, corpus_texts, parse_corpus, serialize_corpus
from .embed import EmbedderConfig, EmbeddingMatrix, VectorCache, embed_texts
from .errors import PipelineStageError
from .geometry import SimilarityMatrix, similarity_matrix
from .metrics import IdeaSpaceMetrics, compute_idea_space_metrics
from .reduce import EigenSpectrum, Projection, UmapParams, pca_eigenvalues, umap_fit

UNION_SET_ID = "union"


@dataclass(frozen=True)
class PipelineConfig:
    embedder: EmbedderConfig = field(default_factory=EmbedderConfig)
    umap: UmapParams = field(default_factory=UmapParams)
    eps: float | None = None  # None -> k-distance suggestion per set
    min_pts: int = 5
    pca_k: int = 10
    union: bool = False
    template: str = DEFAULT_TEMPLATE
    include_problem_statement: bool = False


@dataclass(frozen=True)
class AnalysisReport:
    """Self-contained analysis of one idea set.

    Everything needed to re-derive the metrics (projection points and
    cluster labels) travels with the report; floats survive the JSON
    round-trip exactly.
    """

    set_id: str
    created_at: str
    tool_version: str
    params: dict
    input_digest: str
    embedding_digest: str
    similarity_digest: str
    ideas: list[dict]
    projection: list[list[float]]
    labels: list[int]
    hulls: list[dict]
    metrics: dict


@dataclass(frozen=True)
class SetAnalysis:
    report: AnalysisReport
    similarity: SimilarityMatrix
    embedding: EmbeddingMatrix


@dataclass(frozen=True)
class PipelineResult:
    analyses: list[SetAnalysis]
    failures: list[PipelineStageError]

    @property
    def reports(self) -> list[AnalysisReport]:
        return [a.report for a in self.analyses]


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _set_digest(idea_set: IdeaSet) -> str:
    return hashlib.sha256(serialize_corpus([idea_set]).encode("utf-8")).hexdigest()


def _similarity_digest(sim: SimilarityMatrix) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(sim.values, dtype="<f8").tobytes())
    return h.hexdigest()


def _metrics_to_dict(m: IdeaSpaceMetrics) -> dict:
    return {
        "total_area": m.total_area,
        "per_cluster_sparsity": {str(k): v for k, v in sorted(m.per_cluster_sparsity.items())},
        "cluster_sparsity": m.cluster_sparsity,
        "cs_flag": m.cs_flag,
        "distribution_score": m.distribution_score,
        "ds_flag": m.ds_flag,
        "spider_area": m.spider_area,
        "regular_polygon_area": m.regular_polygon_area,
        "eigenvalues": [float(v) for v in m.eigen_spectrum.values],
        "eigen_gaps": [float(g) for g in m.eigen_gaps],
        "flatness": m.flatness,
    }


def analyze_points(
    set_id: str,
    idea_set: IdeaSet | None,
    embedding: EmbeddingMatrix,
    similarity: SimilarityMatrix,
    projection: Projection,
    clustering: Clustering,
    spectrum: EigenSpectrum,
    config: PipelineConfig,
) -> AnalysisReport:
    """Assemble a report from already-computed pipeline stages."""
    m = compute_idea_space_metrics(projection, clustering, spectrum)
    hulls = [
        {
            "cluster_id": label,
            "n_ideas": g.n_ideas,
            "degenerate": g.hull.degenerate,
            "area": g.area,
            "vertices": [[float(x), float(y)] for x, y in g.hull.vertices],
        }
        for label, g in sorted(m.cluster_geometry.items())
    ]
    if idea_set is not None:
        ideas = [{"id": i.id, "title": i.title} for i in idea_set.ideas]
        input_digest = _set_digest(idea_set)
    else:
        ideas = [{"id": rid, "title": rid} for rid in embedding.row_ids]
        input_digest = embedding.digest()
    return AnalysisReport(
        set_id=set_id,
        created_at=_utc_now(),
        tool_version=__version__,
        params={
            "embedder": {
                "backend": config.embedder.backend,
                "model_id": embedding.model_id,
                "dim": config.embedder.dim,
                "seed": config.embedder.seed,
                "batch_size": config.embedder.batch_size,
            },
            "umap": {
                "n_neighbors": config.umap.n_neighbors,
                "min_dist": config.umap.min_dist,
                "n_epochs": config.umap.n_epochs,
                "learning_rate": config.umap.learning_rate,
                "negative_samples": config.umap.negative_samples,
                "seed": config.umap.seed,
                "metric": config.umap.metric,
            },
            "dbscan": {"eps": clustering.eps, "min_pts": clustering.min_pts},
            "pca_k": config.pca_k,
            "template": config.template,
            "include_problem_statement": config.include_problem_statement,
        },
        input_digest=input_digest,
        embedding_digest=embedding.digest(),
        similarity_digest=_similarity_digest(similarity),
        ideas=ideas,
        projection=[[float(x), float(y)] for x, y in projection.points],
        labels=[int(v) for v in clustering.labels],
        hulls=hulls,
        metrics=_metrics_to_dict(m),
    )


def analyze_set(
    idea_set: IdeaSet,
    config: PipelineConfig,
    cache: VectorCache | None = None,
    set_id: str | None = None,
    row_ids: list[str] | None = None,
) -> SetAnalysis:
    """Run the full pipeline for one idea set.

    Stage failures carry the stage name and set id so multi-set runs can
    report partial results.
    """
    sid = set_id or idea_set.set_id

    def stage(name, fn):
        try:
            return fn()
        except Exception as exc:
            raise PipelineStageError(sid, name, exc) from exc

    texts = stage(
        "render",
        lambda: corpus_texts(idea_set, config.template, config.include_problem_statement),
    )
    ids = row_ids or idea_set.idea_ids()
    embedding = stage(
        "embed", lambda: embed_texts(texts, config.embedder, row_ids=ids, cache=cache)
    )
    sim = stage(
        "similarity",
        lambda: similarity_matrix(embedding.vectors, row_ids=ids, normalize=True),
    )
    projection = stage("reduce", lambda: umap_fit(embedding, config.umap))
    eps = config.eps
    if eps is None:
        eps = stage(
            "cluster",
            lambda: suggest_eps(projection.points, k=max(1, config.min_pts - 1)),
        )
    clustering = stage("cluster", lambda: dbscan(projection.points, eps, config.min_pts))
    spectrum = stage("metrics", lambda: pca_eigenvalues(embedding, config.pca_k))
    report = stage(
        "report",
        lambda: analyze_points(
            sid, idea_set, embedding, sim, projection, clustering, spectrum, config
        ),
    )
    return SetAnalysis(report=report, similarity=sim, embedding=embedding)


def run_pipeline(corpus, config: PipelineConfig | None = None) -> PipelineResult:
    """Analyze every set in a corpus (path, bytes, or parsed sets).

    Failures in one set do not stop the others; with ``config.union`` a
    concatenated all-sets analysis is appended under set id "union".
    """
    if config is None:
        config = PipelineConfig()
    if isinstance(corpus, (str, Path)):
        raw = Path(corpus).read_bytes()
        fmt = "csv" if str(corpus).endswith(".csv") else "json"
        sets = parse_corpus(raw, format=fmt)
    elif isinstance(corpus, bytes):
        sets = parse_corpus(corpus)
    else:
        sets = list(corpus)

    cache = (
        VectorCache(config.embedder.cache_path)
        if config.embedder.cache_path is not None
        else None
    )
    analyses: list[SetAnalysis] = []
    failures: list[PipelineStageError] = []
    for idea_set in sets:
        try:
            analyses.append(analyze_set(idea_set, config, cache=cache))
        except PipelineStageError as err:
            failures.append(err)

    if config.union and len(sets) > 1:
        try:
            analyses.append(_analyze_union(sets, config, cache))
        except PipelineStageError as err:
            failures.append(err)
    return PipelineResult(analyses=analyses, failures=failures)


def _analyze_union(
    sets: list[IdeaSet], config: PipelineConfig, cache: VectorCache | None
) -> SetAnalysis:
    """Concatenate all sets into one analysis; ids are set-qualified."""
    merged_ideas = []
    merged_ids = []
    for s in sets:
        for idea in s.ideas:
            merged_ideas.append(replace(idea, id=f"{s.set_id}/{idea.id}"))
            merged_ids.append(f"{s.set_id}/{idea.id}")
    union_set = IdeaSet(
        set_id=UNION_SET_ID,
        problem_statement="; ".join(s.problem_statement for s in sets),
        ideas=tuple(merged_ideas),
    )
    return analyze_set(union_set, config, cache=cache, set_id=UNION_SET_ID)


# --- serialization ----------------------------------------------------------


def report_to_json(report: AnalysisReport) -> str:
    payload = {
        "set_id": report.set_id,
        "created_at": report.created_at,
        "tool_version": report.tool_version,
        "params": report.params,
        "input_digest": report.input_digest,
        "embedding_digest": report.embedding_digest,
        "similarity_digest": report.similarity_digest,
        "ideas": report.ideas,
        "projection": report.projection,
        "labels": report.labels,
        "hulls": report.hulls,
        "metrics": report.metrics,
    }
    return json.dumps(payload, indent=1, ensure_ascii=False)


def report_from_json(text: str | bytes) -> AnalysisReport:
    payload = json.loads(text)
    return AnalysisReport(**{k: payload[k] for k in AnalysisReport.__dataclass_fields__})


def safe_filename(set_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", set_id)


def write_reports(result: PipelineResult, out_dir: str | Path) -> list[Path]:
    """One <set_id>.report.json per analysis plus a similarity sidecar
    (the report itself carries only the similarity digest)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for analysis in result.analyses:
        base = safe_filename(analysis.report.set_id)
        report_path = out_dir / f"{base}.report.json"
        report_path.write_text(report_to_json(analysis.report), encoding="utf-8")
        sidecar = {
            "set_id": analysis.report.set_id,
            "normalized": analysis.similarity.normalized,
            "row_ids": list(analysis.similarity.row_ids),
            "values": [[float(v) for v in row] for row in analysis.similarity.values],
        }
        (out_dir / f"{base}.similarity.json").write_text(
            json.dumps(sidecar), encoding="utf-8"
        )
        written.append(report_path)
    return written


def load_similarity(path: str | Path) -> SimilarityMatrix:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return SimilarityMatrix(
        values=np.asarray(payload["values"], dtype=float),
        normalized=payload["normalized"],
        row_ids=tuple(payload["row_ids"]),
    )


def recompute_metrics(report: AnalysisReport) -> dict:
    """Re-derive the metrics dict from the report's own projection and
    labels; used to verify that serialization lost nothing."""
    points = np.asarray(report.projection, dtype=float)
    labels = np.asarray(report.labels, dtype=int)
    clustering = Clustering(
        labels=labels,
        eps=report.params["dbscan"]["eps"],
        min_pts=report.params["dbscan"]["min_pts"],
    )
    spectrum = EigenSpectrum(
        values=np.asarray(report.metrics["eigenvalues"], dtype=float),
        centered=True,
        n_points=points.shape[0],
    )
    return _metrics_to_dict(compute_idea_space_metrics(points, clustering, spectrum))


def verify_report(report: AnalysisReport) -> float:
    """Max absolute deviation between stored and recomputed metrics."""
    stored, fresh = report.metrics, recompute_metrics(report)

    def deviation(a, b) -> float:
        if isinstance(a, dict):
            return max((deviation(a[k], b[k]) for k in a), default=0.0)
        if isinstance(a, list):
            if len(a) != len(b):
                return math.inf
            return max((deviation(x, y) for x, y in zip(a, b)), default=0.0)
        if isinstance(a, float) and isinstance(b, float):
            return abs(a - b)
        return 0.0 if a == b else math.inf

    return deviation(stored, fresh)


# --- SVG plots --------------------------------------------------------------

_PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]
_NOISE_COLOR = "#999999"
_SVG_SIZE = 560
_MARGIN = 46


def cluster_color(cluster_id: int) -> str:
    if cluster_id == NOISE:
        return _NOISE_COLOR
    return _PALETTE[cluster_id % len(_PALETTE)]


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _svg_doc(body: str, width: int = _SVG_SIZE, height: int = _SVG_SIZE) -> str:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n{body}</svg>\n'
    )


def _scale_to_canvas(points: np.ndarray, size: int, margin: int):
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    inner = size - 2 * margin

    def to_canvas(p):
        x = margin + (p[0] - lo[0]) / span[0] * inner
        y = size - margin - (p[1] - lo[1]) / span[1] * inner  # flip y
        return x, y

    return to_canvas


def emit_scatter_svg(report: AnalysisReport) -> str:
    """Cluster scatter: points colored per cluster, noise in gray, one
    dotted hull outline per non-degenerate cluster."""
    points = np.asarray(report.projection, dtype=float)
    labels = report.labels
    to_canvas = _scale_to_canvas(points, _SVG_SIZE, _MARGIN)
    parts = [f"<title>{_escape(report.set_id)}: clusters</title>\n"]
    for hull in report.hulls:
        if hull["cluster_id"] == NOISE or hull["degenerate"]:
            continue
        coords = [to_canvas(v) for v in hull["vertices"]]
        d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in coords) + " Z"
        color = cluster_color(hull["cluster_id"])
        parts.append(
            f'<path class="hull" d="{d}" fill="none" stroke="{color}" '
            f'stroke-dasharray="5 4" stroke-width="1.4"/>\n'
        )
    for (x, y), label in zip(points, labels):
        cx, cy = to_canvas((x, y))
        cls = "point noise" if label == NOISE else f"point cluster-{label}"
        parts.append(
            f'<circle class="{cls}" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="3.2" '
            f'fill="{cluster_color(label)}" fill-opacity="0.85"/>\n'
        )
    return _svg_doc("".join(parts))


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _heat_color(v: float) -> str:
    # White -> blue ramp; v in [0, 1].
    v = min(max(v, 0.0), 1.0)
    r = int(round(255 - 224 * v))
    g = int(round(255 - 180 * v))
    b = 255
    return f"#{r:02x}{g:02x}{b:02x}"


def emit_heatmap_svg(similarity: SimilarityMatrix) -> str:
    """Similarity matrix as an n x n cell grid with row/column labels."""
    values = np.asarray(similarity.values, dtype=float)
    n = values.shape[0]
    label_space = 110
    cell = max(8, min(36, (_SVG_SIZE - label_space - _MARGIN) // n))
    x0 = label_space
    y0 = _MARGIN
    lo, hi = float(values.min()), float(values.max())
    span = hi - lo if hi > lo else 1.0
    parts = ["<title>similarity heatmap</title>\n"]
    for i in range(n):
        for j in range(n):
            v = (values[i, j] - lo) / span
            parts.append(
                f'<rect class="cell" x="{x0 + j * cell}" y="{y0 + i * cell}" '
                f'width="{cell}" height="{cell}" fill="{_heat_color(v)}">'
                f"<title>{_escape(similarity.row_ids[i])} vs "
                f"{_escape(similarity.row_ids[j])}: {values[i, j]:.3f}</title></rect>\n"
            )
        parts.append(
            f'<text x="{x0 - 6}" y="{y0 + i * cell + cell * 0.7}" text-anchor="end" '
            f'font-size="10">{_escape(str(similarity.row_ids[i])[:14])}</text>\n'
        )
    width = max(_SVG_SIZE, x0 + n * cell + _MARGIN)
    height = max(y0 + n * cell + _MARGIN, 200)
    return _svg_doc("".join(parts), width=width, height=height)


def emit_spider_svg(metrics: dict) -> str:
    """Per-cluster sparsity spider polygon; fill opacity tracks cluster
    sparsity so brighter polygons mean better-separated clusters."""
    spokes = metrics["per_cluster_sparsity"]
    labels = sorted(spokes, key=lambda k: int(k))
    r = [spokes[k] for k in labels]
    c = len(r)
    center = _SVG_SIZE / 2
    radius = _SVG_SIZE / 2 - _MARGIN - 14
    peak = max(max(r), 1e-12)
    cs = metrics.get("cluster_sparsity")
    opacity = 0.15 + 0.75 * (cs if cs is not None else 0.0)
    parts = ["<title>idea sparsity spider</title>\n"]
    pts = []
    for k, value in enumerate(r):
        ang = 2.0 * math.pi * k / c
        rr = radius * value / peak
        pts.append((center + rr * math.cos(ang), center - rr * math.sin(ang)))
        ax, ay = center + radius * math.cos(ang), center - radius * math.sin(ang)
        parts.append(
            f'<line class="spoke" x1="{_fmt(center)}" y1="{_fmt(center)}" '
            f'x2="{_fmt(ax)}" y2="{_fmt(ay)}" stroke="#cccccc" stroke-width="1"/>\n'
        )
        parts.append(
            f'<text x="{_fmt(center + (radius + 12) * math.cos(ang))}" '
            f'y="{_fmt(center - (radius + 12) * math.sin(ang))}" font-size="11" '
            f'text-anchor="middle">{_escape(str(labels[k]))}</text>\n'
        )
    d = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
    parts.append(
        f'<polygon class="sparsity" points="{d}" fill="#1f77b4" '
        f'fill-opacity="{opacity:.3f}" stroke="#1f77b4" stroke-width="1.5"/>\n'
    )
    return _svg_doc("".join(parts))


def emit_eigen_svg(spectra: list, names: list[str] | None = None, top_k: int = 10) -> str:
    """Leading eigenvalues (one polyline per spectrum) with the
    consecutive gaps as a second, dashed series."""
    if names is None:
        names = [f"set {i + 1}" for i in range(len(spectra))]
    series = []
    for s in spectra:
        values = np.asarray(getattr(s, "values", s), dtype=float)[:top_k]
        series.append(values)
    peak = max((float(v.max()) for v in series if v.size), default=1.0)
    peak = peak if peak > 0 else 1.0
    inner_w = _SVG_SIZE - 2 * _MARGIN
    inner_h = _SVG_SIZE - 2 * _MARGIN

    def sx(i, count):
        return _MARGIN + (inner_w * i / max(count - 1, 1))

    def sy(v):
        return _SVG_SIZE - _MARGIN - (v / peak) * inner_h

    parts = ["<title>eigenvalue spectra</title>\n"]
    parts.append(
        f'<line x1="{_MARGIN}" y1="{_SVG_SIZE - _MARGIN}" x2="{_SVG_SIZE - _MARGIN}" '
        f'y2="{_SVG_SIZE - _MARGIN}" stroke="#444444" stroke-width="1"/>\n'
    )
    for idx, values in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = " ".join(
            f"{_fmt(sx(i, values.shape[0]))},{_fmt(sy(float(v)))}"
            for i, v in enumerate(values)
        )
        parts.append(
            f'<polyline class="eigen-values" points="{pts}" fill="none" '
            f'stroke="{color}" stroke-width="1.8"/>\n'
        )
        gaps = np.abs(np.diff(values))
        gpts = " ".join(
            f"{_fmt(sx(i, values.shape[0]) + inner_w / max(values.shape[0] - 1, 1) / 2)},"
            f"{_fmt(sy(float(g)))}"
            for i, g in enumerate(gaps)
        )
        if gaps.size:
            parts.append(
                f'<polyline class="eigen-gaps" points="{gpts}" fill="none" '
                f'stroke="{color}" stroke-width="1.2" stroke-dasharray="3 3"/>\n'
            )
        parts.append(
            f'<text x="{_SVG_SIZE - _MARGIN + 4}" y="{_fmt(sy(float(values[-1])))}" '
            f'font-size="10" fill="{color}">{_escape(names[idx])}</text>\n'
        )
    return _svg_doc("".join(parts))
