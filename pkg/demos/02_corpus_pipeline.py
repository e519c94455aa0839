"""
Full corpus pipeline
====================

Synthesize a six-set idea corpus, run embed -> project -> cluster ->
metrics for every set plus the union of all sets, and render the
cluster scatter for one set. Swap the embedder config for
backend="remote" to run against a real embeddings endpoint.
"""

from pathlib import Path

from ideaspace.corpus import synthesize_corpus
from ideaspace.embed import EmbedderConfig
from ideaspace.reduce import UmapParams
from ideaspace.report import PipelineConfig, emit_scatter_svg, run_pipeline, write_reports

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

sets = synthesize_corpus(n_sets=6, n_ideas=100, seed=0)
config = PipelineConfig(
    embedder=EmbedderConfig(backend="offline", dim=256, seed=0),
    umap=UmapParams(seed=0),
    union=True,  # also analyze all 600 ideas in one shared projection
)

result = run_pipeline(sets, config)
write_reports(result, OUT / "reports")

print(f"{'set':8s} {'clusters':>8s} {'noise':>6s} {'CS':>6s} {'DS':>6s} {'flatness':>9s}")
for report in result.reports:
    m = report.metrics
    n_clusters = len({l for l in report.labels if l != -1})
    noise = sum(1 for l in report.labels if l == -1)
    print(
        f"{report.set_id:8s} {n_clusters:8d} {noise:6d} "
        f"{m['cluster_sparsity']:6.3f} {m['distribution_score']:6.3f} {m['flatness']:9.3f}"
    )

scatter = OUT / "set1_clusters.svg"
scatter.write_text(emit_scatter_svg(result.reports[0]))
union_scatter = OUT / "union_clusters.svg"
union_scatter.write_text(emit_scatter_svg(result.reports[-1]))
print(f"wrote {scatter} and {union_scatter}")
