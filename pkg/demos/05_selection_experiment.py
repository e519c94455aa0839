"""
Simulated selection experiment
==============================

Replay the pick-10-of-100 selection task against one analyzed idea set:
simulated participants sample ideas with a bias toward bigger clusters,
and the selection index / sampling score summarize how completely the
group covered the cluster structure. The interactive version of this
task lives in the explorer frontend against `ideaspace serve`.
"""

import numpy as np

from ideaspace.cluster import Clustering
from ideaspace.corpus import synthesize_corpus
from ideaspace.embed import EmbedderConfig
from ideaspace.metrics import SelectionRecord, sampling_score, selection_index, triad_sample
from ideaspace.reduce import UmapParams
from ideaspace.report import PipelineConfig, run_pipeline

QUOTA = 10
N_PARTICIPANTS = 8

sets = synthesize_corpus(n_sets=1, n_ideas=100, seed=4)
config = PipelineConfig(
    embedder=EmbedderConfig(backend="offline", dim=256, seed=4),
    umap=UmapParams(seed=4),
)
report = run_pipeline(sets, config).reports[0]

labels = np.asarray(report.labels)
ids = [idea["id"] for idea in report.ideas]
clustering = Clustering(labels=labels, eps=report.params["dbscan"]["eps"],
                        min_pts=report.params["dbscan"]["min_pts"])

# Participants pick more from visually bigger clusters, mirroring the
# monotone cluster-size trend seen with human selectors.
rng = np.random.default_rng(0)
weights = np.array([1.0 if l == -1 else 2.0 + (labels == l).sum() / 10 for l in labels])
weights /= weights.sum()
records = [
    SelectionRecord(
        participant_id=f"p{p}",
        plot_id=report.set_id,
        selected_idea_ids={ids[i] for i in rng.choice(len(ids), QUOTA, replace=False, p=weights)},
    )
    for p in range(N_PARTICIPANTS)
]

si = selection_index(records, clustering, ids)
n_real = len(clustering.cluster_ids)
ss = sampling_score(si, N_PARTICIPANTS, n_real)
print(f"{n_real} clusters, {N_PARTICIPANTS} participants, quota {QUOTA}")
for cluster_id, count in si.items():
    size = int((labels == cluster_id).sum())
    tag = "noise" if cluster_id == -1 else f"cluster {cluster_id}"
    print(f"  {tag:10s} size {size:3d}  selection index {count}/{N_PARTICIPANTS}")
print(f"sampling score: {ss:.2f}")

reference = ids[0]
a, b, c = triad_sample(clustering, np.asarray(report.projection), ids, reference, seed=1)
print(f"triad for {reference}: same-cluster {a}, neighbour {b}, distant {c}")
