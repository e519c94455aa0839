"""
The four exploration regimes
============================

Generate the canonical dispersion/distribution scenarios (high/low
dispersion x uniform/non-uniform distribution), cluster each, and
compare their sparsity metrics. High-dispersion-uniform should score
the highest cluster sparsity; the blob scenarios should show clear
clusters with lower sparsity between them.
"""

import numpy as np

from ideaspace.cluster import dbscan
from ideaspace.geometry import SCENARIO_KINDS, synthesize_point_scenario
from ideaspace.metrics import compute_idea_space_metrics
from ideaspace.reduce import pca_eigenvalues

SEED = 1
N = 400
EPS, MIN_PTS = 0.3, 5  # matched parameters across all four regimes

print(f"{'regime':8s} {'clusters':>8s} {'noise':>6s} {'CS':>6s} {'DS':>8s}")
for kind in SCENARIO_KINDS:
    points = synthesize_point_scenario(kind, N, SEED)
    clustering = dbscan(points, EPS, MIN_PTS)
    spectrum = pca_eigenvalues(points, k=2)
    m = compute_idea_space_metrics(points, clustering, spectrum)
    ds = f"{m.distribution_score:.3f}" if m.distribution_score is not None else "n/a"
    noise = int(np.sum(clustering.labels == -1))
    print(
        f"{kind:8s} {clustering.n_clusters:8d} {noise:6d} "
        f"{m.cluster_sparsity:6.3f} {ds:>8s}"
    )

print()
print("Reading the table: a fixed eps reads differently at each dispersion")
print("scale. The high-dispersion uniform spread has no dense spots at all")
print("(everything is noise, cluster sparsity 1); the low-dispersion uniform")
print("spread merges into one cluster covering the whole space (sparsity 0);")
print("the blob regimes land in between, with distinct clusters separated by")
print("empty space.")
