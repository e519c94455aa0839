"""Embedding-space analytics for design ideation.

Turns a corpus of structured design ideas into an objective evaluation of
the ideation exercise: embeds the ideas, projects them to 2D, clusters them,
and computes dispersion/distribution metrics (idea sparsity, cluster
sparsity, distribution score, eigenvalue dispersion) plus human-selection
metrics (selection index, sampling score).
"""

__version__ = "0.1.0"

from . import cluster, corpus, embed, geometry, metrics, reduce, report

__all__ = [
    "cluster",
    "corpus",
    "embed",
    "geometry",
    "metrics",
    "reduce",
    "report",
    "__version__",
]
