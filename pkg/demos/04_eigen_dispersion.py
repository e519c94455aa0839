"""
Eigenvalue dispersion profiles
==============================

Compare how comprehensively each idea set spans the embedding space:
flat leading eigenvalue spectra mean exploration spread over many
directions, a dominant first gap means a directed, narrow exploration.
"""

from pathlib import Path

from ideaspace.corpus import corpus_texts, synthesize_corpus
from ideaspace.embed import EmbedderConfig, embed_texts
from ideaspace.metrics import dispersion_profile
from ideaspace.reduce import pca_eigenvalues
from ideaspace.report import emit_eigen_svg

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

config = EmbedderConfig(backend="offline", dim=256, seed=0)
sets = synthesize_corpus(n_sets=6, n_ideas=100, seed=0)

spectra = []
for idea_set in sets:
    matrix = embed_texts(corpus_texts(idea_set), config, row_ids=idea_set.idea_ids())
    spectrum = pca_eigenvalues(matrix, k=10)
    spectra.append(spectrum)
    profile = dispersion_profile(spectrum)
    print(
        f"{idea_set.set_id}: top eigenvalue {profile['top_k'][0]:.2f}, "
        f"first gap {profile['gaps'][0]:.2f}, flatness {profile['flatness']:.3f}"
    )

path = OUT / "eigen_dispersion.svg"
path.write_text(emit_eigen_svg(spectra, names=[s.set_id for s in sets]))
print(f"wrote {path}")
