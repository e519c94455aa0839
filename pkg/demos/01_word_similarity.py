"""
Word similarity heatmap
=======================

Embed a probe word against three comparison groups and render the
normalized similarity matrix as a heatmap. With the offline hash
embedder the absolute numbers are synthetic, but the workflow is
exactly what a remote embedding backend would feed.
"""

from pathlib import Path

from ideaspace.embed import EmbedderConfig, embed_texts
from ideaspace.geometry import similarity_matrix
from ideaspace.report import emit_heatmap_svg

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# A probe word and three groups of decreasing expected similarity.
words = [
    "chair",
    "chair seat", "chair sofa", "chair bench",      # shares the probe token
    "desk table", "desk cushion", "table cushion",  # related furniture words
    "light", "monitor", "fan",                      # unrelated appliances
]

config = EmbedderConfig(backend="offline", dim=512, seed=42)
matrix = embed_texts(words, config, row_ids=words)

sim = similarity_matrix(matrix.vectors, row_ids=words, normalize=True)
print("normalized similarity of 'chair' vs each word:")
for word, value in zip(words[1:], sim.values[0, 1:]):
    print(f"  {word:16s} {value:.3f}")

path = OUT / "word_similarity_heatmap.svg"
path.write_text(emit_heatmap_svg(sim))
print(f"wrote {path}")
