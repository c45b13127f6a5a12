"""Inspect a leaf cluster: overlap-free projection plus a content summary.

When exploration reaches a leaf, its raw points are shown. Overlap removal
nudges markers apart until every pair clears the sum of its radii, and the
cluster summary supplies the tooltip: the three members most similar to the
representative, three similar-but-diverse members, and the exact class
histogram.
"""

import math

from scatternav import (
    BuildConfig,
    GridConfig,
    Marker,
    build_tree,
    class_purity,
    remove_overlaps,
    summarize,
)
from scatternav.synth import make_blobs

dataset = make_blobs(600, 3, seed=5, spread=10.0, features=8)
root = build_tree(dataset, BuildConfig(grid=GridConfig(k=0.5, alpha=1), pi=15))
leaf = next(n for n in root.walk() if n.is_leaf)
print(f"leaf cluster: {leaf.size} points at level {leaf.level}")

radius = 0.004 * dataset.max_pairwise_distance_estimate
markers = [
    Marker(id=int(pid),
           x=float(dataset.xy[dataset.index_of(int(pid)), 0]),
           y=float(dataset.xy[dataset.index_of(int(pid)), 1]),
           radius=radius)
    for pid in leaf.member_ids
]
result = remove_overlaps(markers)
worst = min(
    (math.dist((a.x, a.y), (b.x, b.y)) - (a.radius + b.radius)
     for i, a in enumerate(result.markers) for b in result.markers[i + 1:]),
    default=float("inf"),
)
print(f"overlap removal converged={result.converged}; "
      f"tightest pair clearance {worst:.2e} (>= -1e-6 means no overlap)")

summary = summarize(leaf, dataset)
print(f"representative: point {summary.representative_id}")
print(f"most similar (feature space): {list(summary.most_similar)}")
print(f"similar but diverse:          {list(summary.diverse)}")
print(f"class histogram: {summary.class_histogram} "
      f"(purity {class_purity(leaf, dataset):.2f})")
