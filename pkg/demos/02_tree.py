"""Impose a navigable hierarchy on an embedding.

Recursive sampling partitions the points level by level: every node's
children cover it exactly, no child falls below the minimum size pi, and a
node only splits while it has room for two valid subclusters. The finished
tree serializes to a self-contained JSON file stamped with the dataset's
fingerprint.
"""

from collections import Counter
from pathlib import Path
from tempfile import mkdtemp

from scatternav import BuildConfig, GridConfig, build_tree, load_tree, save_tree, validate_tree
from scatternav.synth import make_blobs

dataset = make_blobs(10_000, 8, seed=7, spread=1000.0)
config = BuildConfig(grid=GridConfig(k=15.0, alpha=1), pi=5)

root = build_tree(dataset, config)
nodes = list(root.walk())
per_level = Counter(n.level for n in nodes)
print(f"tree: {len(nodes)} nodes over levels {dict(sorted(per_level.items()))}")
print(f"top-level clusters: {len(root.children)} "
      f"({len(root.children) / len(dataset):.1%} of the points)")

report = validate_tree(root, dataset, config.pi)
print(f"invariants hold: {report.ok}; collapsed leaves: {len(report.collapsed)}")

out = Path(mkdtemp()) / "tree.json"
save_tree(root, dataset, config, out)
reloaded, _ = load_tree(out, dataset)
print(f"round trip: {sum(1 for _ in reloaded.walk())} nodes from {out}")

# a wrong dataset is refused by fingerprint
try:
    load_tree(out, make_blobs(10_000, 8, seed=8, spread=1000.0))
except Exception as exc:
    print(f"fingerprint guard: {type(exc).__name__}: {str(exc)[:60]}...")
