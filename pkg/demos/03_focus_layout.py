"""Drive a focus+context exploration session headlessly.

Focusing a cluster pushes every other marker radially away, reveals the
cluster's children in the vacated space, and draws a padded hull around the
focus area. A comparison focus does the same with a hard distance cutoff,
so the first focus area stays bit-identical. Resolving restores checkpoints
exactly; a fully unwound session ends on the byte-identical initial frame.
"""

from scatternav import BuildConfig, Explorer, GridConfig, ScaleParams, build_tree
from scatternav.synth import make_blobs

dataset = make_blobs(1_500, 4, seed=11, spread=50.0)
root = build_tree(dataset, BuildConfig(grid=GridConfig(k=1.8, alpha=1), pi=12))
explorer = Explorer(root, dataset, ScaleParams.for_dataset(dataset))

initial = explorer.frame
print(f"initial frame: {len(initial.markers)} markers, iteration {initial.iteration}")

target = max(explorer.top_nodes(), key=lambda n: n.size)
frame = explorer.request_focus(target.seq)
moved = sum(
    1 for m in frame.markers
    if (before := initial.marker_for(m.node_seq)) and (m.x, m.y) != (before.x, before.y)
)
print(f"focused cluster of {target.size}: {len(frame.markers)} markers, "
      f"{moved} context markers pushed, {len(frame.focus_polygons)} focus polygon(s)")

sibling = next(n for n in explorer.top_nodes() if n is not target)
frame = explorer.compare_focus(sibling.seq)
print(f"comparison opened: mode={explorer.state.mode}, "
      f"{len(frame.focus_polygons)} polygons on screen")

explorer.resolve_comparison()
explorer.resolve_focus()
print(f"unwound to start: byte-identical = "
      f"{explorer.frame.to_json() == initial.to_json()}")

# global level-of-detail (more detail for ALL data)
frame = explorer.set_global_level(2)
print(f"global level 2: {len(frame.markers)} markers, "
      f"every point represented once = "
      f"{sum(m.count for m in frame.markers) == len(dataset)}")
