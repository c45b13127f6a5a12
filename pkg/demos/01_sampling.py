"""Pick representatives from a crowded scatter plot.

A 2,000-point embedding is binned into a grid, thinned so no two kept cells
sit within one cell of each other, and reduced to one medoid per cell. The
density attached to each representative says how many points it stands for,
and those densities always add back up to the input size.
"""

from scatternav import GridConfig, build_grid, remove_redundant, sample, select_medoids
from scatternav.synth import make_blobs

dataset = make_blobs(2_000, 5, seed=42, spread=100.0)
print(f"dataset: {len(dataset)} points, bounds {dataset.bounds}")

config = GridConfig(k=6.0, alpha=1)
grid = build_grid(dataset, config)
print(f"grid: {len(grid.cells)} occupied cells of side {config.k}")

thinned = remove_redundant(grid, config.alpha)
print(f"after redundancy removal: {len(thinned.cells)} cells "
      f"(members conserved: {thinned.member_count() == len(dataset)})")

reps = select_medoids(thinned, dataset)
print(f"representatives: {len(reps)} medoids")
print(f"densities sum to n: {sum(reps.densities) == len(dataset)}")

top = sorted(reps.entries, key=lambda e: -e.density)[:5]
print("densest five:")
for entry in top:
    i = dataset.index_of(entry.point_id)
    x, y = dataset.xy[i]
    print(f"  point {entry.point_id} at ({x:7.2f}, {y:7.2f}) stands for {entry.density} points")

# the one-call version
same = sample(dataset, config)
print(f"sample() reproduces the pipeline: {same == reps}")
