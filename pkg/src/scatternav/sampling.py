"""Grid-based representative selection over 2D point sets.

The pipeline bins points into a square grid of side ``k``, thins occupied
cells so that no two kept cells lie within a Chebyshev window of ``alpha``
cells, re-assigns the members of dropped cells to their nearest kept cell,
and finally extracts one medoid per kept cell. Every step is deterministic;
the sum of representative densities always equals the input point count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .data import DataPoint, Dataset
from .errors import EmptyInput, InvalidConfig

_MEDOID_CHUNK = 1024


@dataclass(frozen=True)
class GridConfig:
    """Cell side ``k`` (layout units) and redundancy window ``alpha`` (cells)."""

    k: float
    alpha: int = 0

    def __post_init__(self) -> None:
        if not (self.k > 0):
            raise InvalidConfig(f"cell size k must be > 0, got {self.k}")
        if self.alpha < 0 or int(self.alpha) != self.alpha:
            raise InvalidConfig(f"alpha must be a non-negative integer, got {self.alpha}")


@dataclass(frozen=True)
class Representative:
    point_id: int
    density: int


@dataclass(frozen=True)
class RepresentativeSet:
    entries: tuple[Representative, ...]

    @property
    def ids(self) -> list[int]:
        return [e.point_id for e in self.entries]

    @property
    def densities(self) -> list[int]:
        return [e.density for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


class Grid:
    """Occupied cells of a square binning, keyed by (row, col).

    ``cells`` maps cell index to the ordered list of member point ids;
    density of a cell is its member count. Row index comes from y, column
    from x, both relative to ``origin`` (the min corner of the input).
    """

    def __init__(self, cells: Mapping[tuple[int, int], list[int]], origin: tuple[float, float], k: float) -> None:
        self.cells = {key: list(members) for key, members in cells.items()}
        self.origin = (float(origin[0]), float(origin[1]))
        self.k = float(k)

    def density(self, cell: tuple[int, int]) -> int:
        return len(self.cells[cell])

    def cell_center(self, cell: tuple[int, int]) -> tuple[float, float]:
        row, col = cell
        return (self.origin[0] + (col + 0.5) * self.k, self.origin[1] + (row + 0.5) * self.k)

    def member_count(self) -> int:
        return sum(len(m) for m in self.cells.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return self.cells == other.cells and self.origin == other.origin and self.k == other.k

    def __repr__(self) -> str:
        return f"Grid({len(self.cells)} cells, k={self.k})"


def _as_id_xy(points: "Dataset | Sequence[DataPoint] | tuple") -> tuple[np.ndarray, np.ndarray]:
    """Accept a Dataset, a DataPoint sequence, or an (ids, xy) pair."""
    if isinstance(points, Dataset):
        return points.ids, points.xy
    if isinstance(points, tuple) and len(points) == 2 and isinstance(points[0], np.ndarray):
        return points[0], points[1]
    pts = list(points)
    ids = np.array([p.id for p in pts], dtype=np.int64)
    xy = np.array([[p.x, p.y] for p in pts], dtype=np.float64)
    return ids, xy


def build_grid(points, config: GridConfig) -> Grid:
    """Assign each point to cell (floor((y-min_y)/k), floor((x-min_x)/k))."""
    ids, xy = _as_id_xy(points)
    if len(ids) == 0:
        raise EmptyInput("cannot grid an empty point set")
    min_x = float(xy[:, 0].min())
    min_y = float(xy[:, 1].min())
    rows = np.floor((xy[:, 1] - min_y) / config.k).astype(np.int64)
    cols = np.floor((xy[:, 0] - min_x) / config.k).astype(np.int64)
    cells: dict[tuple[int, int], list[int]] = {}
    for i in range(len(ids)):
        cells.setdefault((int(rows[i]), int(cols[i])), []).append(int(ids[i]))
    return Grid(cells, origin=(min_x, min_y), k=config.k)


def remove_redundant(grid: Grid, alpha: int) -> Grid:
    """Thin occupied cells to a Chebyshev-``alpha``-separated subset.

    Cells are visited in row-major order; the first unvisited cell is kept
    and suppresses every cell within ``alpha`` of it. Members of suppressed
    cells move to the nearest kept cell by center distance (ties resolved
    toward the lowest (row, col) kept cell), so no point is ever dropped.
    """
    if alpha < 0:
        raise InvalidConfig(f"alpha must be >= 0, got {alpha}")
    if alpha == 0:
        return grid

    ordered = sorted(grid.cells.keys())
    suppressed: set[tuple[int, int]] = set()
    kept: list[tuple[int, int]] = []
    occupied = set(ordered)
    for cell in ordered:
        if cell in suppressed:
            continue
        kept.append(cell)
        row, col = cell
        for dr in range(-alpha, alpha + 1):
            for dc in range(-alpha, alpha + 1):
                neighbor = (row + dr, col + dc)
                if neighbor != cell and neighbor in occupied:
                    suppressed.add(neighbor)

    removed = [c for c in ordered if c in suppressed]
    new_cells = {c: list(grid.cells[c]) for c in kept}
    if removed:
        kept_centers = np.array([grid.cell_center(c) for c in kept])
        removed_centers = np.array([grid.cell_center(c) for c in removed])
        # argmin returns the first minimal index; kept is row-major sorted,
        # so exact distance ties resolve to the lowest (row, col) kept cell.
        for start in range(0, len(removed), _MEDOID_CHUNK):
            block = removed_centers[start : start + _MEDOID_CHUNK]
            d2 = ((block[:, None, :] - kept_centers[None, :, :]) ** 2).sum(axis=2)
            nearest = np.argmin(d2, axis=1)
            for offset, kidx in enumerate(nearest):
                source = removed[start + offset]
                new_cells[kept[int(kidx)]].extend(grid.cells[source])
    return Grid(new_cells, origin=grid.origin, k=grid.k)


def select_medoids(grid: Grid, points) -> RepresentativeSet:
    """One representative per cell: the member with minimal distance sum.

    Exact distance-sum ties break toward the lowest point id. Entry density
    is the cell's member count at sampling time.
    """
    ids, xy = _as_id_xy(points)
    pos_of = {int(pid): i for i, pid in enumerate(ids)}
    entries: list[Representative] = []
    for cell in sorted(grid.cells.keys()):
        members = grid.cells[cell]
        idx = np.array([pos_of[m] for m in members], dtype=np.int64)
        coords = xy[idx]
        n = len(members)
        if n == 1:
            entries.append(Representative(point_id=members[0], density=1))
            continue
        sums = np.zeros(n)
        for start in range(0, n, _MEDOID_CHUNK):
            block = coords[start : start + _MEDOID_CHUNK]
            sums[start : start + len(block)] = cdist(block, coords).sum(axis=1)
        best = sums.min()
        tied = [members[i] for i in range(n) if sums[i] == best]
        entries.append(Representative(point_id=min(tied), density=n))
    return RepresentativeSet(entries=tuple(entries))


def sample(points, config: GridConfig) -> RepresentativeSet:
    """Full pipeline: grid, redundancy removal, per-cell medoids."""
    ids, xy = _as_id_xy(points)
    if len(ids) == 0:
        raise EmptyInput("cannot sample an empty point set")
    grid = build_grid((ids, xy), config)
    grid = remove_redundant(grid, config.alpha)
    return select_medoids(grid, (ids, xy))
