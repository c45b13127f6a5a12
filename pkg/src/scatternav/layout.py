"""Focus+context layout over a cluster hierarchy.

Marker positions evolve through an iterated radial translation: when a
cluster gains focus, every visible marker is pushed away from the focus
representative ``p'`` by

    pos_new = pos + (pos - p') * f(cluster size) * g(distance to p')

where ``f`` linearly maps the focus cluster's size (relative to its visible
siblings) into [0.5, 4.0] and ``g`` logarithmically maps distance into
[0, 2.0] with g(0) = 0, so the focus representative itself is a fixed point
and remote context drifts toward the periphery. During focus comparison,
``g`` is cut off to exactly 0 beyond the distance ``delta``, which keeps the
existing focus area bit-identical.

Every push checkpoints the previous frame; resolving focus restores the
checkpoint exactly, so any fully resolved interaction sequence reproduces
the initial frame byte-for-byte.

Display levels are 1-based from the first visible cluster level (the
children of the tree root, which itself holds the whole dataset).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .data import Dataset
from .errors import (
    AlreadyFocused,
    EmptyStack,
    NotAChild,
    NotComparing,
    OutOfRange,
)
from .tree import TreeNode

F_LOW, F_HIGH = 0.5, 4.0
G_HIGH = 2.0


@dataclass(frozen=True)
class ScaleParams:
    """Numeric knobs of the translation: ``M`` is the dataset's max-distance
    bound, ``delta`` the comparison cutoff in layout units (callers convert
    their pixel budget; see :meth:`for_dataset`)."""

    M: float
    delta: float
    f_range: tuple[float, float] = (F_LOW, F_HIGH)
    g_range: tuple[float, float] = (0.0, G_HIGH)
    marker_scale: float = 0.04  # radius of an all-points marker, as a fraction of M
    min_radius_frac: float = 0.002

    def __post_init__(self) -> None:
        if self.delta <= 0:
            raise OutOfRange(f"delta must be > 0, got {self.delta}")

    @classmethod
    def for_dataset(cls, dataset: Dataset, delta_px: float = 100.0, viewport_px: float = 1000.0) -> "ScaleParams":
        """Derive params from a dataset and a viewport: ``delta_px`` screen
        pixels are converted at the scale that fits the embedding's extent
        into ``viewport_px``."""
        m = dataset.max_pairwise_distance_estimate
        if m <= 0:
            m = 1.0
        return cls(M=m, delta=delta_px / viewport_px * m)


def f_scale(cluster_size: int, min_size: int, max_size: int) -> float:
    """Linear map of cluster size onto [0.5, 4.0] over the sibling range."""
    if not (min_size <= cluster_size <= max_size):
        raise OutOfRange(f"cluster size {cluster_size} outside [{min_size}, {max_size}]")
    if min_size == max_size:
        return (F_LOW + F_HIGH) / 2.0
    return F_LOW + (F_HIGH - F_LOW) * (cluster_size - min_size) / (max_size - min_size)


def g_scale(distance: float, params: ScaleParams, mode: str = "normal") -> float:
    """Logarithmic map of distance onto [0, 2.0]; g(0) = 0 exactly.

    In comparing mode the value is cut off to exactly 0 beyond
    ``params.delta`` so markers outside the cutoff do not move at all.
    """
    if distance < 0:
        raise OutOfRange(f"distance must be >= 0, got {distance}")
    if mode == "comparing" and distance > params.delta:
        return 0.0
    if params.M <= 0:
        return 0.0
    value = G_HIGH * math.log1p(distance) / math.log1p(params.M)
    return min(max(value, 0.0), G_HIGH)


@dataclass(frozen=True)
class Marker:
    node_seq: int
    point_id: int
    x: float
    y: float
    radius: float
    level: int  # display level, 1 = first visible cluster level
    in_focus: bool
    count: int
    is_leaf: bool

    def to_dict(self) -> dict:
        return {
            "node": self.node_seq,
            "point_id": self.point_id,
            "x": self.x,
            "y": self.y,
            "radius": self.radius,
            "level": self.level,
            "in_focus": self.in_focus,
            "count": self.count,
            "is_leaf": self.is_leaf,
        }


@dataclass(frozen=True)
class FocusPolygon:
    level: int
    node_seq: int
    vertices: tuple[tuple[float, float], ...]
    comparison: bool = False

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "node": self.node_seq,
            "vertices": [[x, y] for x, y in self.vertices],
            "comparison": self.comparison,
        }


@dataclass(frozen=True)
class FocusState:
    stack: tuple[int, ...] = ()  # node seqs, root-most first
    comparison: Optional[int] = None

    @property
    def mode(self) -> str:
        return "comparing" if self.comparison is not None else "normal"

    def to_dict(self) -> dict:
        return {"stack": list(self.stack), "comparison": self.comparison, "mode": self.mode}


@dataclass(frozen=True)
class LayoutFrame:
    markers: tuple[Marker, ...]
    focus_polygons: tuple[FocusPolygon, ...]
    iteration: int
    state: FocusState

    def marker_for(self, node_seq: int) -> Optional[Marker]:
        for m in self.markers:
            if m.node_seq == node_seq:
                return m
        return None

    def to_dict(self) -> dict:
        levels = sorted({m.level for m in self.markers} | {p.level for p in self.focus_polygons})
        return {
            "iteration": self.iteration,
            "markers": [m.to_dict() for m in self.markers],
            "focus_polygons": [p.to_dict() for p in self.focus_polygons],
            "state": self.state.to_dict(),
            "level_colors": {str(lv): i + 1 for i, lv in enumerate(levels)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


# --- geometry helpers --------------------------------------------------------

def convex_hull(points: np.ndarray) -> np.ndarray:
    """Andrew's monotone chain; returns CCW hull vertices (may be < 3 for
    degenerate inputs)."""
    pts = np.unique(points, axis=0)
    if len(pts) <= 2:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[np.ndarray] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[np.ndarray] = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def padded_polygon(points: np.ndarray, pad: float) -> tuple[tuple[float, float], ...]:
    """Convex hull of ``points`` pushed outward by ``pad`` from its centroid.

    Degenerate inputs (one point, collinear sets) become a rectangle around
    the extent, so every focus area always has a drawable polygon.
    """
    hull = convex_hull(np.asarray(points, dtype=np.float64))
    if len(hull) >= 3:
        centroid = hull.mean(axis=0)
        out = []
        for v in hull:
            d = v - centroid
            norm = math.hypot(d[0], d[1])
            if norm < 1e-12:
                out.append((float(v[0]), float(v[1])))
            else:
                w = v + d / norm * pad
                out.append((float(w[0]), float(w[1])))
        return tuple(out)
    # collinear or single point: rectangle around the extent
    pts = np.asarray(points, dtype=np.float64)
    lo = pts.min(axis=0) - pad
    hi = pts.max(axis=0) + pad
    return (
        (float(lo[0]), float(lo[1])),
        (float(hi[0]), float(lo[1])),
        (float(hi[0]), float(hi[1])),
        (float(lo[0]), float(hi[1])),
    )


# --- the engine ---------------------------------------------------------------

class Explorer:
    """One exploration session over a built tree.

    Frames are immutable; the engine keeps a checkpoint per focus push (plus
    one for an active comparison) and restores them exactly on resolve.
    """

    def __init__(self, root: TreeNode, dataset: Dataset, params: ScaleParams) -> None:
        self.root = root
        self.dataset = dataset
        self.params = params
        self.nodes: dict[int, TreeNode] = {n.seq: n for n in root.walk()}
        self._checkpoints: list[tuple[FocusState, LayoutFrame]] = []
        self._comparison_checkpoint: Optional[tuple[FocusState, LayoutFrame]] = None
        self.state = FocusState()
        self.frame = self._global_frame(1)

    # -- basic accessors --

    def node(self, seq: int) -> TreeNode:
        if seq not in self.nodes:
            raise NotAChild(f"unknown node seq {seq}")
        return self.nodes[seq]

    def top_nodes(self) -> list[TreeNode]:
        return self.root.children if self.root.children else [self.root]

    def display_level(self, node: TreeNode) -> int:
        return max(node.level - 1, 1)

    def _rep_xy(self, node: TreeNode) -> tuple[float, float]:
        i = self.dataset.index_of(node.representative_id)
        return float(self.dataset.xy[i, 0]), float(self.dataset.xy[i, 1])

    def _radius(self, count: int) -> float:
        frac = math.sqrt(count / max(len(self.dataset), 1))
        r = self.params.marker_scale * self.params.M * frac
        return max(r, self.params.min_radius_frac * self.params.M)

    def _is_descendant(self, node: TreeNode, ancestor_seq: int) -> bool:
        cur: Optional[TreeNode] = node
        while cur is not None:
            if cur.seq == ancestor_seq:
                return True
            cur = cur.parent
        return False

    # -- frame construction --

    def _make_marker(self, node: TreeNode, x: float, y: float, in_focus: bool) -> Marker:
        return Marker(
            node_seq=node.seq,
            point_id=int(node.representative_id),
            x=x,
            y=y,
            radius=self._radius(node.size),
            level=self.display_level(node),
            in_focus=in_focus,
            count=node.size,
            is_leaf=node.is_leaf,
        )

    def _global_frame(self, level: int) -> LayoutFrame:
        """Frame showing the tree cut at display level ``level``: every node
        at that level plus any shallower leaf, at original positions."""
        selected: list[TreeNode] = []

        def collect(node: TreeNode) -> None:
            if self.display_level(node) == level or (node.is_leaf and self.display_level(node) < level):
                selected.append(node)
                return
            for child in node.children:
                collect(child)

        for top in self.top_nodes():
            collect(top)
        markers = []
        for node in selected:
            x, y = self._rep_xy(node)
            markers.append(self._make_marker(node, x, y, in_focus=False))
        return LayoutFrame(
            markers=tuple(markers),
            focus_polygons=(),
            iteration=0,
            state=FocusState(),
        )

    def _focus_flags(self, state: FocusState) -> set[int]:
        flags = set()
        if state.stack:
            flags.add(state.stack[-1])
        if state.comparison is not None:
            flags.add(state.comparison)
        return flags

    def _rebuild_polygons(self, markers: list[Marker], state: FocusState) -> tuple[FocusPolygon, ...]:
        polys: list[FocusPolygon] = []
        focus_ids = list(state.stack)
        for seq in focus_ids:
            node = self.nodes[seq]
            inside = [m for m in markers if self._is_descendant(self.nodes[m.node_seq], seq)]
            if not inside:
                continue
            pts = np.array([[m.x, m.y] for m in inside])
            pad = 2.0 * max(m.radius for m in inside)
            polys.append(
                FocusPolygon(
                    level=self.display_level(node),
                    node_seq=seq,
                    vertices=padded_polygon(pts, pad),
                )
            )
        if state.comparison is not None:
            node = self.nodes[state.comparison]
            inside = [m for m in markers if self._is_descendant(self.nodes[m.node_seq], node.seq)]
            if inside:
                pts = np.array([[m.x, m.y] for m in inside])
                pad = 2.0 * max(m.radius for m in inside)
                polys.append(
                    FocusPolygon(
                        level=self.display_level(node),
                        node_seq=node.seq,
                        vertices=padded_polygon(pts, pad),
                        comparison=True,
                    )
                )
        return tuple(polys)

    def _apply_translation(
        self,
        target: TreeNode,
        mode: str,
        new_state: FocusState,
    ) -> LayoutFrame:
        """Shared core of focus request and comparison: replace the target's
        marker by its children and push every marker radially from p'."""
        frame = self.frame
        target_marker = frame.marker_for(target.seq)
        if target_marker is None:
            raise NotAChild(f"node seq {target.seq} is not visible in the current frame")
        px, py = target_marker.x, target_marker.y

        siblings = [m for m in frame.markers
                    if self.nodes[m.node_seq].parent is target.parent
                    and self.nodes[m.node_seq].level == target.level]
        sizes = [m.count for m in siblings] or [target.size]
        f_value = f_scale(target.size, min(sizes), max(sizes))

        # previous positions: survivors keep theirs; the target's children
        # enter at their original offsets re-anchored to the current marker
        ox, oy = self._rep_xy(target)
        shift = (px - ox, py - oy)
        prev: list[tuple[TreeNode, float, float]] = []
        for m in frame.markers:
            if m.node_seq == target.seq and target.children:
                continue
            prev.append((self.nodes[m.node_seq], m.x, m.y))
        for child in target.children:
            cx, cy = self._rep_xy(child)
            prev.append((child, cx + shift[0], cy + shift[1]))

        focus_flags = self._focus_flags(new_state)
        markers: list[Marker] = []
        for node, x0, y0 in prev:
            dist = math.hypot(x0 - px, y0 - py)
            g_value = g_scale(dist, self.params, mode)
            if g_value == 0.0:
                x1, y1 = x0, y0  # bit-exact hold, including the focus point itself
            else:
                x1 = x0 + (x0 - px) * f_value * g_value
                y1 = y0 + (y0 - py) * f_value * g_value
            in_focus = any(self._is_descendant(node, seq) for seq in focus_flags)
            markers.append(self._make_marker(node, x1, y1, in_focus))

        return LayoutFrame(
            markers=tuple(markers),
            focus_polygons=self._rebuild_polygons(markers, new_state),
            iteration=frame.iteration + 1,
            state=new_state,
        )

    # -- operations --

    def request_focus(self, target_seq: int) -> LayoutFrame:
        """Push focus onto ``target_seq`` (a child of the current focus, or a
        top-level cluster when nothing is focused) and expand the space
        around it."""
        target = self.node(target_seq)
        if target_seq in self.state.stack:
            raise AlreadyFocused(f"node seq {target_seq} is already on the focus stack")
        if self.state.stack:
            top = self.nodes[self.state.stack[-1]]
            if target.parent is not top:
                raise NotAChild(f"node seq {target_seq} is not a child of the focused node seq {top.seq}")
        else:
            if target not in self.top_nodes():
                raise NotAChild(f"node seq {target_seq} is not a top-level cluster")
        if self.state.comparison is not None:
            # a pending comparison is resolved before descending further
            self.resolve_comparison()

        self._checkpoints.append((self.state, self.frame))
        new_state = FocusState(stack=self.state.stack + (target_seq,))
        frame = self._apply_translation(target, "normal", new_state)
        self.state = new_state
        self.frame = frame
        return frame

    def resolve_focus(self) -> LayoutFrame:
        """Pop the deepest focus, restoring the pre-push frame exactly."""
        if self.state.comparison is not None:
            self.resolve_comparison()
        if not self.state.stack:
            raise EmptyStack("no focus to resolve")
        self.state, self.frame = self._checkpoints.pop()
        return self.frame

    def compare_focus(self, target_seq: int) -> LayoutFrame:
        """Open a second, comparison focus next to the current one.

        With an empty stack this degrades to a plain focus request. The
        expansion is cut off beyond ``delta``, so the existing focus area is
        left bit-identical.
        """
        if not self.state.stack:
            return self.request_focus(target_seq)
        target = self.node(target_seq)
        top = self.nodes[self.state.stack[-1]]
        if target_seq == top.seq or target_seq in self.state.stack:
            raise AlreadyFocused(f"node seq {target_seq} is already focused")
        if target.level != top.level:
            raise NotAChild(
                f"comparison target must sit at the focused level {top.level}, got level {target.level}"
            )
        if self.state.comparison is not None:
            self.resolve_comparison()
        if self.frame.marker_for(target_seq) is None:
            raise NotAChild(f"node seq {target_seq} is not visible in the current frame")

        self._comparison_checkpoint = (self.state, self.frame)
        new_state = FocusState(stack=self.state.stack, comparison=target_seq)
        frame = self._apply_translation(target, "comparing", new_state)
        self.state = new_state
        self.frame = frame
        return frame

    def resolve_comparison(self) -> LayoutFrame:
        """Drop the comparison focus, restoring the pre-comparison frame."""
        if self.state.comparison is None:
            raise NotComparing("no comparison focus to resolve")
        assert self._comparison_checkpoint is not None
        self.state, self.frame = self._comparison_checkpoint
        self._comparison_checkpoint = None
        return self.frame

    def set_global_level(self, level: int) -> LayoutFrame:
        """Show every cluster at display level ``level`` (shallower leaves
        included), clearing any focus. Serves the more/less-detail-for-all
        interactions."""
        if level < 1:
            raise OutOfRange(f"display level must be >= 1, got {level}")
        self._checkpoints.clear()
        self._comparison_checkpoint = None
        self.state = FocusState()
        self.frame = self._global_frame(level)
        return self.frame

    def reset(self) -> LayoutFrame:
        """Return to the initial top-level frame."""
        return self.set_global_level(1)

    @property
    def depth(self) -> int:
        return len(self.state.stack)
