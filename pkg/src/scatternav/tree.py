"""Recursive cluster hierarchy over an embedding.

Each node holds a representative point and the ids of every member below
it. Children are produced by sampling representatives from the node's
members, assigning every member to its nearest representative, and merging
clusters smaller than the minimum size ``pi`` into their closest cluster
under mean pairwise linkage. Recursion descends only into children with at
least ``2 * pi`` members, so every split leaves room for valid subclusters.

The finished tree is immutable in practice (nothing mutates it after
``build_tree`` returns) and safe to share across sessions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .data import Dataset
from .errors import EmptyDataset, InvalidConfig, IoFailure, NoRepresentatives
from .sampling import GridConfig, RepresentativeSet, sample

_CHUNK = 2048

TREE_FORMAT = "scatternav-tree/1"


@dataclass(frozen=True)
class BuildConfig:
    grid: GridConfig
    pi: int

    def __post_init__(self) -> None:
        if self.pi < 1:
            raise InvalidConfig(f"minimum cluster size pi must be >= 1, got {self.pi}")


@dataclass
class Cluster:
    """Intermediate partition cell: a representative and its member ids."""

    representative_id: int
    member_ids: list[int]

    def __len__(self) -> int:
        return len(self.member_ids)


@dataclass
class TreeNode:
    level: int
    index: int
    representative_id: int
    member_ids: np.ndarray  # sorted point ids
    parent: Optional["TreeNode"] = None
    children: list["TreeNode"] = field(default_factory=list)
    collapsed: bool = False  # leaf kept >= 2*pi members after a single-cluster collapse
    seq: int = -1  # stable preorder id assigned by the builder

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def size(self) -> int:
        return len(self.member_ids)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def __repr__(self) -> str:
        return f"TreeNode(level={self.level}, index={self.index}, size={self.size}, leaf={self.is_leaf})"


def partition(points, representatives: RepresentativeSet) -> list[Cluster]:
    """Assign every point to its nearest representative (ties: lowest rep id).

    Returns one cluster per representative, member ids in input point order.
    """
    from .sampling import _as_id_xy

    ids, xy = _as_id_xy(points)
    if len(representatives) == 0:
        raise NoRepresentatives("partition requires at least one representative")
    rep_ids = sorted(representatives.ids)
    id_set = set(int(i) for i in ids)
    for rid in rep_ids:
        if rid not in id_set:
            raise NoRepresentatives(f"representative {rid} is not among the points")

    pos_of = {int(pid): i for i, pid in enumerate(ids)}
    rep_xy = xy[[pos_of[r] for r in rep_ids]]

    from scipy.spatial.distance import cdist

    members: list[list[int]] = [[] for _ in rep_ids]
    # Columns are ordered by ascending representative id, and argmin returns
    # the first minimal column, so exact distance ties go to the lowest id.
    for start in range(0, len(ids), _CHUNK):
        block = xy[start : start + _CHUNK]
        nearest = np.argmin(cdist(block, rep_xy, "sqeuclidean"), axis=1)
        for offset, col in enumerate(nearest):
            members[int(col)].append(int(ids[start + offset]))
    return [Cluster(representative_id=rep_ids[j], member_ids=members[j]) for j in range(len(rep_ids))]


def merge_invalid(clusters: list[Cluster], pi: int, points) -> list[Cluster]:
    """Merge clusters smaller than ``pi`` into their closest cluster.

    Closeness is the mean of all pairwise member distances between the two
    clusters. The smallest invalid cluster merges first and sizes are
    re-evaluated after every merge; the loop stops when no invalid cluster
    remains or a single cluster is left. The surviving cluster keeps the
    larger constituent's representative (lowest representative id on a size
    tie).
    """
    from scipy.spatial.distance import cdist

    from .sampling import _as_id_xy

    if not clusters:
        raise NoRepresentatives("merge requires at least one cluster")
    ids, xy = _as_id_xy(points)
    pos_of = {int(pid): i for i, pid in enumerate(ids)}

    # positional index arrays, kept in input point order
    work: list[tuple[int, np.ndarray]] = [
        (c.representative_id, np.array(sorted(pos_of[int(m)] for m in c.member_ids), dtype=np.int64))
        for c in clusters
    ]
    while len(work) > 1:
        invalid = [t for t in work if len(t[1]) < pi]
        if not invalid:
            break
        smallest = min(invalid, key=lambda t: (len(t[1]), t[0]))
        others = [t for t in work if t is not smallest]
        b_sizes = np.array([len(t[1]) for t in others], dtype=np.int64)
        b_concat = np.concatenate([t[1] for t in others])
        col_sums = cdist(xy[smallest[1]], xy[b_concat]).sum(axis=0)
        bounds = np.concatenate([[0], np.cumsum(b_sizes)[:-1]])
        linkages = np.add.reduceat(col_sums, bounds) / (len(smallest[1]) * b_sizes)
        best = linkages.min()
        target = min(
            (others[j] for j in np.flatnonzero(linkages == best)),
            key=lambda t: t[0],
        )
        if len(target[1]) > len(smallest[1]) or (len(target[1]) == len(smallest[1])
                                                 and target[0] < smallest[0]):
            survivor_rep = target[0]
        else:
            survivor_rep = smallest[0]
        merged = (survivor_rep, np.sort(np.concatenate([target[1], smallest[1]])))
        work = [t for t in work if t is not smallest and t is not target]
        work.append(merged)
        work.sort(key=lambda t: t[0])
    return [Cluster(rep, [int(ids[i]) for i in idx]) for rep, idx in work]


def build_tree(dataset: Dataset, config: BuildConfig) -> TreeNode:
    """Impose the full hierarchy on ``dataset``; returns the root node.

    The root (level 1) covers every point. A node is split only while it has
    at least ``2 * pi`` members; a split that collapses back to a single
    cluster (or a sampling pass that keeps every point) turns the node into
    a leaf flagged ``collapsed``.
    """
    if len(dataset) == 0:
        raise EmptyDataset("cannot build a tree over an empty dataset")
    if config.pi < 1:
        raise InvalidConfig(f"pi must be >= 1, got {config.pi}")

    ids = dataset.ids
    xy = dataset.xy
    pos_of = {int(pid): i for i, pid in enumerate(ids)}

    # Root representative: point nearest the centroid, lowest id on a tie.
    centroid = xy.mean(axis=0)
    d2 = ((xy - centroid) ** 2).sum(axis=1)
    root_rep = int(ids[np.flatnonzero(d2 == d2.min())].min())

    level_counters: dict[int, int] = {}

    def next_index(level: int) -> int:
        level_counters[level] = level_counters.get(level, 0) + 1
        return level_counters[level]

    root = TreeNode(
        level=1,
        index=next_index(1),
        representative_id=root_rep,
        member_ids=np.sort(ids.copy()),
    )

    def expand(node: TreeNode) -> None:
        if node.size < 2 * config.pi:
            return
        member_idx = np.array([pos_of[int(m)] for m in node.member_ids], dtype=np.int64)
        sub_ids = ids[member_idx]
        sub_xy = xy[member_idx]
        reps = sample((sub_ids, sub_xy), config.grid)
        if len(reps) >= node.size:
            node.collapsed = True
            return
        clusters = partition((sub_ids, sub_xy), reps)
        clusters = merge_invalid(clusters, config.pi, (sub_ids, sub_xy))
        if len(clusters) == 1:
            node.collapsed = True
            return
        for cluster in clusters:
            child = TreeNode(
                level=node.level + 1,
                index=next_index(node.level + 1),
                representative_id=cluster.representative_id,
                member_ids=np.sort(np.array(cluster.member_ids, dtype=np.int64)),
                parent=node,
            )
            node.children.append(child)
        for child in node.children:
            expand(child)

    expand(root)
    for seq, node in enumerate(root.walk()):
        node.seq = seq
    return root


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    collapsed: list[int] = field(default_factory=list)  # seqs of collapsed leaves

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_tree(root: TreeNode, dataset: Dataset, pi: int) -> ValidationReport:
    """Check every structural invariant of a built tree."""
    report = ValidationReport()
    dataset_ids = set(int(i) for i in dataset.ids)

    if root.level != 1:
        report.violations.append(f"root level is {root.level}, expected 1")
    if set(int(i) for i in root.member_ids) != dataset_ids:
        report.violations.append("root does not cover the dataset")

    for node in root.walk():
        tag = f"node seq={node.seq} (level {node.level}, index {node.index})"
        member_set = set(int(i) for i in node.member_ids)
        if node.size == 0:
            report.violations.append(f"{tag}: empty member set")
            continue
        if not member_set <= dataset_ids:
            report.violations.append(f"{tag}: members outside the dataset")
        if int(node.representative_id) not in member_set:
            report.violations.append(f"{tag}: representative {node.representative_id} not a member")
        if node.is_leaf != (not node.children):
            report.violations.append(f"{tag}: is_leaf flag inconsistent with children")
        if node is not root and node.size < pi:
            report.violations.append(f"{tag}: size {node.size} below minimum {pi}")
        if node.is_leaf:
            if node.collapsed:
                report.collapsed.append(node.seq)
            elif node.size >= 2 * pi:
                report.violations.append(
                    f"{tag}: unflagged leaf with {node.size} members (>= 2*pi={2 * pi})"
                )
        if node.children:
            union: set[int] = set()
            total = 0
            for child in node.children:
                if child.parent is not node:
                    report.violations.append(f"{tag}: child seq={child.seq} has wrong parent link")
                if child.level != node.level + 1:
                    report.violations.append(
                        f"{tag}: child seq={child.seq} level {child.level} != parent level + 1"
                    )
                child_set = set(int(i) for i in child.member_ids)
                total += len(child_set)
                union |= child_set
            if union != member_set:
                report.violations.append(f"{tag}: children do not partition the node (union mismatch)")
            elif total != len(member_set):
                report.violations.append(f"{tag}: children overlap (disjointness violated)")
    return report


# --- serialization ----------------------------------------------------------

def tree_to_document(root: TreeNode, dataset: Dataset, config: BuildConfig) -> dict:
    """Self-contained, deterministic description of a built tree."""
    nodes = []
    for node in root.walk():
        nodes.append(
            {
                "seq": node.seq,
                "level": node.level,
                "index": node.index,
                "parent": None if node.parent is None else node.parent.seq,
                "representative_id": int(node.representative_id),
                "member_ids": [int(m) for m in node.member_ids],
                "is_leaf": node.is_leaf,
                "collapsed": node.collapsed,
            }
        )
    return {
        "format": TREE_FORMAT,
        "config": {"k": config.grid.k, "alpha": config.grid.alpha, "pi": config.pi},
        "dataset_fingerprint": dataset.fingerprint(),
        "nodes": nodes,
    }


def tree_from_document(doc: dict, dataset: Dataset) -> tuple[TreeNode, BuildConfig]:
    """Rebuild a tree, refusing a document whose fingerprint mismatches."""
    if doc.get("format") != TREE_FORMAT:
        raise IoFailure(f"unknown tree format {doc.get('format')!r}")
    fp = dataset.fingerprint()
    if doc.get("dataset_fingerprint") != fp:
        raise IoFailure(
            "tree was built for a different dataset "
            f"(expected fingerprint {doc.get('dataset_fingerprint')}, dataset has {fp})"
        )
    cfg = BuildConfig(
        grid=GridConfig(k=float(doc["config"]["k"]), alpha=int(doc["config"]["alpha"])),
        pi=int(doc["config"]["pi"]),
    )
    by_seq: dict[int, TreeNode] = {}
    for entry in doc["nodes"]:
        node = TreeNode(
            level=int(entry["level"]),
            index=int(entry["index"]),
            representative_id=int(entry["representative_id"]),
            member_ids=np.array(entry["member_ids"], dtype=np.int64),
            collapsed=bool(entry.get("collapsed", False)),
            seq=int(entry["seq"]),
        )
        by_seq[node.seq] = node
    root = None
    for entry in doc["nodes"]:
        node = by_seq[int(entry["seq"])]
        if entry["parent"] is None:
            root = node
        else:
            parent = by_seq[int(entry["parent"])]
            node.parent = parent
            parent.children.append(node)
    if root is None:
        raise IoFailure("tree document has no root node")
    return root, cfg


def save_tree(root: TreeNode, dataset: Dataset, config: BuildConfig, path: str | Path) -> None:
    doc = tree_to_document(root, dataset, config)
    try:
        Path(path).write_text(json.dumps(doc, sort_keys=True, separators=(",", ":")), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from None


def load_tree(path: str | Path, dataset: Dataset) -> tuple[TreeNode, BuildConfig]:
    path = Path(path)
    if not path.exists():
        raise IoFailure(f"no such file: {path}")
    doc = json.loads(path.read_text(encoding="utf-8"))
    return tree_from_document(doc, dataset)
