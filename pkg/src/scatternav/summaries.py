"""Cluster content summaries: what a focused or hovered cluster holds.

A summary pairs the representative with its three most similar members,
three "similar but diverse" members (greedy farthest-point selection inside
the cluster, seeded at the representative), and the exact class histogram.
Distances use feature space when the dataset carries features, otherwise
the 2D layout space.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .tree import TreeNode

SUMMARY_NEIGHBORS = 3


@dataclass(frozen=True)
class ClusterSummary:
    representative_id: int
    representative_thumbnail: str | None
    most_similar: tuple[int, ...]
    diverse: tuple[int, ...]
    class_histogram: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "representative_id": self.representative_id,
            "representative_thumbnail": self.representative_thumbnail,
            "most_similar": list(self.most_similar),
            "diverse": list(self.diverse),
            "class_histogram": dict(sorted(self.class_histogram.items())),
        }


def _vectors(dataset: Dataset, member_ids: np.ndarray) -> np.ndarray:
    idx = [dataset.index_of(int(m)) for m in member_ids]
    if dataset.features is not None:
        return dataset.features[idx]
    return dataset.xy[idx]


def summarize(node: TreeNode, dataset: Dataset) -> ClusterSummary:
    """Tooltip payload for one cluster; exact histogram, deterministic picks."""
    member_ids = np.asarray(node.member_ids, dtype=np.int64)
    vectors = _vectors(dataset, member_ids)
    rep_id = int(node.representative_id)
    rep_pos = int(np.flatnonzero(member_ids == rep_id)[0])
    rep_vec = vectors[rep_pos]

    labels = [dataset.labels[dataset.index_of(int(m))] for m in member_ids]
    histogram = dict(Counter(labels))

    others = [i for i in range(len(member_ids)) if i != rep_pos]
    dist_to_rep = np.sqrt(((vectors - rep_vec) ** 2).sum(axis=1))
    ranked = sorted(others, key=lambda i: (dist_to_rep[i], int(member_ids[i])))
    most_similar = tuple(int(member_ids[i]) for i in ranked[:SUMMARY_NEIGHBORS])

    # farthest-point traversal seeded at the representative: each pick
    # maximizes its minimum distance to everything already selected
    diverse: list[int] = []
    min_dist = dist_to_rep.copy()
    taken = np.zeros(len(member_ids), dtype=bool)
    taken[rep_pos] = True
    while len(diverse) < SUMMARY_NEIGHBORS and not taken.all():
        open_idx = np.flatnonzero(~taken)
        best = min_dist[open_idx].max()
        tied = open_idx[min_dist[open_idx] == best]
        pick = int(tied[np.argmin(member_ids[tied])])
        taken[pick] = True
        diverse.append(int(member_ids[pick]))
        d_new = np.sqrt(((vectors - vectors[pick]) ** 2).sum(axis=1))
        min_dist = np.minimum(min_dist, d_new)

    thumbnail = None
    if dataset.thumbnails is not None:
        thumbnail = dataset.thumbnails[dataset.index_of(rep_id)]
    return ClusterSummary(
        representative_id=rep_id,
        representative_thumbnail=thumbnail,
        most_similar=most_similar,
        diverse=tuple(diverse),
        class_histogram=histogram,
    )


def class_purity(node: TreeNode, dataset: Dataset) -> float:
    """Share of the dominant class inside the cluster, in [0, 1]."""
    labels = [dataset.labels[dataset.index_of(int(m))] for m in node.member_ids]
    counts = Counter(labels)
    return max(counts.values()) / len(labels)
