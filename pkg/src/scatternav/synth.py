"""Seeded synthetic datasets: labeled Gaussian blobs on a 2D plane.

Stands in for real embeddings at desk scale; deterministic for a given seed.
"""

from __future__ import annotations

import numpy as np

from .data import Dataset
from .errors import InvalidConfig


def make_blobs(
    n: int,
    blobs: int,
    seed: int,
    spread: float = 1.0,
    blob_sigma: float = 0.08,
    features: int = 0,
) -> Dataset:
    """Generate ``n`` points in ``blobs`` Gaussian clusters.

    Blob centers are drawn uniformly in a [0, spread] square; points are
    labeled ``b0..b{blobs-1}`` by generating cluster. When ``features`` > 0
    every point also carries a feature vector centered on a per-blob anchor,
    so feature-space similarity mirrors blob membership.
    """
    if n < 1 or blobs < 1 or n < blobs:
        raise InvalidConfig(f"need n >= blobs >= 1, got n={n}, blobs={blobs}")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.0, spread, size=(blobs, 2))
    sizes = np.full(blobs, n // blobs, dtype=np.int64)
    sizes[: n % blobs] += 1

    xs = []
    labels = []
    feats = [] if features > 0 else None
    if features > 0:
        anchors = rng.normal(0.0, 1.0, size=(blobs, features))
    for b in range(blobs):
        pts = rng.normal(centers[b], blob_sigma * spread, size=(sizes[b], 2))
        xs.append(pts)
        labels += [f"b{b}"] * int(sizes[b])
        if feats is not None:
            feats.append(rng.normal(anchors[b], 0.25, size=(sizes[b], features)))
    xy = np.vstack(xs)
    return Dataset(
        ids=np.arange(n, dtype=np.int64),
        xy=xy,
        labels=labels,
        features=np.vstack(feats) if feats is not None else None,
    )
