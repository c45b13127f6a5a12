from __future__ import annotations

import numpy as np
import pytest

from scatternav.data import Dataset
from scatternav.synth import make_blobs


@pytest.fixture
def blobs400() -> Dataset:
    return make_blobs(400, 4, seed=7)


@pytest.fixture
def blobs200() -> Dataset:
    return make_blobs(200, 4, seed=3)


def grid_dataset(n_side: int, step: float = 1.0) -> Dataset:
    """Regular lattice, ids in row-major order."""
    xs, ys = np.meshgrid(np.arange(n_side) * step, np.arange(n_side) * step)
    xy = np.column_stack([xs.ravel(), ys.ravel()]).astype(float)
    return Dataset(ids=np.arange(len(xy)), xy=xy, labels=["a"] * len(xy))


def points_dataset(coords, labels=None) -> Dataset:
    coords = np.asarray(coords, dtype=float)
    labels = labels or ["a"] * len(coords)
    return Dataset(ids=np.arange(len(coords)), xy=coords, labels=labels)
