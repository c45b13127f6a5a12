"""Sampler quality metrics: embedding coverage and representative redundancy.

Both metrics are artifact-defined operationalizations (reported as such):
coverage is the fraction of points within a radius of some representative,
redundancy the fraction of representative pairs closer than a threshold.
A seeded reservoir sampler provides the reproducible baseline for
comparisons.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .data import Dataset
from .errors import InvalidConfig, IoFailure
from .sampling import GridConfig, RepresentativeSet, sample

REPORT_COLUMNS = ("sampler", "k", "alpha", "n_reps", "coverage", "redundancy", "runtime_ms")


@dataclass(frozen=True)
class MetricReport:
    sampler: str
    k: float
    alpha: int
    n_reps: int
    coverage: float
    redundancy: float
    runtime_ms: float

    def row(self) -> list:
        return [self.sampler, self.k, self.alpha, self.n_reps,
                f"{self.coverage:.6f}", f"{self.redundancy:.6f}", f"{self.runtime_ms:.3f}"]


def coverage(xy: np.ndarray, rep_xy: np.ndarray, radius: float) -> float:
    """Fraction of points within ``radius`` of at least one representative."""
    if radius <= 0:
        raise InvalidConfig(f"radius must be > 0, got {radius}")
    if len(rep_xy) == 0:
        return 0.0
    tree = cKDTree(rep_xy)
    dists, _ = tree.query(xy, k=1)
    return float(np.mean(dists <= radius))


def redundancy(rep_xy: np.ndarray, threshold: float) -> float:
    """Fraction of representative pairs closer than ``threshold``."""
    if threshold <= 0:
        raise InvalidConfig(f"threshold must be > 0, got {threshold}")
    m = len(rep_xy)
    if m < 2:
        return 0.0
    iu, ju = np.triu_indices(m, k=1)
    d = np.hypot(rep_xy[iu, 0] - rep_xy[ju, 0], rep_xy[iu, 1] - rep_xy[ju, 1])
    return float(np.mean(d < threshold))


def rep_positions(dataset: Dataset, reps: RepresentativeSet) -> np.ndarray:
    return dataset.xy[[dataset.index_of(r) for r in reps.ids]]


def reservoir_sample(ids: Sequence[int], size: int, seed: int) -> list[int]:
    """Uniform reservoir sample of ``size`` ids; deterministic per seed."""
    if size < 1:
        raise InvalidConfig(f"sample size must be >= 1, got {size}")
    rng = np.random.default_rng(seed)
    reservoir: list[int] = []
    for i, item in enumerate(ids):
        if i < size:
            reservoir.append(int(item))
        else:
            j = int(rng.integers(0, i + 1))
            if j < size:
                reservoir[j] = int(item)
    return reservoir


def evaluate_samplers(
    dataset: Dataset,
    config: GridConfig,
    samplers: Sequence[str] = ("grid", "reservoir"),
    seed: int = 0,
    radius: float | None = None,
    threshold: float | None = None,
) -> list[MetricReport]:
    """Run each named sampler and measure its coverage and redundancy.

    The reservoir baseline draws as many representatives as the grid sampler
    produced, so the comparison is at equal budget. Defaults: coverage radius
    = k, redundancy threshold = max(alpha, 1) * k.
    """
    radius = config.k if radius is None else radius
    threshold = max(config.alpha, 1) * config.k if threshold is None else threshold

    t0 = time.perf_counter()
    grid_reps = sample(dataset, config)
    grid_ms = (time.perf_counter() - t0) * 1000.0

    reports = []
    for name in samplers:
        if name == "grid":
            rep_xy = rep_positions(dataset, grid_reps)
            reports.append(
                MetricReport(
                    sampler=name,
                    k=config.k,
                    alpha=config.alpha,
                    n_reps=len(grid_reps),
                    coverage=coverage(dataset.xy, rep_xy, radius),
                    redundancy=redundancy(rep_xy, threshold),
                    runtime_ms=grid_ms,
                )
            )
        elif name == "reservoir":
            t0 = time.perf_counter()
            ids = reservoir_sample(list(dataset.ids), len(grid_reps), seed)
            ms = (time.perf_counter() - t0) * 1000.0
            rep_xy = dataset.xy[[dataset.index_of(i) for i in ids]]
            reports.append(
                MetricReport(
                    sampler=name,
                    k=config.k,
                    alpha=config.alpha,
                    n_reps=len(ids),
                    coverage=coverage(dataset.xy, rep_xy, radius),
                    redundancy=redundancy(rep_xy, threshold),
                    runtime_ms=ms,
                )
            )
        else:
            raise InvalidConfig(f"unknown sampler {name!r}; available: grid, reservoir")
    return reports


def write_report(reports: Sequence[MetricReport], path: str | Path) -> None:
    try:
        with Path(path).open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(REPORT_COLUMNS)
            for report in reports:
                writer.writerow(report.row())
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from None
