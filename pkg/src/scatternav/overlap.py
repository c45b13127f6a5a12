"""Pairwise overlap removal for leaf-scale marker sets.

Overlapping markers are pushed apart along their center line, half the
deficit each, accumulated per sweep with a per-marker step cap and iterated
until no pair overlaps (tangency counts as overlap-free). The scheme is
deterministic: fixed pair order, no randomness, and a declared +x direction
for the lower-id marker of a coincident pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import TooManyMarkers

EPSILON = 1e-6
_RELAX = 0.7
_STEP_CAP = 0.9


@dataclass(frozen=True)
class Marker:
    id: int
    x: float
    y: float
    radius: float


@dataclass(frozen=True)
class OverlapResult:
    markers: tuple[Marker, ...]
    converged: bool


def overlapping_pairs(markers: Sequence[Marker], epsilon: float = EPSILON) -> list[tuple[int, int]]:
    """Exhaustive scan; returns index pairs closer than the sum of radii."""
    out = []
    for i in range(len(markers)):
        for j in range(i + 1, len(markers)):
            a, b = markers[i], markers[j]
            dist = float(np.hypot(a.x - b.x, a.y - b.y))
            if dist < a.radius + b.radius - epsilon:
                out.append((i, j))
    return out


def remove_overlaps(
    markers: Sequence[Marker],
    max_iterations: int = 256,
    max_markers: int = 800,
) -> OverlapResult:
    """Separate markers until every pair satisfies
    ``dist >= r_a + r_b - 1e-6``; input order is preserved.

    Inputs larger than ``max_markers`` are rejected (this runs on leaf
    clusters only). If the iteration budget runs out the best-effort layout
    is returned with ``converged=False``.
    """
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    if len(markers) > max_markers:
        raise TooManyMarkers(f"{len(markers)} markers exceed the leaf-scale cap of {max_markers}")
    n = len(markers)
    if n <= 1:
        return OverlapResult(markers=tuple(markers), converged=True)

    pos = np.array([[m.x, m.y] for m in markers], dtype=np.float64)
    radii = np.array([m.radius for m in markers], dtype=np.float64)
    ids = np.array([m.id for m in markers], dtype=np.int64)
    iu, ju = np.triu_indices(n, k=1)
    targets = radii[iu] + radii[ju]

    converged = False
    for _ in range(max_iterations):
        dvec = pos[iu] - pos[ju]
        dist = np.hypot(dvec[:, 0], dvec[:, 1])
        deficit = targets - dist
        mask = deficit > EPSILON
        if not np.any(mask):
            converged = True
            break

        im, jm = iu[mask], ju[mask]
        dvm, distm, needm = dvec[mask], dist[mask], deficit[mask]
        unit = np.zeros_like(dvm)
        nz = distm >= 1e-12
        unit[nz] = dvm[nz] / distm[nz][:, None]
        if np.any(~nz):
            # coincident centers: +x goes to the lower-id marker of the pair
            co = ~nz
            sign = np.where(ids[im[co]] < ids[jm[co]], 1.0, -1.0)
            unit[co, 0] = sign

        step = _RELAX * (needm / 2.0 + EPSILON)
        add = np.zeros_like(pos)
        np.add.at(add, im, unit * step[:, None])
        np.add.at(add, jm, -unit * step[:, None])

        # cap each marker's step at a fraction of its worst incident deficit
        worst = np.zeros(n)
        np.maximum.at(worst, im, needm)
        np.maximum.at(worst, jm, needm)
        norms = np.hypot(add[:, 0], add[:, 1])
        cap = _STEP_CAP * worst
        over = norms > cap + 1e-15
        scale = np.ones(n)
        scale[over] = cap[over] / norms[over]
        pos += add * scale[:, None]

    if not converged:
        converged = _sequential_polish(pos, radii, ids, iu, ju, targets)

    out = tuple(
        Marker(id=int(ids[i]), x=float(pos[i, 0]), y=float(pos[i, 1]), radius=float(radii[i]))
        for i in range(n)
    )
    return OverlapResult(markers=out, converged=converged)


def _sequential_polish(pos, radii, ids, iu, ju, targets, sweeps: int = 64) -> bool:
    """Gauss-Seidel fallback for dense inputs the batched sweeps left
    unresolved: walk pairs in index order, separating each fully."""
    for _ in range(sweeps):
        dist = np.hypot(pos[iu, 0] - pos[ju, 0], pos[iu, 1] - pos[ju, 1])
        bad = np.flatnonzero(targets - dist > EPSILON)
        if bad.size == 0:
            return True
        for p in bad:
            i, j = int(iu[p]), int(ju[p])
            dx, dy = pos[i, 0] - pos[j, 0], pos[i, 1] - pos[j, 1]
            d = math.hypot(dx, dy)
            need = radii[i] + radii[j] - d
            if need <= EPSILON:
                continue
            if d < 1e-12:
                ux, uy = (1.0, 0.0) if ids[i] < ids[j] else (-1.0, 0.0)
            else:
                ux, uy = dx / d, dy / d
            half = need / 2.0 + EPSILON
            pos[i, 0] += ux * half
            pos[i, 1] += uy * half
            pos[j, 0] -= ux * half
            pos[j, 1] -= uy * half
    dist = np.hypot(pos[iu, 0] - pos[ju, 0], pos[iu, 1] - pos[ju, 1])
    return not np.any(targets - dist > EPSILON)
