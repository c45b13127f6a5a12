"""Loading, validation, and persistence of 2D embeddings.

A dataset is an ordered collection of labeled 2D points with stable integer
ids, optional feature vectors (uniform length) and optional thumbnail
references. Two file formats are supported:

* CSV with header ``id,x,y,label[,f0..fn][,thumbnail]`` (UTF-8, ``.`` decimal)
* JSONL with one object per line carrying the same keys, ``features`` as an
  array

Datasets are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DataError,
    DuplicateId,
    EmptyDataset,
    IoFailure,
    MissingColumn,
    NonFiniteCoordinate,
    RaggedFeatures,
)

FORMATS = ("csv", "jsonl")

_FEATURE_COL = re.compile(r"^f(\d+)$")


@dataclass(frozen=True)
class DataPoint:
    id: int
    x: float
    y: float
    label: str
    features: tuple[float, ...] | None = None
    thumbnail: str | None = None


@dataclass(frozen=True)
class Bounds:
    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def diagonal(self) -> float:
        return math.hypot(self.max_x - self.min_x, self.max_y - self.min_y)


class Dataset:
    """Immutable, column-oriented view of an embedding.

    Coordinates live in ``xy`` (n, 2) float64; ids in ``ids`` (n,) int64.
    ``max_pairwise_distance_estimate`` is the bounding-box diagonal, an upper
    bound on any realized pairwise distance (cheap to compute and sufficient
    for distance normalization downstream).
    """

    def __init__(
        self,
        ids: Sequence[int],
        xy: np.ndarray,
        labels: Sequence[str],
        features: np.ndarray | None = None,
        thumbnails: Sequence[str | None] | None = None,
    ) -> None:
        self.ids = np.asarray(ids, dtype=np.int64)
        self.xy = np.asarray(xy, dtype=np.float64)
        self.labels = tuple(str(s) for s in labels)
        self.features = None if features is None else np.asarray(features, dtype=np.float64)
        self.thumbnails = None if thumbnails is None else tuple(thumbnails)
        self._validate()
        self.bounds = Bounds(
            float(self.xy[:, 0].min()),
            float(self.xy[:, 1].min()),
            float(self.xy[:, 0].max()),
            float(self.xy[:, 1].max()),
        )
        self.max_pairwise_distance_estimate = self.bounds.diagonal()
        self._index_of = {int(i): k for k, i in enumerate(self.ids)}

    def _validate(self) -> None:
        if len(self.ids) == 0:
            raise EmptyDataset("dataset has no points")
        if self.xy.shape != (len(self.ids), 2):
            raise DataError(f"coordinate array has shape {self.xy.shape}, expected ({len(self.ids)}, 2)")
        if len(self.labels) != len(self.ids):
            raise DataError("labels length does not match point count")
        if not np.all(np.isfinite(self.xy)):
            row = int(np.argwhere(~np.isfinite(self.xy))[0][0])
            raise NonFiniteCoordinate(f"row {row + 1}: non-finite coordinate for id {int(self.ids[row])}")
        if np.any(self.ids < 0):
            row = int(np.argmax(self.ids < 0))
            raise DataError(f"row {row + 1}: negative id {int(self.ids[row])}")
        uniques, counts = np.unique(self.ids, return_counts=True)
        if len(uniques) != len(self.ids):
            dup = int(uniques[counts > 1][0])
            row = int(np.argmax(self.ids == dup)) + 1
            raise DuplicateId(f"row {row}: id {dup} appears more than once")
        if self.features is not None:
            if self.features.ndim != 2 or self.features.shape[0] != len(self.ids):
                raise RaggedFeatures("feature matrix does not cover every point")
            if not np.all(np.isfinite(self.features)):
                row = int(np.argwhere(~np.isfinite(self.features))[0][0])
                raise NonFiniteCoordinate(f"row {row + 1}: non-finite feature value")
        if self.thumbnails is not None and len(self.thumbnails) != len(self.ids):
            raise DataError("thumbnails length does not match point count")

    def __len__(self) -> int:
        return len(self.ids)

    def index_of(self, point_id: int) -> int:
        return self._index_of[int(point_id)]

    def point(self, index: int) -> DataPoint:
        feats = None if self.features is None else tuple(float(v) for v in self.features[index])
        thumb = None if self.thumbnails is None else self.thumbnails[index]
        return DataPoint(
            id=int(self.ids[index]),
            x=float(self.xy[index, 0]),
            y=float(self.xy[index, 1]),
            label=self.labels[index],
            features=feats,
            thumbnail=thumb,
        )

    @property
    def points(self) -> Iterator[DataPoint]:
        return (self.point(i) for i in range(len(self)))

    @classmethod
    def from_points(cls, points: Sequence[DataPoint]) -> "Dataset":
        if not points:
            raise EmptyDataset("dataset has no points")
        has_features = any(p.features is not None for p in points)
        if has_features:
            missing = [p for p in points if p.features is None]
            if missing:
                raise RaggedFeatures(f"point id {missing[0].id} lacks features while others have them")
            lengths = {len(p.features) for p in points}  # type: ignore[arg-type]
            if len(lengths) != 1:
                raise RaggedFeatures(f"feature lengths differ: {sorted(lengths)}")
            features = np.array([p.features for p in points], dtype=np.float64)
        else:
            features = None
        has_thumbs = any(p.thumbnail is not None for p in points)
        thumbnails = [p.thumbnail for p in points] if has_thumbs else None
        return cls(
            ids=[p.id for p in points],
            xy=np.array([[p.x, p.y] for p in points], dtype=np.float64),
            labels=[p.label for p in points],
            features=features,
            thumbnails=thumbnails,
        )

    def fingerprint(self) -> str:
        """Content hash, stable across load/save round trips."""
        h = hashlib.sha256()
        h.update(self.ids.tobytes())
        h.update(self.xy.tobytes())
        h.update("\x00".join(self.labels).encode("utf-8"))
        if self.features is not None:
            h.update(self.features.tobytes())
        if self.thumbnails is not None:
            h.update("\x00".join(t if t is not None else "" for t in self.thumbnails).encode("utf-8"))
        return h.hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            np.array_equal(self.ids, other.ids)
            and np.array_equal(self.xy, other.xy)
            and self.labels == other.labels
            and (
                (self.features is None and other.features is None)
                or (
                    self.features is not None
                    and other.features is not None
                    and np.array_equal(self.features, other.features)
                )
            )
            and self.thumbnails == other.thumbnails
        )

    def __hash__(self) -> int:
        return hash(self.fingerprint())


def _parse_float(raw: str, row: int, column: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise NonFiniteCoordinate(f"row {row}: column {column!r} value {raw!r} is not a number") from None
    if not math.isfinite(value):
        raise NonFiniteCoordinate(f"row {row}: column {column!r} value {raw!r} is not finite")
    return value


def _check_header(header: list[str]) -> tuple[int, bool]:
    """Validate column layout, returning (n_features, has_thumbnail)."""
    required = ["id", "x", "y", "label"]
    if header[: len(required)] != required:
        missing = [c for c in required if c not in header[: len(required)]]
        raise MissingColumn(f"header must start with id,x,y,label; missing or misplaced: {missing or header[:4]}")
    rest = header[len(required):]
    has_thumbnail = bool(rest) and rest[-1] == "thumbnail"
    feature_cols = rest[:-1] if has_thumbnail else rest
    for i, name in enumerate(feature_cols):
        m = _FEATURE_COL.match(name)
        if not m or int(m.group(1)) != i:
            raise MissingColumn(f"unexpected column {name!r}; feature columns must be f0..fn in order")
    return len(feature_cols), has_thumbnail


def _load_csv(path: Path) -> Dataset:
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataset(f"{path}: file is empty") from None
        n_features, has_thumbnail = _check_header(header)
        n_cols = 4 + n_features + (1 if has_thumbnail else 0)

        ids: list[int] = []
        xs: list[float] = []
        ys: list[float] = []
        labels: list[str] = []
        feats: list[list[float]] = []
        thumbs: list[str | None] = []
        for row_no, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != n_cols:
                raise RaggedFeatures(f"row {row_no}: expected {n_cols} columns, found {len(row)}")
            try:
                ids.append(int(row[0]))
            except ValueError:
                raise DataError(f"row {row_no}: id {row[0]!r} is not an integer") from None
            xs.append(_parse_float(row[1], row_no, "x"))
            ys.append(_parse_float(row[2], row_no, "y"))
            labels.append(row[3])
            if n_features:
                feats.append([_parse_float(row[4 + j], row_no, f"f{j}") for j in range(n_features)])
            if has_thumbnail:
                thumbs.append(row[4 + n_features] or None)
    if not ids:
        raise EmptyDataset(f"{path}: header only, no data rows")
    return Dataset(
        ids=ids,
        xy=np.column_stack([xs, ys]),
        labels=labels,
        features=np.array(feats) if feats else None,
        thumbnails=thumbs if has_thumbnail else None,
    )


def _load_jsonl(path: Path) -> Dataset:
    points: list[DataPoint] = []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"row {line_no}: invalid JSON ({exc.msg})") from None
            for key in ("id", "x", "y", "label"):
                if key not in obj:
                    raise MissingColumn(f"row {line_no}: missing key {key!r}")
            x = obj["x"]
            y = obj["y"]
            if not isinstance(x, (int, float)) or not isinstance(y, (int, float)) \
                    or not math.isfinite(x) or not math.isfinite(y):
                raise NonFiniteCoordinate(f"row {line_no}: non-finite coordinate")
            features = obj.get("features")
            points.append(
                DataPoint(
                    id=int(obj["id"]),
                    x=float(x),
                    y=float(y),
                    label=str(obj["label"]),
                    features=None if features is None else tuple(float(v) for v in features),
                    thumbnail=obj.get("thumbnail"),
                )
            )
    if not points:
        raise EmptyDataset(f"{path}: no data rows")
    try:
        return Dataset.from_points(points)
    except RaggedFeatures as exc:
        raise RaggedFeatures(str(exc)) from None


def load_dataset(path: str | Path, format: str = "csv") -> Dataset:
    """Load and validate a dataset; point order is preserved from the file."""
    if format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {format!r}")
    path = Path(path)
    if not path.exists():
        raise IoFailure(f"no such file: {path}")
    if format == "csv":
        return _load_csv(path)
    return _load_jsonl(path)


def save_dataset(dataset: Dataset, path: str | Path, format: str = "csv") -> None:
    """Persist a dataset so that load(save(d)) == d field-for-field."""
    if format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {format!r}")
    path = Path(path)
    try:
        if format == "csv":
            _save_csv(dataset, path)
        else:
            _save_jsonl(dataset, path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from None


def _save_csv(dataset: Dataset, path: Path) -> None:
    n_features = 0 if dataset.features is None else dataset.features.shape[1]
    header = ["id", "x", "y", "label"]
    header += [f"f{i}" for i in range(n_features)]
    if dataset.thumbnails is not None:
        header.append("thumbnail")
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(len(dataset)):
            row: list[str] = [
                str(int(dataset.ids[i])),
                repr(float(dataset.xy[i, 0])),
                repr(float(dataset.xy[i, 1])),
                dataset.labels[i],
            ]
            if n_features:
                row += [repr(float(v)) for v in dataset.features[i]]
            if dataset.thumbnails is not None:
                row.append(dataset.thumbnails[i] or "")
            writer.writerow(row)


def _save_jsonl(dataset: Dataset, path: Path) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for p in dataset.points:
            obj: dict = {"id": p.id, "x": p.x, "y": p.y, "label": p.label}
            if p.features is not None:
                obj["features"] = list(p.features)
            if p.thumbnail is not None:
                obj["thumbnail"] = p.thumbnail
            fh.write(json.dumps(obj, separators=(",", ":")) + "\n")
