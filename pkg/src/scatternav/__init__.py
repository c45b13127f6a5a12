"""Hierarchical focus+context exploration of 2D embeddings.

The package turns a large scatter plot into a navigable cluster tree:
grid-based medoid sampling picks representatives, recursive partitioning
builds the hierarchy, and a radial focus+context translation lays out each
interaction step without ever dropping a point.
"""

from .data import Bounds, DataPoint, Dataset, load_dataset, save_dataset
from .errors import ScatterNavError
from .layout import Explorer, FocusState, LayoutFrame, ScaleParams, f_scale, g_scale
from .metrics import MetricReport, coverage, redundancy, reservoir_sample
from .overlap import Marker, OverlapResult, remove_overlaps
from .sampling import Grid, GridConfig, RepresentativeSet, build_grid, remove_redundant, sample, select_medoids
from .summaries import ClusterSummary, class_purity, summarize
from .synth import make_blobs
from .tree import (
    BuildConfig,
    TreeNode,
    build_tree,
    load_tree,
    merge_invalid,
    partition,
    save_tree,
    validate_tree,
)

__version__ = "0.1.0"

__all__ = [
    "Bounds",
    "BuildConfig",
    "ClusterSummary",
    "DataPoint",
    "Dataset",
    "Explorer",
    "FocusState",
    "Grid",
    "GridConfig",
    "LayoutFrame",
    "Marker",
    "MetricReport",
    "OverlapResult",
    "RepresentativeSet",
    "ScaleParams",
    "ScatterNavError",
    "TreeNode",
    "build_grid",
    "build_tree",
    "class_purity",
    "coverage",
    "f_scale",
    "g_scale",
    "load_dataset",
    "load_tree",
    "make_blobs",
    "merge_invalid",
    "partition",
    "redundancy",
    "remove_overlaps",
    "remove_redundant",
    "reservoir_sample",
    "sample",
    "save_dataset",
    "save_tree",
    "select_medoids",
    "summarize",
    "validate_tree",
]
