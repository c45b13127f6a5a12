"""HTTP facade over the exploration engine.

Endpoints:

* ``POST /datasets``                  ingest a dataset (JSON points)
* ``POST /sessions``                  build/fetch a tree, open a session
* ``POST /sessions/{id}/ops``         apply a focus operation
* ``GET  /sessions/{id}/frame``       current frame
* ``GET  /nodes/{id}/summary``        cluster summary (id = "tree:seq")
* ``GET  /nodes/{id}/leaf-points``    overlap-free leaf projection

Trees are cached by (dataset fingerprint, build config); sessions share
them immutably. Ops within one session are serialized by a lock, so
replaying a recorded op sequence on a fresh session reproduces every frame
byte-identically. Error payloads carry machine-readable ``code`` fields
matching the engine's exception names.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import errors as err
from .data import DataPoint, Dataset
from .layout import Explorer, LayoutFrame, ScaleParams
from .overlap import Marker as OverlapMarker
from .overlap import remove_overlaps
from .sampling import GridConfig
from .summaries import ClusterSummary, summarize
from .tree import BuildConfig, TreeNode, build_tree

_STATUS = {
    "MissingColumn": 400,
    "NonFiniteCoordinate": 400,
    "DuplicateId": 400,
    "RaggedFeatures": 400,
    "EmptyDataset": 400,
    "InvalidConfig": 400,
    "EmptyInput": 400,
    "TooManyMarkers": 400,
    "OutOfRange": 400,
    "UnknownDataset": 404,
    "UnknownSession": 404,
    "UnknownNode": 404,
    "NotAChild": 409,
    "AlreadyFocused": 409,
    "EmptyStack": 409,
    "NotComparing": 409,
    "NotALeaf": 409,
    "BuildFailure": 500,
    "IoFailure": 500,
}


class PointIn(BaseModel):
    id: int
    x: float
    y: float
    label: str
    features: Optional[list[float]] = None
    thumbnail: Optional[str] = None


class DatasetIn(BaseModel):
    points: list[PointIn]


class SessionIn(BaseModel):
    dataset_id: str
    k: float
    alpha: int = 1
    pi: int = 200
    delta: Optional[float] = None  # layout units; overrides the pixel conversion
    delta_px: float = 100.0
    viewport_px: float = 1000.0


class OpIn(BaseModel):
    op: str
    target: Optional[int] = None
    level: Optional[int] = None


@dataclass
class Session:
    session_id: str
    tree_id: str
    explorer: Explorer
    lock: threading.Lock = field(default_factory=threading.Lock)


@dataclass
class TreeEntry:
    tree_id: str
    root: TreeNode
    dataset: Dataset
    config: BuildConfig
    summaries: dict[int, ClusterSummary] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def summary(self, seq: int) -> ClusterSummary:
        with self.lock:
            if seq not in self.summaries:
                node = next((n for n in self.root.walk() if n.seq == seq), None)
                if node is None:
                    raise err.UnknownNode(f"no node with seq {seq}")
                self.summaries[seq] = summarize(node, self.dataset)
            return self.summaries[seq]


class EngineState:
    def __init__(self) -> None:
        self.datasets: dict[str, Dataset] = {}
        self.trees: dict[str, TreeEntry] = {}
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()

    @staticmethod
    def tree_key(fingerprint: str, config: BuildConfig) -> str:
        return f"{fingerprint[:16]}-k{config.grid.k}-a{config.grid.alpha}-p{config.pi}"

    def get_tree(self, dataset: Dataset, config: BuildConfig) -> TreeEntry:
        key = self.tree_key(dataset.fingerprint(), config)
        with self.lock:
            if key not in self.trees:
                try:
                    root = build_tree(dataset, config)
                except err.ScatterNavError:
                    raise
                except Exception as exc:  # pragma: no cover - defensive
                    raise err.BuildFailure(f"tree build failed: {exc}") from exc
                self.trees[key] = TreeEntry(tree_id=key, root=root, dataset=dataset, config=config)
            return self.trees[key]


def _frame_payload(entry: TreeEntry, frame: LayoutFrame, with_summaries: bool = True) -> dict[str, Any]:
    doc = frame.to_dict()
    doc["tree"] = entry.tree_id
    if with_summaries:
        doc["summaries"] = {
            str(m.node_seq): entry.summary(m.node_seq).to_dict() for m in frame.markers
        }
    return doc


def create_app() -> FastAPI:
    app = FastAPI(title="scatternav", version="0.1.0")
    state = EngineState()
    app.state.engine = state

    @app.exception_handler(err.ScatterNavError)
    async def engine_error_handler(_: Request, exc: err.ScatterNavError):
        return JSONResponse(
            status_code=_STATUS.get(exc.code, 500),
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    def _session(session_id: str) -> Session:
        session = state.sessions.get(session_id)
        if session is None:
            raise err.UnknownSession(f"no session {session_id}")
        return session

    def _node_ref(node_id: str) -> tuple[TreeEntry, int]:
        tree_id, _, seq_text = node_id.rpartition(":")
        entry = state.trees.get(tree_id)
        if entry is None or not seq_text.isdigit():
            raise err.UnknownNode(f"no node {node_id!r}")
        return entry, int(seq_text)

    @app.post("/datasets")
    def ingest_dataset(body: DatasetIn):
        points = [
            DataPoint(
                id=p.id, x=p.x, y=p.y, label=p.label,
                features=None if p.features is None else tuple(p.features),
                thumbnail=p.thumbnail,
            )
            for p in body.points
        ]
        dataset = Dataset.from_points(points)
        dataset_id = dataset.fingerprint()
        with state.lock:
            state.datasets[dataset_id] = dataset
        return {"dataset_id": dataset_id, "n": len(dataset)}

    @app.post("/sessions")
    def create_session(body: SessionIn):
        dataset = state.datasets.get(body.dataset_id)
        if dataset is None:
            raise err.UnknownDataset(f"no dataset {body.dataset_id}")
        config = BuildConfig(grid=GridConfig(k=body.k, alpha=body.alpha), pi=body.pi)
        entry = state.get_tree(dataset, config)
        if body.delta is not None:
            params = ScaleParams(M=dataset.max_pairwise_distance_estimate or 1.0, delta=body.delta)
        else:
            params = ScaleParams.for_dataset(dataset, delta_px=body.delta_px, viewport_px=body.viewport_px)
        explorer = Explorer(entry.root, dataset, params)
        session = Session(session_id=uuid.uuid4().hex, tree_id=entry.tree_id, explorer=explorer)
        with state.lock:
            state.sessions[session.session_id] = session
        return {"session_id": session.session_id, "frame": _frame_payload(entry, explorer.frame)}

    @app.post("/sessions/{session_id}/ops")
    def apply_op(session_id: str, body: OpIn):
        session = _session(session_id)
        entry = state.trees[session.tree_id]
        with session.lock:
            explorer = session.explorer
            if body.op == "request":
                if body.target is None:
                    raise err.InvalidConfig("op 'request' needs a target node")
                if body.target not in explorer.nodes:
                    raise err.UnknownNode(f"no node with seq {body.target}")
                frame = explorer.request_focus(body.target)
            elif body.op == "resolve":
                frame = explorer.resolve_focus()
            elif body.op == "compare":
                if body.target is None:
                    raise err.InvalidConfig("op 'compare' needs a target node")
                if body.target not in explorer.nodes:
                    raise err.UnknownNode(f"no node with seq {body.target}")
                frame = explorer.compare_focus(body.target)
            elif body.op == "resolve_comparison":
                frame = explorer.resolve_comparison()
            elif body.op == "set_global_level":
                if body.level is None:
                    raise err.InvalidConfig("op 'set_global_level' needs a level")
                frame = explorer.set_global_level(body.level)
            else:
                raise err.InvalidConfig(f"unknown op {body.op!r}")
        return {"frame": _frame_payload(entry, frame)}

    @app.get("/sessions/{session_id}/frame")
    def get_frame(session_id: str):
        session = _session(session_id)
        entry = state.trees[session.tree_id]
        with session.lock:
            return {"frame": _frame_payload(entry, session.explorer.frame)}

    @app.get("/nodes/{node_id}/summary")
    def node_summary(node_id: str):
        entry, seq = _node_ref(node_id)
        return {"node": node_id, "summary": entry.summary(seq).to_dict()}

    @app.get("/nodes/{node_id}/leaf-points")
    def leaf_points(node_id: str):
        entry, seq = _node_ref(node_id)
        node = next((n for n in entry.root.walk() if n.seq == seq), None)
        if node is None:
            raise err.UnknownNode(f"no node {node_id!r}")
        if not node.is_leaf:
            raise err.NotALeaf(f"node {node_id!r} has children; leaf points apply to leaves only")
        dataset = entry.dataset
        m_bound = dataset.max_pairwise_distance_estimate or 1.0
        radius = 0.004 * m_bound
        markers = [
            OverlapMarker(
                id=int(pid),
                x=float(dataset.xy[dataset.index_of(int(pid)), 0]),
                y=float(dataset.xy[dataset.index_of(int(pid)), 1]),
                radius=radius,
            )
            for pid in node.member_ids
        ]
        result = remove_overlaps(markers, max_markers=4 * entry.config.pi)
        payload = []
        for marker in result.markers:
            idx = dataset.index_of(marker.id)
            payload.append(
                {
                    "id": marker.id,
                    "x": marker.x,
                    "y": marker.y,
                    "radius": marker.radius,
                    "label": dataset.labels[idx],
                    "thumbnail": None if dataset.thumbnails is None else dataset.thumbnails[idx],
                }
            )
        return {"node": node_id, "points": payload, "converged": result.converged}

    return app


app = create_app()
