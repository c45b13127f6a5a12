"""Exercise the HTTP API in-process and prove replay determinism.

The same scripted op sequence on two fresh sessions yields byte-identical
frames: trees are cached by dataset fingerprint + config, sessions own only
their focus state, and every frame serializes canonically.
"""

import json

from fastapi.testclient import TestClient

from scatternav.service import create_app
from scatternav.synth import make_blobs

client = TestClient(create_app())

dataset = make_blobs(800, 4, seed=2, spread=50.0)
payload = {"points": [
    {"id": p.id, "x": p.x, "y": p.y, "label": p.label} for p in dataset.points
]}
dataset_id = client.post("/datasets", json=payload).json()["dataset_id"]
print(f"ingested dataset {dataset_id[:16]}... ({len(dataset)} points)")


def run_session() -> str:
    body = client.post("/sessions", json={
        "dataset_id": dataset_id, "k": 2.0, "alpha": 1, "pi": 12,
    }).json()
    sid, frames = body["session_id"], [body["frame"]]
    top = frames[0]["markers"][0]["node"]
    sibling = frames[0]["markers"][1]["node"]
    for op in ({"op": "request", "target": top},
               {"op": "compare", "target": sibling},
               {"op": "resolve_comparison"},
               {"op": "resolve"}):
        frames.append(client.post(f"/sessions/{sid}/ops", json=op).json()["frame"])
    return json.dumps(frames, sort_keys=True)


a, b = run_session(), run_session()
print(f"two sessions, same script: byte-identical = {a == b}")

frame = json.loads(a)[0]
node_id = f"{frame['tree']}:{frame['markers'][0]['node']}"
summary = client.get(f"/nodes/{node_id}/summary").json()["summary"]
print(f"summary of {node_id}: classes {summary['class_histogram']}")

leaf = next((m for m in frame["markers"] if m["is_leaf"]), None)
if leaf is not None:
    pts = client.get(f"/nodes/{frame['tree']}:{leaf['node']}/leaf-points").json()
    print(f"leaf {leaf['node']}: {len(pts['points'])} overlap-free points")
