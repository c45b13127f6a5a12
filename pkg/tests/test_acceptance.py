"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest -s tests/test_acceptance.py``).

Expected values come from independent oracles implemented here (brute-force
scans, exhaustive re-computation), never from the engine code under test.
"""

from __future__ import annotations

import json
import math
import time

import numpy as np

from scatternav.cli import main as cli_main
from scatternav.layout import Explorer, ScaleParams, f_scale, g_scale
from scatternav.overlap import Marker, remove_overlaps
from scatternav.sampling import GridConfig, build_grid, select_medoids
from scatternav.synth import make_blobs
from scatternav.tree import BuildConfig, build_tree, partition, validate_tree
from scatternav.sampling import Representative, RepresentativeSet

PASS = "ACCEPTANCE PASS"


def report(name: str, detail: str = "") -> None:
    print(f"{PASS}: {name}" + (f" ({detail})" if detail else ""))


# ---------------------------------------------------------------------------
# 1. Partition invariant suite: 50 seeded datasets, zero violations, < 60 s
# ---------------------------------------------------------------------------

def test_partition_invariant_suite():
    started = time.perf_counter()
    total_nodes = 0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(100, 10_001))
        blobs = int(rng.integers(1, 17))
        pi = int(rng.integers(5, max(6, min(200, n // 4))))
        spread = float(rng.uniform(1.0, 100.0))
        # cell size between 1/40 and 1/6 of the spread keeps grids sane
        k = spread * float(rng.uniform(0.025, 0.16))
        alpha = int(rng.integers(0, 3))
        ds = make_blobs(n, blobs, seed=seed, spread=spread)
        root = build_tree(ds, BuildConfig(grid=GridConfig(k=k, alpha=alpha), pi=pi))
        rep = validate_tree(root, ds, pi)
        assert rep.ok, f"seed {seed}: {rep.violations[:3]}"
        total_nodes += sum(1 for _ in root.walk())
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0, f"suite took {elapsed:.1f}s"
    report("partition invariant suite", f"50 trees, {total_nodes} nodes, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# 2. Medoid / nearest-assignment oracle equivalence (exact)
# ---------------------------------------------------------------------------

def brute_medoid(coords, ids):
    best_id, best_sum = None, None
    for i in range(len(ids)):
        total = sum(math.dist(coords[i], coords[j]) for j in range(len(ids)) if j != i)
        if best_sum is None or total < best_sum or (total == best_sum and ids[i] < best_id):
            best_id, best_sum = ids[i], total
    return best_id


def test_medoid_oracle_equivalence():
    mismatches = 0
    rng = np.random.default_rng(77)
    for trial in range(40):
        c = int(rng.integers(1, 501))
        coords = rng.normal(0, 1, size=(c, 2))
        ids = np.arange(c, dtype=np.int64)
        ds = (ids, coords)
        grid = build_grid(ds, GridConfig(k=1e9))  # single cell holds everyone
        reps = select_medoids(grid, ds)
        assert len(reps) == 1
        if reps.ids[0] != brute_medoid(coords, list(range(c))):
            mismatches += 1
    assert mismatches == 0
    report("medoid oracle equivalence", "40 cells up to 500 members, exact")


def test_nearest_assignment_oracle_equivalence():
    mismatches = 0
    rng = np.random.default_rng(78)
    for trial in range(8):
        n = int(rng.integers(100, 5001))
        m = int(rng.integers(2, 40))
        coords = rng.normal(0, 5, size=(n, 2))
        ids = np.arange(n, dtype=np.int64)
        rep_ids = sorted(int(i) for i in rng.choice(n, size=m, replace=False))
        reps = RepresentativeSet(tuple(Representative(r, 1) for r in rep_ids))
        clusters = partition((ids, coords), reps)
        got = {}
        for cl in clusters:
            for member in cl.member_ids:
                got[member] = cl.representative_id
        # oracle: exhaustive nearest scan with the declared tie rule
        for i in range(n):
            best, best_d = None, None
            for r in rep_ids:
                d = math.dist(coords[i], coords[r])
                if best_d is None or d < best_d:
                    best, best_d = r, d
            if got[i] != best:
                mismatches += 1
    assert mismatches == 0
    report("nearest-assignment oracle equivalence", "8 partitions up to 5000 points, exact")


# ---------------------------------------------------------------------------
# 3. Translation properties on 1000 randomized frames
# ---------------------------------------------------------------------------

def _toy_explorers():
    configs = [
        (240, 3, 21, 10.0, 1.2, 10),
        (500, 5, 4, 20.0, 1.6, 12),
        (800, 1, 9, 50.0, 1.5, 10),
        (300, 8, 2, 30.0, 2.5, 8),
    ]
    out = []
    for n, blobs, seed, spread, k, pi in configs:
        ds = make_blobs(n, blobs, seed=seed, spread=spread)
        root = build_tree(ds, BuildConfig(grid=GridConfig(k=k, alpha=1), pi=pi))
        if root.is_leaf:
            continue
        out.append((ds, root))
    assert out
    return out


def test_translation_properties_on_randomized_frames():
    frames_checked = 0
    rng = np.random.default_rng(99)
    worlds = _toy_explorers()
    while frames_checked < 1000:
        ds, root = worlds[int(rng.integers(0, len(worlds)))]
        ex = Explorer(root, ds, ScaleParams.for_dataset(ds))
        for _ in range(12):
            # choose a random valid translation op
            if ex.state.stack:
                top = ex.nodes[ex.state.stack[-1]]
                choices = ["resolve"]
                if top.children and ex.state.comparison is None:
                    choices.append("request")
                siblings = [nd for nd in (ex.top_nodes() if top.parent is ex.root else top.parent.children)
                            if nd.seq != top.seq and nd.seq not in ex.state.stack]
                if siblings and ex.state.comparison is None:
                    choices.append("compare")
                if ex.state.comparison is not None:
                    choices.append("resolve_comparison")
            else:
                choices = ["request"]
                siblings = []
            op = choices[int(rng.integers(0, len(choices)))]

            if op in ("resolve", "resolve_comparison"):
                ex.resolve_focus() if op == "resolve" else ex.resolve_comparison()
                continue

            pool = (ex.top_nodes() if not ex.state.stack else ex.nodes[ex.state.stack[-1]].children) \
                if op == "request" else siblings
            target = pool[int(rng.integers(0, len(pool)))]
            before = ex.frame
            tm = before.marker_for(target.seq)
            prev_pos = {m.node_seq: (m.x, m.y) for m in before.markers}
            sib_markers = [m for m in before.markers
                           if ex.nodes[m.node_seq].parent is target.parent
                           and ex.nodes[m.node_seq].level == target.level]
            sizes = [m.count for m in sib_markers] or [target.size]
            f_value = f_scale(target.size, min(sizes), max(sizes))
            assert 0.5 <= f_value <= 4.0

            mode = "normal" if op == "request" else "comparing"
            after = ex.request_focus(target.seq) if op == "request" else ex.compare_focus(target.seq)

            ox, oy = ex._rep_xy(target)
            shift = (tm.x - ox, tm.y - oy)
            for m in after.markers:
                if m.node_seq in prev_pos:
                    x0, y0 = prev_pos[m.node_seq]
                else:  # newly revealed child: re-anchored original position
                    cx, cy = ex._rep_xy(ex.nodes[m.node_seq])
                    x0, y0 = cx + shift[0], cy + shift[1]
                d = math.dist((x0, y0), (tm.x, tm.y))
                g_value = g_scale(d, ex.params, mode)
                assert 0.0 <= g_value <= 2.0
                if d == 0.0:
                    assert (m.x, m.y) == (x0, y0)  # fixed point
                if mode == "comparing" and d > ex.params.delta:
                    assert (m.x, m.y) == (x0, y0)  # bit-exact locality
                dx, dy = m.x - x0, m.y - y0
                rx, ry = x0 - tm.x, y0 - tm.y
                norm = math.hypot(dx, dy) * math.hypot(rx, ry)
                if norm > 0:
                    assert abs(dx * ry - dy * rx) / norm < 1e-9  # radial direction
                    assert dx * rx + dy * ry >= 0.0
            frames_checked += 1
            if frames_checked >= 1000:
                break
    report("translation properties", f"{frames_checked} randomized frames")


# ---------------------------------------------------------------------------
# 4. Reversibility: 100 seeded sequences of <= 20 ops unwind to the initial
#    frame byte-identically
# ---------------------------------------------------------------------------

def test_reversibility_100_sequences():
    ds = make_blobs(900, 4, seed=12, spread=40.0)
    root = build_tree(ds, BuildConfig(grid=GridConfig(k=2.2, alpha=1), pi=10))
    params = ScaleParams.for_dataset(ds)
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        ex = Explorer(root, ds, params)
        initial = ex.frame.to_json()
        n_ops = int(rng.integers(1, 21))
        for _ in range(n_ops):
            if ex.state.stack:
                top = ex.nodes[ex.state.stack[-1]]
                choices = ["resolve"]
                if top.children and ex.state.comparison is None:
                    choices.append("request")
                siblings = [nd for nd in (ex.top_nodes() if top.parent is ex.root else top.parent.children)
                            if nd.seq != top.seq and nd.seq not in ex.state.stack]
                if siblings and ex.state.comparison is None:
                    choices.append("compare")
                if ex.state.comparison is not None:
                    choices.append("resolve_comparison")
            else:
                choices = ["request"]
            op = choices[int(rng.integers(0, len(choices)))]
            if op == "request":
                pool = ex.top_nodes() if not ex.state.stack else ex.nodes[ex.state.stack[-1]].children
                ex.request_focus(pool[int(rng.integers(0, len(pool)))].seq)
            elif op == "compare":
                ex.compare_focus(siblings[int(rng.integers(0, len(siblings)))].seq)
            elif op == "resolve":
                ex.resolve_focus()
            else:
                ex.resolve_comparison()
        if ex.state.comparison is not None:
            ex.resolve_comparison()
        while ex.state.stack:
            ex.resolve_focus()
        assert ex.frame.to_json() == initial, f"sequence seed {seed} failed to unwind"
    report("reversibility", "100 sequences, byte-identical initial frames")


# ---------------------------------------------------------------------------
# 5. Overlap removal: zero overlapping pairs on 100 random sets; idempotent
# ---------------------------------------------------------------------------

def test_overlap_removal_100_sets():
    for seed in range(100):
        rng = np.random.default_rng(2000 + seed)
        n = int(rng.integers(2, 401))
        xy = rng.uniform(0, 10, size=(n, 2))
        # sized for roughly a third of the markers to start overlapping
        radii = rng.uniform(0.3, 1.6, size=n) * (10.0 / math.sqrt(n)) * 0.30
        markers = [Marker(id=i, x=float(xy[i, 0]), y=float(xy[i, 1]), radius=float(radii[i]))
                   for i in range(n)]
        result = remove_overlaps(markers)
        assert result.converged, f"seed {seed}: did not converge"
        pos = np.array([[m.x, m.y] for m in result.markers])
        rr = np.array([m.radius for m in result.markers])
        iu, ju = np.triu_indices(n, k=1)
        dist = np.hypot(pos[iu, 0] - pos[ju, 0], pos[iu, 1] - pos[ju, 1])
        overlapping = int(np.sum(dist < rr[iu] + rr[ju] - 1e-6))
        assert overlapping == 0, f"seed {seed}: {overlapping} overlapping pairs"
        again = remove_overlaps(result.markers)
        assert again.markers == result.markers, f"seed {seed}: not idempotent"
    report("overlap removal", "100 leaf-scale sets, zero overlaps, idempotent")


# ---------------------------------------------------------------------------
# 6. Reference operating point: k=15 px, alpha=1, pi=5 on a 10k embedding
# ---------------------------------------------------------------------------

def test_reference_operating_point():
    ds = make_blobs(10_000, 12, seed=42, spread=1000.0)  # pixel-scaled plane
    started = time.perf_counter()
    root = build_tree(ds, BuildConfig(grid=GridConfig(k=15.0, alpha=1), pi=5))
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"build took {elapsed:.2f}s"
    depth = max(n.level for n in root.walk()) - 1  # cluster levels below the root
    assert depth >= 2
    top_count = len(root.children)
    assert 0 < top_count < 0.10 * len(ds), f"{top_count} top-level representatives"
    report("reference operating point", f"{elapsed:.2f}s, {top_count} top reps, depth {depth}")


# ---------------------------------------------------------------------------
# 7. Large-scale stress: 96000 points, pi=200, < 60 s, invariants hold
# ---------------------------------------------------------------------------

def test_large_scale_stress():
    ds = make_blobs(96_000, 16, seed=1, spread=2000.0)
    started = time.perf_counter()
    root = build_tree(ds, BuildConfig(grid=GridConfig(k=60.0, alpha=1), pi=200))
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0, f"build took {elapsed:.1f}s"
    rep = validate_tree(root, ds, 200)
    assert rep.ok, rep.violations[:3]
    report("large-scale stress", f"96000 points in {elapsed:.1f}s, invariants hold")


# ---------------------------------------------------------------------------
# 8. Replay determinism: the replay command twice gives byte-identical files
# ---------------------------------------------------------------------------

def test_replay_determinism(tmp_path, capsys):
    data = tmp_path / "blobs.csv"
    tree = tmp_path / "tree.json"
    assert cli_main(["synth", "--n", "600", "--blobs", "4", "--seed", "8",
                     "--output", str(data)]) == 0
    assert cli_main(["build", "--input", str(data), "--k", "0.1", "--alpha", "1",
                     "--pi", "15", "--output", str(tree)]) == 0
    doc = json.loads(tree.read_text())
    tops = [n["seq"] for n in doc["nodes"] if n["parent"] == 0]
    script = tmp_path / "script.txt"
    script.write_text(
        f"request {tops[0]}\ncompare {tops[1]}\nresolve_comparison\nresolve\n"
        f"request {tops[1]}\nresolve\n",
        encoding="utf-8",
    )
    runs = []
    for name in ("r1", "r2"):
        out = tmp_path / name
        assert cli_main(["replay", "--input", str(data), "--tree", str(tree),
                         "--script", str(script), "--output-dir", str(out)]) == 0
        runs.append(sorted(out.glob("frame_*.json")))
    capsys.readouterr()
    assert len(runs[0]) == 7  # initial + one frame per scripted op
    for f1, f2 in zip(*runs):
        assert f1.read_bytes() == f2.read_bytes()
    report("replay determinism", "two runs, 7 byte-identical frames each")
