from __future__ import annotations

import math

import numpy as np
import pytest

from scatternav.errors import AlreadyFocused, EmptyStack, NotAChild, NotComparing, OutOfRange
from scatternav.layout import Explorer, ScaleParams, f_scale, g_scale, padded_polygon
from scatternav.sampling import GridConfig
from scatternav.synth import make_blobs
from scatternav.tree import BuildConfig, build_tree

from conftest import points_dataset


@pytest.fixture
def toy():
    """Three well-separated blobs, two tree levels below the root."""
    ds = make_blobs(240, 3, seed=21, spread=10.0)
    cfg = BuildConfig(grid=GridConfig(k=1.2, alpha=1), pi=10)
    root = build_tree(ds, cfg)
    assert not root.is_leaf and len(root.children) >= 3
    params = ScaleParams.for_dataset(ds)
    return Explorer(root, ds, params)


class TestFScale:
    def test_endpoints(self):
        assert f_scale(10, 10, 50) == 0.5
        assert f_scale(50, 10, 50) == 4.0

    def test_degenerate_midpoint(self):
        assert f_scale(10, 10, 10) == 2.25

    def test_linear_interior(self):
        assert f_scale(30, 10, 50) == pytest.approx(0.5 + 3.5 * 0.5)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            f_scale(9, 10, 50)


class TestGScale:
    def params(self, m=100.0, delta=10.0):
        return ScaleParams(M=m, delta=delta)

    def test_zero_distance_is_fixed_point(self):
        assert g_scale(0.0, self.params()) == 0.0

    def test_full_distance_hits_cap(self):
        p = self.params()
        assert g_scale(p.M, p) == pytest.approx(2.0)

    def test_clamped_beyond_m(self):
        p = self.params()
        assert g_scale(10 * p.M, p) == 2.0

    def test_comparison_cutoff(self):
        p = self.params(delta=10.0)
        assert g_scale(10.0 + 1e-9, p, "comparing") == 0.0
        assert g_scale(10.0, p, "comparing") > 0.0
        assert g_scale(5.0, p, "comparing") == g_scale(5.0, p, "normal")

    def test_monotone_non_decreasing(self):
        p = self.params()
        values = [g_scale(d, p) for d in np.linspace(0, p.M, 200)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_negative_distance_rejected(self):
        with pytest.raises(OutOfRange):
            g_scale(-1.0, self.params())


def eq1_oracle(prev_xy, focus_xy, f_value, params, mode="normal"):
    """Independent per-marker recomputation of the translation."""
    out = []
    for x0, y0 in prev_xy:
        d = math.dist((x0, y0), focus_xy)
        if mode == "comparing" and d > params.delta:
            g = 0.0
        elif params.M <= 0:
            g = 0.0
        else:
            g = min(max(2.0 * math.log1p(d) / math.log1p(params.M), 0.0), 2.0)
        out.append((x0 + (x0 - focus_xy[0]) * f_value * g,
                    y0 + (y0 - focus_xy[1]) * f_value * g))
    return out


class TestRequestFocus:
    def test_lone_top_node_fixed_point(self):
        # dataset below 2*pi: the root itself is the only visible node
        ds = points_dataset([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]])
        root = build_tree(ds, BuildConfig(grid=GridConfig(k=0.4), pi=5))
        assert root.is_leaf
        ex = Explorer(root, ds, ScaleParams(M=2.0, delta=0.5))
        f0 = ex.frame
        f1 = ex.request_focus(root.seq)
        assert f1.iteration == f0.iteration + 1
        m0, m1 = f0.markers[0], f1.markers[0]
        assert (m1.x, m1.y) == (m0.x, m0.y)  # marker at p' never moves
        assert m1.in_focus

    def test_displacement_matches_oracle(self, toy):
        ex = toy
        frame0 = ex.frame
        target = max(ex.top_nodes(), key=lambda n: n.size)
        tm = frame0.marker_for(target.seq)
        sizes = [m.count for m in frame0.markers]
        f_value = f_scale(target.size, min(sizes), max(sizes))
        context_prev = [(m.node_seq, m.x, m.y) for m in frame0.markers if m.node_seq != target.seq]

        frame1 = ex.request_focus(target.seq)
        expected = eq1_oracle([(x, y) for _, x, y in context_prev], (tm.x, tm.y), f_value, ex.params)
        for (seq, x0, y0), (ex_x, ex_y) in zip(context_prev, expected):
            m1 = frame1.marker_for(seq)
            assert m1 is not None
            assert m1.x == pytest.approx(ex_x, abs=1e-12)
            assert m1.y == pytest.approx(ex_y, abs=1e-12)
            # radial displacement: (new - prev) parallel to (prev - p')
            dx, dy = m1.x - x0, m1.y - y0
            rx, ry = x0 - tm.x, y0 - tm.y
            assert abs(dx * ry - dy * rx) < 1e-9
            assert dx * rx + dy * ry >= 0  # non-negative multiple

    def test_children_replace_target(self, toy):
        ex = toy
        target = max(ex.top_nodes(), key=lambda n: n.size)
        assert target.children
        frame1 = ex.request_focus(target.seq)
        visible = {m.node_seq for m in frame1.markers}
        assert target.seq not in visible
        assert {c.seq for c in target.children} <= visible

    def test_polygon_per_stack_level(self, toy):
        ex = toy
        t1 = max(ex.top_nodes(), key=lambda n: n.size)
        f1 = ex.request_focus(t1.seq)
        assert len(f1.focus_polygons) == 1
        t2 = max(t1.children, key=lambda n: n.size)
        f2 = ex.request_focus(t2.seq)
        assert len(f2.focus_polygons) == 2
        assert [p.level for p in f2.focus_polygons] == [1, 2]
        for poly in f2.focus_polygons:
            assert len(poly.vertices) >= 3

    def test_not_a_child(self, toy):
        ex = toy
        tops = ex.top_nodes()
        ex.request_focus(tops[0].seq)
        with pytest.raises(NotAChild):
            ex.request_focus(tops[1].seq)  # sibling, not a child

    def test_already_focused(self, toy):
        ex = toy
        t = ex.top_nodes()[0]
        ex.request_focus(t.seq)
        with pytest.raises(AlreadyFocused):
            ex.request_focus(t.seq)


class TestResolveFocus:
    def test_request_resolve_identity(self, toy):
        ex = toy
        before = ex.frame
        ex.request_focus(ex.top_nodes()[0].seq)
        after = ex.resolve_focus()
        assert after.to_json() == before.to_json()

    def test_empty_stack(self, toy):
        with pytest.raises(EmptyStack):
            toy.resolve_focus()

    def test_depth_three_descent_and_return(self):
        ds = make_blobs(2000, 1, seed=3, spread=50.0)
        cfg = BuildConfig(grid=GridConfig(k=1.5, alpha=1), pi=10)
        root = build_tree(ds, cfg)
        ex = Explorer(root, ds, ScaleParams.for_dataset(ds))
        initial = ex.frame.to_json()

        def subtree_depth(n):
            return max(m.level for m in n.walk())

        node = None
        for _ in range(3):
            candidates = ex.top_nodes() if node is None else node.children
            # follow the deepest chain; a leaf is a valid last hop
            node = max(candidates, key=lambda n: (subtree_depth(n), n.size))
            ex.request_focus(node.seq)
        assert len(ex.state.stack) == 3
        for _ in range(3):
            ex.resolve_focus()
        assert ex.frame.to_json() == initial
        assert ex.state.stack == ()


class TestCompareFocus:
    def test_empty_stack_degrades_to_request(self, toy):
        ex = toy
        t = ex.top_nodes()[0]
        frame = ex.compare_focus(t.seq)
        assert ex.state.stack == (t.seq,)
        assert ex.state.comparison is None
        assert frame.focus_polygons[0].comparison is False

    def test_markers_beyond_delta_bit_identical(self, toy):
        ex = toy
        tops = sorted(ex.top_nodes(), key=lambda n: n.size)
        ex.request_focus(tops[-1].seq)
        before = {m.node_seq: (m.x, m.y) for m in ex.frame.markers}
        target = tops[0]
        tm = ex.frame.marker_for(target.seq)
        frame = ex.compare_focus(target.seq)
        for m in frame.markers:
            if m.node_seq not in before:
                continue
            x0, y0 = before[m.node_seq]
            if math.dist((x0, y0), (tm.x, tm.y)) > ex.params.delta:
                assert (m.x, m.y) == (x0, y0)  # bit-exact

    def test_comparison_bounded_versus_normal(self, toy):
        # the second focus expands less than the same op in normal mode
        ex = toy
        tops = sorted(ex.top_nodes(), key=lambda n: n.size)
        ex.request_focus(tops[-1].seq)
        base = {m.node_seq: (m.x, m.y) for m in ex.frame.markers}
        target = tops[0]

        frame_cmp = ex.compare_focus(target.seq)
        disp_cmp = max(
            math.dist((m.x, m.y), base[m.node_seq])
            for m in frame_cmp.markers if m.node_seq in base
        )
        ex.resolve_comparison()

        # same target, normal-mode translation on the same frame
        target_node = ex.nodes[target.seq]
        frame_norm = ex._apply_translation(target_node, "normal", ex.state)
        disp_norm = max(
            math.dist((m.x, m.y), base[m.node_seq])
            for m in frame_norm.markers if m.node_seq in base
        )
        assert disp_cmp < disp_norm

    def test_two_polygons_while_comparing(self, toy):
        ex = toy
        tops = ex.top_nodes()
        ex.request_focus(tops[0].seq)
        frame = ex.compare_focus(tops[1].seq)
        kinds = [(p.comparison, p.node_seq) for p in frame.focus_polygons]
        assert (False, tops[0].seq) in kinds
        assert (True, tops[1].seq) in kinds

    def test_resolve_comparison_restores(self, toy):
        ex = toy
        tops = ex.top_nodes()
        ex.request_focus(tops[0].seq)
        checkpoint = ex.frame.to_json()
        ex.compare_focus(tops[1].seq)
        restored = ex.resolve_comparison()
        assert restored.to_json() == checkpoint

    def test_resolve_comparison_requires_comparing(self, toy):
        with pytest.raises(NotComparing):
            toy.resolve_comparison()

    def test_interleaved_fuzz_checkpoints(self):
        ds = make_blobs(800, 4, seed=9, spread=20.0)
        root = build_tree(ds, BuildConfig(grid=GridConfig(k=2.0, alpha=1), pi=10))
        params = ScaleParams.for_dataset(ds)
        rng = np.random.default_rng(31)
        for trial in range(10):
            ex = Explorer(root, ds, params)
            initial = ex.frame.to_json()
            journal = []  # snapshots to re-check on the way down
            for _ in range(20):
                ops = []
                if ex.state.stack:
                    top = ex.nodes[ex.state.stack[-1]]
                    ops.append("resolve")
                    kids = top.children
                    if kids and ex.state.comparison is None:
                        ops.append("request")
                    siblings = [n for n in (ex.top_nodes() if top.parent is ex.root else top.parent.children)
                                if n.seq != top.seq and n.seq not in ex.state.stack]
                    if siblings and ex.state.comparison is None:
                        ops.append("compare")
                    if ex.state.comparison is not None:
                        ops.append("resolve_comparison")
                else:
                    ops.append("request")
                op = ops[int(rng.integers(0, len(ops)))]
                if op == "request":
                    pool = ex.top_nodes() if not ex.state.stack else ex.nodes[ex.state.stack[-1]].children
                    target = pool[int(rng.integers(0, len(pool)))]
                    journal.append(ex.frame.to_json())
                    ex.request_focus(target.seq)
                elif op == "compare":
                    target = siblings[int(rng.integers(0, len(siblings)))]
                    ex.compare_focus(target.seq)
                elif op == "resolve":
                    ex.resolve_focus()
                    journal and journal.pop()
                else:
                    ex.resolve_comparison()
            # unwinding everything restores the initial frame exactly
            if ex.state.comparison is not None:
                ex.resolve_comparison()
            while ex.state.stack:
                ex.resolve_focus()
            assert ex.frame.to_json() == initial


class TestGlobalLevel:
    def test_level_one_equals_initial(self, toy):
        ex = toy
        initial = ex.frame.to_json()
        ex.request_focus(ex.top_nodes()[0].seq)
        frame = ex.set_global_level(1)
        assert frame.to_json() == initial

    def test_deeper_level_shows_more_markers(self, toy):
        ex = toy
        n1 = len(ex.set_global_level(1).markers)
        n2 = len(ex.set_global_level(2).markers)
        assert n2 >= n1
        counts = sum(m.count for m in ex.frame.markers)
        assert counts == len(ex.dataset)  # every point represented exactly once

    def test_invalid_level(self, toy):
        with pytest.raises(OutOfRange):
            toy.set_global_level(0)


class TestFrameProperties:
    def test_radius_monotone_in_count(self, toy):
        markers = sorted(toy.frame.markers, key=lambda m: m.count)
        for a, b in zip(markers, markers[1:]):
            assert b.radius >= a.radius

    def test_coordinates_finite_under_deep_focus(self, toy):
        ex = toy
        node = None
        while True:
            pool = ex.top_nodes() if node is None else node.children
            if not pool:
                break
            node = max(pool, key=lambda n: n.size)
            ex.request_focus(node.seq)
            assert all(math.isfinite(m.x) and math.isfinite(m.y) for m in ex.frame.markers)
            if node.is_leaf:
                break

    def test_frame_export_replayable(self, toy):
        ex = toy
        ex.request_focus(ex.top_nodes()[0].seq)
        doc = ex.frame.to_dict()
        assert set(doc) == {"iteration", "markers", "focus_polygons", "state", "level_colors"}
        assert doc["state"]["stack"] == list(ex.state.stack)
        assert doc["level_colors"]


class TestPaddedPolygon:
    def test_triangle_contains_input(self):
        pts = np.array([[0, 0], [4, 0], [0, 4]], dtype=float)
        poly = padded_polygon(pts, pad=0.5)
        assert len(poly) == 3

    def test_collinear_becomes_rectangle(self):
        pts = np.array([[0, 0], [1, 0], [2, 0]], dtype=float)
        poly = padded_polygon(pts, pad=0.25)
        assert len(poly) == 4

    def test_single_point_box(self):
        poly = padded_polygon(np.array([[3.0, 3.0]]), pad=1.0)
        assert len(poly) == 4
