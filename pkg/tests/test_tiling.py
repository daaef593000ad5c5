import random
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutvor.flow import FlowNetwork
from cutvor.graph import Multigraph, adjoint, coboundary, components, indicator
from cutvor.tiling import MixedTiling, TilingError
from oracles import random_connected_multigraph, tile_data

HALF = Fraction(1, 2)
K3 = Multigraph(3, ((0, 1), (0, 2), (1, 2)))
EDGE = Multigraph(2, ((0, 1),))


def subset_test(setup, p, f, strict=False):
    """|w(S)| <= cut_f(S)/2 for every vertex subset S, w = p - center."""
    t = setup.tile_point(f)
    w = [Fraction(a) - c for a, c in zip(p, t.center)]
    n = setup.graph.vertex_count
    for size in range(1, n):
        for S in combinations(range(n), size):
            cut = sum(1 for k in t.subgraph if (setup.graph.edges[k][0] in S) != (setup.graph.edges[k][1] in S))
            total = abs(sum(w[v] for v in S))
            if 2 * total > cut or (strict and 2 * total == cut):
                return False
    return True


@st.composite
def setups(draw, max_vertices=4, max_edges=5, max_total=8):
    seed = draw(st.integers(min_value=0, max_value=10**6))
    rng = random.Random(seed)
    n, edges = random_connected_multigraph(rng, max_vertices, max_edges)
    budget = max_total - len(edges)
    lengths = []
    for _ in edges:
        extra = rng.randint(0, max(0, min(2, budget)))
        budget -= extra
        lengths.append(1 + extra)
    twist = [rng.randint(-2, 2) for _ in edges] if draw(st.booleans()) else None
    f = tuple(rng.randint(-4, 4) for _ in range(n))
    return MixedTiling(Multigraph(n, tuple(edges)), lengths, twist), f


def random_point_near(setup, t, rng, spread=2):
    n = setup.graph.vertex_count
    w = [Fraction(rng.randint(-spread * 12, spread * 12), 12) for _ in range(n)]
    w[0] -= sum(w)
    return tuple(c + x for c, x in zip(t.center, w))


class TestTilePoint:
    def test_unit_lengths(self, k4):
        T = MixedTiling(k4)
        t = T.tile_point((0, 3, -1, 2))
        assert t.dm == coboundary(k4, (0, 3, -1, 2))
        assert t.subgraph == tuple(range(6)) and t.connected

    def test_single_edge(self):
        t = MixedTiling(EDGE, (2,)).tile_point((0, 1))
        assert t.dm == (HALF,) and t.subgraph == () and not t.connected
        t = MixedTiling(EDGE, (2,), (1,)).tile_point((0, 0))
        assert t.dm == (HALF,) and t.subgraph == ()

    def test_constant_shift_invariance(self):
        T = MixedTiling(K3, (2, 3, 5), (1, 0, -2))
        assert T.tile_point((4, 1, -3)) == T.tile_point((11, 8, 4))

    @given(setups())
    @settings(max_examples=80, deadline=None)
    def test_matches_floor_oracle(self, data):
        T, f = data
        t = T.tile_point(f)
        dm, sub = tile_data(T.graph.vertex_count, T.graph.edges, T.lengths, T.twist, f)
        assert t.dm == dm and t.subgraph == sub
        assert t.center == adjoint(T.graph, dm)
        expected = len(components(T.graph.vertex_count, [T.graph.edges[k] for k in sub])) == 1
        assert t.connected == expected

    def test_rejects_wrong_length(self):
        with pytest.raises(TilingError):
            MixedTiling(K3, (1, 1))
        with pytest.raises(TilingError):
            MixedTiling(K3, (1, 0, 1))


class TestTheta:
    def test_examples(self):
        T = MixedTiling(EDGE, (2,))
        assert T.theta_project((HALF,), (0, 1)) == (HALF,)
        assert T.theta_project((1,), (0, 1)) == (HALF,)
        U = MixedTiling(K3)
        x = (Fraction(1, 3), Fraction(-1, 4), Fraction(2, 5))
        assert U.theta_project(x, (0, 0, 0)) == x

    def test_rejects_points_outside_cube(self):
        with pytest.raises(TilingError):
            MixedTiling(EDGE, (2,)).theta_project((2,), (0, 1))

    @given(setups(), st.data())
    @settings(max_examples=80, deadline=None)
    def test_well_defined_on_overlaps(self, data, draw):
        T, f = data
        g = T.graph
        S = draw.draw(st.sets(st.integers(0, g.vertex_count - 1), min_size=1, max_size=g.vertex_count - 1))
        h = tuple(a + c for a, c in zip(f, indicator(g.vertex_count, S)))
        df, dh = coboundary(g, f), coboundary(g, h)
        x = []
        for a, b in zip(df, dh):
            if a == b:
                x.append(a + draw.draw(st.fractions(-HALF, HALF, max_denominator=6)))
            else:
                x.append(Fraction(a + b, 2))
        assert T.theta_project(x, f) == T.theta_project(x, h)


class TestFiber:
    def test_connected_subgraph_gives_a_point(self):
        fib = MixedTiling(K3).fiber_over((0, 2, 5))
        assert fib.compact and fib.points == ((0,),) and fib.intervals == {}

    def test_single_edge_length_three(self):
        fib = MixedTiling(EDGE, (3,)).fiber_over((0, 1))
        assert fib.intervals == {(0, 1): (0, 1)}
        assert fib.functions((0, 1)) == {(0, 1), (0, 2)}

    def test_k3_even_lengths(self):
        fib = MixedTiling(K3, (2, 2, 2)).fiber_over((0, 1, 0))
        assert fib.components == ((0, 2), (1,))
        assert fib.intervals == {(0, 1): (0, 0)}
        assert fib.functions((0, 1, 0)) == {(0, 1, 0)}

    @given(setups())
    @settings(max_examples=40, deadline=None)
    def test_intervals_contain_zero(self, data):
        T, f = data
        for lo, hi in T.fiber_over(f).intervals.values():
            assert lo <= 0 <= hi

    @given(setups(max_vertices=3, max_edges=4))
    @settings(max_examples=30, deadline=None)
    def test_matches_box_search(self, data):
        T, f = data
        fib = T.fiber_over(f)
        R = sum(T.lengths)
        target = T.tile_point(f).dm
        found = set()
        for rest in product(range(-R, R + 1), repeat=T.graph.vertex_count - 1):
            h = (f[0], *(a + b for a, b in zip(f[1:], rest)))
            if T.tile_point(h).dm == target:
                found.add(h)
        if fib.compact:
            assert found == fib.functions(f)
        else:
            # an unbounded fiber must leave the box
            assert any(max(abs(a - b) for a, b in zip(h, f)) == R for h in found)


class TestNeighbors:
    def test_unit_lengths(self):
        T = MixedTiling(K3)
        nb = T.neighbor_across((0, 0, 0), {1})
        assert nb.n == 1 and nb.h == (0, 1, 0)
        assert nb.eta == (1, 0, -1)

    def test_drops_the_long_edge(self):
        T = MixedTiling(K3, (1, 1, 2))
        nb = T.neighbor_across((0, 0, 0), {2})
        assert nb.n == 1 and nb.h == (0, 0, 1)
        assert T.tile_point(nb.h).subgraph == (0, 1)
        assert nb.eta == (0, 1, HALF)

    def test_rejects_non_bond(self, path3):
        T = MixedTiling(path3)
        with pytest.raises(TilingError):
            T.neighbor_across((0, 0, 0), {0, 2})

    @given(setups())
    @settings(max_examples=40, deadline=None)
    def test_minimal_n_and_shared_facet(self, data):
        T, f = data
        if not T.tile_point(f).connected:
            return
        for S in T.bonds_of_tile(f):
            nb = T.neighbor_across(f, S)
            chi = indicator(T.graph.vertex_count, S)
            for m in range(1, nb.n):
                assert not T.tile_point([a + m * c for a, c in zip(f, chi)]).connected
            diff = tuple(b - a for a, b in zip(T.tile_point(f).dm, T.tile_point(nb.h).dm))
            assert diff == nb.eta
            shared = T.tiles_intersect(f, nb.h)
            assert shared is not None and shared.codim == 1
            assert T.face_vertices(f, shared.first) == T.face_vertices(nb.h, shared.second)


class TestIntersections:
    def test_same_tile(self):
        T = MixedTiling(K3, (2, 3, 5))
        f = (0, 2, 0)
        assert T.tile_point(f).connected
        shared = T.tiles_intersect(f, (3, 5, 3))
        assert shared.codim == 0 and len(shared.partition) == 1

    def test_distant_tiles(self):
        T = MixedTiling(K3)
        assert T.tiles_intersect((0, 0, 0), (0, 2, 0)) is None
        assert T.tiles_intersect((0, 0, 0), (0, 5, 5)) is None

    def test_vertex_contact_on_four_cycle(self, c4):
        T = MixedTiling(c4)
        shared = T.tiles_intersect((0, 0, 0, 0), (0, 1, 2, 1))
        assert shared.codim == 3 and len(shared.partition) == 3
        point = T.face_vertices((0, 0, 0, 0), shared.first)
        assert len(point) == 1
        assert point == T.face_vertices((0, 1, 2, 1), shared.second)


class TestMembership:
    def test_center_and_far_point(self):
        T = MixedTiling(K3, (1, 1, 2))
        t = T.tile_point((0, 0, 0))
        assert T.tile_contains(t.center, t.f)
        assert T.tile_contains(t.center, t.f, strict=True)
        far = (t.center[0] + 3, t.center[1] - 3, t.center[2])
        assert not T.tile_contains(far, t.f)

    def test_boundary_midpoint_in_both(self):
        T = MixedTiling(K3, (1, 1, 2))
        f = (0, 0, 0)
        nb = T.neighbor_across(f, {2})
        shared = T.tiles_intersect(f, nb.h)
        verts = T.face_vertices(f, shared.first)
        mid = tuple(sum(c) / len(verts) for c in zip(*verts))
        assert T.tile_contains(mid, f) and T.tile_contains(mid, nb.h)
        assert not T.tile_contains(mid, f, strict=True)
        assert not T.tile_contains(mid, nb.h, strict=True)

    def test_rejects_bad_points(self):
        T = MixedTiling(K3)
        with pytest.raises(TilingError):
            T.tile_contains((1, 0, 0), (0, 0, 0))
        with pytest.raises(TilingError):
            MixedTiling(EDGE, (2,)).tile_contains((0, 0), (0, 1))

    @given(setups(max_vertices=5, max_edges=7, max_total=10), st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_flow_agrees_with_inequalities(self, data, seed):
        T, f = data
        t = T.tile_point(f)
        if not t.connected:
            return
        rng = random.Random(seed)
        for _ in range(5):
            p = random_point_near(T, t, rng)
            for strict in (False, True):
                expected = subset_test(T, p, f, strict)
                assert T.tile_contains(p, f, strict) == expected
                assert T.membership_by_cuts(p, f, strict) == expected

    def test_tiles_are_translated_cells(self):
        T = MixedTiling(K3, (2, 3, 5))
        for t in T.enumerate_tiling().tiles:
            for v in T.tile_vertices(t.f):
                assert T.tile_contains(v, t.f)
                assert not T.tile_contains(v, t.f, strict=True)


class TestProjection:
    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_cube_maps_into_its_tile(self, seed):
        rng = random.Random(seed)
        n, edges = random_connected_multigraph(rng, 4, 6)
        g = Multigraph(n, tuple(edges))
        T = MixedTiling(g)
        f = [rng.randint(-3, 3) for _ in range(n)]
        x = [a + Fraction(rng.randint(-6, 6), 12) for a in coboundary(g, f)]
        assert T.theta_project(x, f) == tuple(x)
        assert T.tile_contains(adjoint(g, x), f)

    def test_period_translation(self):
        T = MixedTiling(K3, (2, 3, 5), (1, 0, 0))
        N = T.period
        f = (0, 4, 7)
        g = (0, 1, -2)
        moved = T.tile_point([a + N * b for a, b in zip(f, g)])
        shift = T.period_vector(g)
        assert moved.center == tuple(a + b for a, b in zip(T.tile_point(f).center, shift))
        assert moved.subgraph == T.tile_point(f).subgraph


class TestEnumeration:
    def test_unit_lengths_single_class(self, k4):
        tiling = MixedTiling(k4).enumerate_tiling()
        assert len(tiling.tiles) == 1

    def test_k3_one_one_two(self):
        tiling = MixedTiling(K3, (1, 1, 2)).enumerate_tiling()
        subs = sorted(t.subgraph for t in tiling.tiles)
        assert subs == [(0, 1), (0, 1), (0, 1, 2), (0, 1, 2)]

    def test_dual_skeleton_of_hexagons(self):
        skel = MixedTiling(K3).dual_skeleton()
        assert skel["vertices"] == ["0,0,0"]
        assert len(skel["edges"]) == 6

    def test_dual_skeleton_degrees_match_bonds(self):
        T = MixedTiling(K3, (1, 1, 2))
        skel = T.dual_skeleton()
        for t in T.enumerate_tiling().tiles:
            deg = sum(1 for e in skel["edges"] if e[0] == t.key)
            assert deg == len(T.bonds_of_tile(t.f))
            assert deg == (6 if len(t.subgraph) == 3 else 4)

    def test_every_connected_subgraph_for_coprime_lengths(self):
        T = MixedTiling(K3, (2, 3, 5))
        found = {t.subgraph for t in T.enumerate_tiling().tiles}
        wanted = {s for r in (2, 3) for s in combinations(range(3), r)}
        assert found == wanted

    def test_flow_network_basics(self):
        net = FlowNetwork()
        net.add_arc("s", "a", 3)
        net.add_arc("a", "t", 2)
        net.add_arc("s", "t", 1)
        assert net.max_flow("s", "t") == 3
