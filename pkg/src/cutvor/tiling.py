"""Mixed and twisted Voronoi tilings of the degree-zero hyperplane.

A tiling is fixed by a graph, integer edge lengths and an integer twist on
canonical arrows.  Tiles are indexed by integer vertex functions f; the tile
of f is ``center + Vor(O)`` for the subgraph of edges whose shifted
difference is divisible by the length.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import ceil, floor, lcm
from random import Random
from typing import Iterable, NamedTuple, Sequence

from . import linalg
from .flow import FlowNetwork
from .graph import (
    Arrow,
    Multigraph,
    adjoint,
    coboundary,
    components,
    indicator,
    solve_laplacian,
)
from .voronoi import acyclic_orientations, face_vertex, level_sets, proper_subsets, voronoi_membership

HALF = Fraction(1, 2)


class TilingError(ValueError):
    pass


@dataclass(frozen=True)
class TileDescriptor:
    f: tuple[int, ...]
    dm: tuple[Fraction, ...]
    subgraph: tuple[int, ...]
    center: tuple[Fraction, ...]
    connected: bool

    @property
    def key(self) -> str:
        return ",".join(str(x) for x in self.dm)


@dataclass(frozen=True)
class FiberDescription:
    components: tuple[tuple[int, ...], ...]
    intervals: dict
    compact: bool
    factors: tuple[tuple[tuple[int, ...], tuple[tuple[int, ...], ...]], ...]

    @property
    def contracted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.intervals)

    @property
    def points(self) -> tuple[tuple[int, ...], ...]:
        """Integer points eta (one value per component) when the fiber is compact."""
        if not self.compact:
            raise TilingError("infinite fiber")
        return self.factors[0][1]

    def functions(self, f: Sequence[int]) -> set[tuple[int, ...]]:
        label = {v: i for i, comp in enumerate(self.components) for v in comp}
        return {tuple(f[v] + eta[label[v]] for v in range(len(f))) for eta in self.points}


class Neighbor(NamedTuple):
    h: tuple[int, ...]
    n: int
    eta: tuple[Fraction, ...]


@dataclass(frozen=True)
class SharedFace:
    partition: tuple[frozenset[int], ...]
    first: frozenset
    second: frozenset
    codim: int


def _restrict_orientation(edges: Sequence[int], D: Iterable[Arrow]) -> frozenset:
    pos = {k: i for i, k in enumerate(edges)}
    return frozenset((pos[k], s) for k, s in D)


@lru_cache(maxsize=None)
def _cell_vertices(g: Multigraph) -> tuple:
    return tuple((D, face_vertex(g, D)) for D in acyclic_orientations(g))


class MixedTiling:
    def __init__(self, graph: Multigraph, lengths: Sequence[int] | None = None, twist: Sequence[int] | None = None):
        self.graph = graph
        m = graph.edge_count
        self.lengths = tuple(int(x) for x in (lengths if lengths is not None else [1] * m))
        self.twist = tuple(int(x) for x in (twist if twist is not None else [0] * m))
        if len(self.lengths) != m or len(self.twist) != m:
            raise TilingError("lengths and twist need one entry per edge")
        if any(x < 1 for x in self.lengths):
            raise TilingError("edge lengths must be positive integers")

    @property
    def period(self) -> int:
        return lcm(*self.lengths) if self.lengths else 1

    def _shifted(self, f: Sequence[int]) -> list[int]:
        return [f[v] - f[u] + m for (u, v), m in zip(self.graph.edges, self.twist)]

    def subgraph_edges(self, f: Sequence[int]) -> tuple[int, ...]:
        return tuple(k for k, x in enumerate(self._shifted(f)) if x % self.lengths[k] == 0)

    def tile_point(self, f: Sequence[int]) -> TileDescriptor:
        g = self.graph
        if len(f) != g.vertex_count:
            raise TilingError("function must be defined on every vertex")
        f = tuple(int(x) - int(f[0]) for x in f)
        dm = []
        sub = []
        for k, x in enumerate(self._shifted(f)):
            q, r = divmod(x, self.lengths[k])
            if r == 0:
                dm.append(Fraction(q))
                sub.append(k)
            else:
                dm.append(q + HALF)
        dm = tuple(dm)
        connected = len(components(g.vertex_count, (g.edges[k] for k in sub))) == 1
        return TileDescriptor(f, dm, tuple(sub), adjoint(g, dm), connected)

    def theta_project(self, x: Sequence, f: Sequence[int]) -> tuple[Fraction, ...]:
        df = coboundary(self.graph, f)
        eps = [Fraction(a) - b for a, b in zip(x, df)]
        if any(abs(e) > HALF for e in eps):
            raise TilingError("point lies outside the cube of f")
        tile = self.tile_point(f)
        inside = set(tile.subgraph)
        return tuple(d + (e if k in inside else 0) for k, (d, e) in enumerate(zip(tile.dm, eps)))

    def fiber_over(self, f: Sequence[int]) -> FiberDescription:
        g = self.graph
        tile = self.tile_point(f)
        comps = tuple(tuple(c) for c in components(g.vertex_count, (g.edges[k] for k in tile.subgraph)))
        label = {v: i for i, c in enumerate(comps) for v in c}
        df = coboundary(g, f)
        intervals: dict[tuple[int, int], tuple[int, int]] = {}
        for k, (u, v) in enumerate(g.edges):
            i, j = label[u], label[v]
            if i == j:
                continue
            l, d = self.lengths[k], tile.dm[k]
            lo = floor(d) * l - df[k] - self.twist[k] + 1
            hi = ceil(d) * l - df[k] - self.twist[k] - 1
            if i > j:
                i, j, lo, hi = j, i, -hi, -lo
            if (i, j) in intervals:
                a, b = intervals[(i, j)]
                lo, hi = max(a, lo), min(b, hi)
            intervals[(i, j)] = (lo, hi)
        k = len(comps)
        groups = components(k, intervals)
        factors = tuple((tuple(grp), tuple(_interval_points(grp, intervals, k))) for grp in groups)
        return FiberDescription(comps, intervals, len(groups) == 1, factors)

    def subgraph(self, f: Sequence[int]) -> Multigraph:
        tile = self.tile_point(f)
        if not tile.connected:
            raise TilingError("the subgraph of this tile is disconnected")
        return self.graph.subgraph(tile.subgraph)

    def _offset(self, p: Sequence, tile: TileDescriptor) -> list[Fraction]:
        if len(p) != self.graph.vertex_count:
            raise TilingError("point must have one coordinate per vertex")
        if sum(p) != 0:
            raise TilingError("point must have coordinate sum zero")
        if not tile.connected:
            raise TilingError("the subgraph of this tile is disconnected")
        return [Fraction(a) - c for a, c in zip(p, tile.center)]

    def tile_contains(self, p: Sequence, f: Sequence[int], strict: bool = False) -> bool:
        """Max-flow test for p in the tile of f (in its interior if strict)."""
        tile = self.tile_point(f)
        w = self._offset(p, tile)
        den = lcm(*(x.denominator for x in w))
        scale = 2 * den
        sub = tile.subgraph
        if strict:
            scale *= len(sub) + 1
            arc = scale // 2 - 1
        else:
            arc = scale // 2
        net = FlowNetwork()
        supply = 0
        for v, x in enumerate(w):
            c = int(x * scale)
            if c < 0:
                net.add_arc("s", v, -c)
                supply += -c
            elif c > 0:
                net.add_arc(v, "t", c)
        for k in sub:
            u, v = self.graph.edges[k]
            net.add_arc(u, v, arc)
            net.add_arc(v, u, arc)
        if supply == 0:
            return True
        return net.max_flow("s", "t") == supply

    def membership_by_cuts(self, p: Sequence, f: Sequence[int], strict: bool = False) -> bool:
        """Same question answered by the subset inequalities on the subgraph."""
        tile = self.tile_point(f)
        w = self._offset(p, tile)
        sub = self.graph.subgraph(tile.subgraph)
        eta = coboundary(sub, solve_laplacian(sub, w))
        return voronoi_membership(sub, eta, strict=strict)

    def is_bond_of_tile(self, f: Sequence[int], S: Iterable[int]) -> bool:
        tile = self.tile_point(f)
        S = set(S)
        rest = [v for v in self.graph.vertices if v not in S]
        if not tile.connected or not S or not rest:
            return False
        return (
            self.graph.induced_connected(S, tile.subgraph) and self.graph.induced_connected(rest, tile.subgraph)
        )

    def _cut_indicator(self, sub: Iterable[int], S: set[int]) -> list[int]:
        """+1 on subgraph arrows entering S, expressed on canonical arrows."""
        eta = [0] * self.graph.edge_count
        for k in sub:
            u, v = self.graph.edges[k]
            if u not in S and v in S:
                eta[k] = 1
            elif u in S and v not in S:
                eta[k] = -1
        return eta

    def neighbor_across(self, f: Sequence[int], S: Iterable[int]) -> Neighbor:
        S = set(S)
        if not self.is_bond_of_tile(f, S):
            raise TilingError("S does not define a bond of the tile subgraph")
        tile = self.tile_point(f)
        chi = indicator(self.graph.vertex_count, S)
        for n in range(1, max(self.lengths) + 1):
            h = tuple(a + n * c for a, c in zip(f, chi))
            other = self.tile_point(h)
            if other.connected:
                eta_f = self._cut_indicator(tile.subgraph, S)
                eta_h = self._cut_indicator(other.subgraph, S)
                eta = tuple(Fraction(a + b, 2) for a, b in zip(eta_f, eta_h))
                return Neighbor(h, n, eta)
        raise AssertionError("no connected neighbor found within the length bound")

    def tiles_intersect(self, f1: Sequence[int], f2: Sequence[int]) -> SharedFace | None:
        t1, t2 = self.tile_point(f1), self.tile_point(f2)
        if not (t1.connected and t2.connected):
            raise TilingError("both tiles need connected subgraphs")
        diff = [b - a for a, b in zip(f1, f2)]
        parts = level_sets(diff)
        level = {v: i for i, p in enumerate(parts) for v in p}
        D1, D2 = set(), set()
        chi1 = [0] * self.graph.edge_count
        chi2 = [0] * self.graph.edge_count
        sub1, sub2 = set(t1.subgraph), set(t2.subgraph)
        for k, (u, v) in enumerate(self.graph.edges):
            if level[u] == level[v]:
                continue
            s = 1 if level[u] < level[v] else -1
            if k in sub1:
                D1.add((k, s))
                chi1[k] = s
            if k in sub2:
                D2.add((k, -s))
                chi2[k] = -s
        for k in range(self.graph.edge_count):
            if t1.dm[k] + HALF * chi1[k] != t2.dm[k] + HALF * chi2[k]:
                return None
        inner_edges = [k for k in t1.subgraph if level[self.graph.edges[k][0]] == level[self.graph.edges[k][1]]]
        codim = len(self.graph.components(inner_edges)) - 1
        return SharedFace(tuple(parts), frozenset(D1), frozenset(D2), codim)

    def face_vertices(self, f: Sequence[int], D: Iterable[Arrow] = ()) -> frozenset:
        """Vertices of the face of the tile of f labelled by orientation D of its subgraph."""
        tile = self.tile_point(f)
        if not tile.connected:
            raise TilingError("the subgraph of this tile is disconnected")
        sub = self.graph.subgraph(tile.subgraph)
        local = _restrict_orientation(tile.subgraph, D)
        out = set()
        for Dp, nu in _cell_vertices(sub):
            if local <= Dp:
                lifted = [Fraction(0)] * self.graph.edge_count
                for i, k in enumerate(tile.subgraph):
                    lifted[k] = nu[i]
                out.add(tuple(c + x for c, x in zip(tile.center, adjoint(self.graph, lifted))))
        return frozenset(out)

    def tile_vertices(self, f: Sequence[int]) -> frozenset:
        return self.face_vertices(f)

    def bonds_of_tile(self, f: Sequence[int]) -> list[tuple[int, ...]]:
        return [S for S in proper_subsets(self.graph.vertex_count) if self.is_bond_of_tile(f, S)]

    def representative(self, h: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Box representative of h and the integer shift g with h = rep + N g + const."""
        N = self.period
        base = [x - h[0] for x in h]
        rep = tuple(x % N for x in base)
        shift = tuple((x - r) // N for x, r in zip(base, rep))
        return rep, shift

    def period_vector(self, g: Sequence[int]) -> tuple[Fraction, ...]:
        """Translation of the tiling induced by f -> f + N g."""
        N = self.period
        dg = coboundary(self.graph, g)
        return adjoint(self.graph, [Fraction(N * x, l) for x, l in zip(dg, self.lengths)])

    def enumerate_tiling(self) -> "Tiling":
        n, N = self.graph.vertex_count, self.period
        tiles: dict[tuple, TileDescriptor] = {}
        for rest in product(range(N), repeat=n - 1):
            t = self.tile_point((0, *rest))
            if t.connected and t.dm not in tiles:
                tiles[t.dm] = t
        ordered = sorted(tiles.values(), key=lambda t: t.f)
        key_of = {t.f: t.key for t in ordered}
        adjacency = {}
        for t in ordered:
            recs = []
            for S in self.bonds_of_tile(t.f):
                nb = self.neighbor_across(t.f, S)
                rep, shift = self.representative(nb.h)
                recs.append(NeighborRecord(S, nb.n, nb.eta, key_of[rep], shift))
            adjacency[t.key] = recs
        return Tiling(self, ordered, adjacency)

    def dual_skeleton(self) -> dict:
        tiling = self.enumerate_tiling()
        edges = []
        for t in tiling.tiles:
            for rec in tiling.adjacency[t.key]:
                edges.append((t.key, rec.target, rec.S, rec.shift))
        return {"vertices": [t.key for t in tiling.tiles], "edges": edges}

    @cached_property
    def _period_solver(self) -> list[list[Fraction]]:
        """Rows mapping a degree-zero point to coordinates in the period basis."""
        n = self.graph.vertex_count
        basis = [self.period_vector(indicator(n, [v])) for v in range(1, n)]
        # solve sum_i t_i basis_i = p using coordinates 1..n-1
        A = [[basis[i][r] for i in range(n - 1)] for r in range(1, n)]
        cols = []
        for r in range(n - 1):
            e = [Fraction(0)] * (n - 1)
            e[r] = Fraction(1)
            cols.append(linalg.solve(A, e))
        return [[cols[c][i] for c in range(n - 1)] for i in range(n - 1)]

    def period_coordinates(self, p: Sequence) -> list[Fraction]:
        rows = self._period_solver
        tail = [Fraction(x) for x in p[1:]]
        return [sum((a * b for a, b in zip(row, tail)), Fraction(0)) for row in rows]

    @cached_property
    def _reach(self) -> Fraction:
        """Bound on how far a tile reaches from its center, in period coordinates."""
        g = self.graph
        worst = Fraction(0)
        cols = []
        for k in range(g.edge_count):
            e = [0] * g.edge_count
            e[k] = 1
            cols.append(self.period_coordinates(adjoint(g, e)))
        for i in range(g.vertex_count - 1):
            worst = max(worst, sum((abs(c[i]) for c in cols), Fraction(0)) / 2)
        return worst

    @cached_property
    def _period_basis(self) -> list[tuple[Fraction, ...]]:
        n = self.graph.vertex_count
        return [self.period_vector(indicator(n, [v])) for v in range(1, n)]

    def candidates(self, p: Sequence, tiling: "Tiling") -> list[tuple[TileDescriptor, tuple[int, ...], tuple]]:
        """Translated tiles that pass the single-vertex test for p, with p moved into their frame."""
        n = self.graph.vertex_count
        p = tuple(Fraction(x) for x in p)
        tp = self.period_coordinates(p)
        R = self._reach
        basis = self._period_basis
        out = []
        for t in tiling.tiles:
            tc = tiling.center_coordinates(t)
            ranges = [range(ceil(a - b - R), floor(a - b + R) + 1) for a, b in zip(tp, tc)]
            for g_rest in product(*ranges):
                q = list(p)
                for gi, b in zip(g_rest, basis):
                    if gi:
                        for v in range(n):
                            q[v] -= gi * b[v]
                if _near(self.graph, q, t):
                    out.append((t, (0, *g_rest), tuple(q)))
        return out

    def locate(self, p: Sequence, tiling: "Tiling | None" = None, strict: bool = False) -> list[tuple[str, tuple[int, ...]]]:
        """All (tile key, period shift) whose translated tile contains p."""
        tiling = tiling or self.enumerate_tiling()
        return [
            (t.key, g) for t, g, q in self.candidates(p, tiling) if self.tile_contains(q, t.f, strict=strict)
        ]

    def sample_points(self, count: int, seed: int, denominator: int = 10**6) -> list[tuple[Fraction, ...]]:
        """Random rational points in the period parallelepiped."""
        rng = Random(seed)
        n = self.graph.vertex_count
        basis = [self.period_vector(indicator(n, [v])) for v in range(1, n)]
        out = []
        for _ in range(count):
            s = [Fraction(rng.randrange(denominator), denominator) for _ in basis]
            out.append(tuple(sum((si * b[v] for si, b in zip(s, basis)), Fraction(0)) for v in range(n)))
        return out


def _near(g: Multigraph, q: Sequence, tile: TileDescriptor) -> bool:
    """Single-vertex cut inequalities, a cheap necessary condition."""
    inside = set(tile.subgraph)
    deg = [0] * g.vertex_count
    for k in inside:
        u, v = g.edges[k]
        deg[u] += 1
        deg[v] += 1
    return all(2 * abs(a - c) <= d for a, c, d in zip(q, tile.center, deg))


def _interval_points(group: Sequence[int], intervals: dict, k: int) -> list[tuple[int, ...]]:
    """Integer eta on the components in ``group`` (first one pinned to 0) meeting all intervals."""
    group = list(group)
    nbrs: dict[int, list[int]] = {i: [] for i in group}
    for i, j in intervals:
        if i in nbrs and j in nbrs:
            nbrs[i].append(j)
            nbrs[j].append(i)
    order = [group[0]]
    for i in order:
        for j in sorted(nbrs[i]):
            if j not in order:
                order.append(j)

    def bounds(i: int, j: int) -> tuple[int, int]:
        # interval for eta[j] - eta[i]
        if i < j:
            return intervals[(i, j)]
        lo, hi = intervals[(j, i)]
        return -hi, -lo

    out = []
    eta = [0] * k

    def extend(pos: int):
        if pos == len(order):
            out.append(tuple(eta[i] if i in nbrs else 0 for i in range(k)))
            return
        j = order[pos]
        lo, hi = None, None
        for i in order[:pos]:
            if (min(i, j), max(i, j)) in intervals:
                a, b = bounds(i, j)
                lo = eta[i] + a if lo is None else max(lo, eta[i] + a)
                hi = eta[i] + b if hi is None else min(hi, eta[i] + b)
        for x in range(lo, hi + 1):
            eta[j] = x
            extend(pos + 1)

    extend(1)
    return out


class NeighborRecord(NamedTuple):
    S: tuple[int, ...]
    n: int
    eta: tuple[Fraction, ...]
    target: str
    shift: tuple[int, ...]


@dataclass
class Tiling:
    setup: MixedTiling
    tiles: list[TileDescriptor]
    adjacency: dict[str, list[NeighborRecord]]

    def __post_init__(self):
        self._coords = {}

    def center_coordinates(self, t: TileDescriptor) -> list[Fraction]:
        if t.key not in self._coords:
            self._coords[t.key] = self.setup.period_coordinates(t.center)
        return self._coords[t.key]

    def by_key(self, key: str) -> TileDescriptor:
        for t in self.tiles:
            if t.key == key:
                return t
        raise KeyError(key)
