"""Multigraphs, cochains and the lattice basics attached to them.

A 0-cochain is a tuple indexed by vertices, a 1-cochain a tuple indexed by
edges holding the value on the canonical arrow (lower endpoint to higher
endpoint); the reverse arrow carries the negated value.  An arrow is encoded
as ``(k, s)`` with ``s = +1`` for the canonical direction of edge ``k`` and
``s = -1`` for its reversal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg

Arrow = tuple[int, int]
Cochain0 = tuple
Cochain1 = tuple


class GraphError(ValueError):
    pass


def components(n: int, edges: Iterable[tuple[int, int]], vertices: Iterable[int] | None = None) -> list[list[int]]:
    """Connected components of the graph on ``vertices`` (default all of range(n))."""
    verts = list(range(n)) if vertices is None else sorted(set(vertices))
    inside = set(verts)
    parent = {v: v for v in verts}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        if u in inside and v in inside:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for v in verts:
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


@dataclass(frozen=True)
class Multigraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    _adj: tuple = field(default=(), init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.vertex_count < 1:
            raise GraphError("a graph needs at least one vertex")
        normal = []
        for k, e in enumerate(self.edges):
            u, v = (int(x) for x in e)
            if u == v:
                raise GraphError(f"edge {k} is a loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphError(f"edge {k} has an endpoint outside 0..{self.vertex_count - 1}")
            normal.append((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(normal))
        if len(components(self.vertex_count, normal)) != 1:
            raise GraphError("graph is disconnected")
        adj: list[list[Arrow]] = [[] for _ in range(self.vertex_count)]
        for k, (u, v) in enumerate(normal):
            adj[u].append((k, 1))
            adj[v].append((k, -1))
        object.__setattr__(self, "_adj", tuple(tuple(a) for a in adj))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    def tail(self, arrow: Arrow) -> int:
        k, s = arrow
        return self.edges[k][0] if s > 0 else self.edges[k][1]

    def head(self, arrow: Arrow) -> int:
        k, s = arrow
        return self.edges[k][1] if s > 0 else self.edges[k][0]

    def arrows(self) -> list[Arrow]:
        return [(k, s) for k in range(self.edge_count) for s in (1, -1)]

    def arrows_from(self, v: int) -> tuple[Arrow, ...]:
        """Arrows with tail ``v``."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def components(self, edge_subset: Iterable[int] | None = None, vertices: Iterable[int] | None = None) -> list[list[int]]:
        ks = range(self.edge_count) if edge_subset is None else edge_subset
        return components(self.vertex_count, (self.edges[k] for k in ks), vertices)

    def induced_connected(self, vertices: Iterable[int], edge_subset: Iterable[int] | None = None) -> bool:
        verts = list(vertices)
        return bool(verts) and len(self.components(edge_subset, verts)) == 1

    def crossing(self, subset: Iterable[int]) -> list[Arrow]:
        """Arrows leaving ``subset``."""
        inside = set(subset)
        out = []
        for k, (u, v) in enumerate(self.edges):
            if u in inside and v not in inside:
                out.append((k, 1))
            elif v in inside and u not in inside:
                out.append((k, -1))
        return out

    def subgraph(self, edge_subset: Iterable[int]) -> "Multigraph":
        """Spanning subgraph on the given edges (must be connected); edge order preserved."""
        return Multigraph(self.vertex_count, tuple(self.edges[k] for k in sorted(edge_subset)))


def arrow_value(mu: Sequence, arrow: Arrow):
    k, s = arrow
    return mu[k] if s > 0 else -mu[k]


def indicator(n: int, subset: Iterable[int]) -> Cochain0:
    inside = set(subset)
    return tuple(1 if v in inside else 0 for v in range(n))


def inner(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise ValueError("length mismatch")
    return sum((x * y for x, y in zip(a, b)), 0)


def coboundary(g: Multigraph, f: Sequence) -> Cochain1:
    if len(f) != g.vertex_count:
        raise ValueError("0-cochain has the wrong length")
    return tuple(f[v] - f[u] for u, v in g.edges)


def adjoint(g: Multigraph, mu: Sequence) -> Cochain0:
    if len(mu) != g.edge_count:
        raise ValueError("1-cochain has the wrong length")
    out = [0] * g.vertex_count
    for (u, v), x in zip(g.edges, mu):
        out[v] += x
        out[u] -= x
    return tuple(out)


def laplacian_apply(g: Multigraph, f: Sequence) -> Cochain0:
    return adjoint(g, coboundary(g, f))


def laplacian_matrix(g: Multigraph) -> list[list[int]]:
    n = g.vertex_count
    L = [[0] * n for _ in range(n)]
    for u, v in g.edges:
        L[u][u] += 1
        L[v][v] += 1
        L[u][v] -= 1
        L[v][u] -= 1
    return L


def spanning_tree_count(g: Multigraph) -> int:
    L = laplacian_matrix(g)
    reduced = [row[1:] for row in L[1:]]
    return int(linalg.det(reduced))


def spanning_tree(g: Multigraph) -> list[int]:
    """Edge indices of a BFS spanning tree rooted at vertex 0."""
    seen = [False] * g.vertex_count
    seen[0] = True
    tree = []
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for arrow in g.arrows_from(u):
            w = g.head(arrow)
            if not seen[w]:
                seen[w] = True
                tree.append(arrow[0])
                queue.append(w)
    return tree


def potential(g: Multigraph, mu: Sequence) -> Cochain0:
    """Integrate ``mu`` along a spanning tree, normalised to 0 at vertex 0.

    Equals the f with d(f) = mu whenever mu is in the cut space.
    """
    f: list = [None] * g.vertex_count
    f[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for arrow in g.arrows_from(u):
            w = g.head(arrow)
            if f[w] is None:
                f[w] = f[u] + arrow_value(mu, arrow)
                queue.append(w)
    return tuple(f)


def fundamental_cycles(g: Multigraph) -> list[Cochain1]:
    """One signed cycle vector per non-tree edge."""
    tree = set(spanning_tree(g))
    parent: dict[int, Arrow | None] = {0: None}
    depth = {0: 0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for arrow in g.arrows_from(u):
            w = g.head(arrow)
            if arrow[0] in tree and w not in parent:
                parent[w] = arrow
                depth[w] = depth[u] + 1
                queue.append(w)
    cycles = []
    for k, (u, v) in enumerate(g.edges):
        if k in tree:
            continue
        c = [0] * g.edge_count
        c[k] = 1
        # walk from v back to u through the tree: v -> lca <- u
        a, b = v, u
        while a != b:
            if depth[a] >= depth[b]:
                arr = parent[a]
                c[arr[0]] -= arr[1]
                a = g.tail(arr)
            else:
                arr = parent[b]
                c[arr[0]] += arr[1]
                b = g.tail(arr)
        cycles.append(tuple(c))
    return cycles


def is_in_cut_space(g: Multigraph, mu: Sequence) -> bool:
    if len(mu) != g.edge_count:
        raise ValueError("1-cochain has the wrong length")
    return all(inner(c, mu) == 0 for c in fundamental_cycles(g))


def solve_laplacian(g: Multigraph, h: Sequence) -> Cochain0:
    """The solution of Laplacian(f) = h with f(0) = 0."""
    if sum(h) != 0:
        raise ValueError("right-hand side must have coordinate sum zero")
    n = g.vertex_count
    if n == 1:
        return (Fraction(0),)
    L = laplacian_matrix(g)
    sol = linalg.solve([row[1:] for row in L[1:]], list(h[1:]))
    return (Fraction(0), *sol)


def quadratic_form_q(g: Multigraph, h: Sequence) -> Fraction:
    f = solve_laplacian(g, h)
    return Fraction(inner(f, h))


def project_to_cut_space(g: Multigraph, mu: Sequence) -> Cochain1:
    """Orthogonal projection onto the image of d."""
    return coboundary(g, solve_laplacian(g, adjoint(g, mu)))

