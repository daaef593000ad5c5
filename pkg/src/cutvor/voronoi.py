"""The Voronoi cell of the origin in the cut lattice and its face structure.

Orientations are frozensets of arrows ``(k, s)``.  The positive support of
a 1-cochain x is the set of arrows on which x is positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Iterator, Sequence

from . import linalg
from .graph import (
    Arrow,
    Multigraph,
    adjoint,
    coboundary,
    indicator,
    inner,
    is_in_cut_space,
    potential,
    project_to_cut_space,
)

Orientation = frozenset


class VoronoiError(ValueError):
    pass


def proper_subsets(n: int) -> Iterator[tuple[int, ...]]:
    for size in range(1, n):
        yield from combinations(range(n), size)


def cut_sum(g: Multigraph, eta: Sequence, subset: Iterable[int]) -> tuple:
    """Sum of eta over arrows leaving ``subset`` and the number of such arrows."""
    inside = set(subset)
    total, count = 0, 0
    for k, (u, v) in enumerate(g.edges):
        if (u in inside) != (v in inside):
            total += eta[k] if u in inside else -eta[k]
            count += 1
    return total, count


def voronoi_membership(g: Multigraph, eta: Sequence, strict: bool = False) -> bool:
    """Whether eta lies in the Voronoi cell of the origin (its interior if strict)."""
    if not is_in_cut_space(g, eta):
        raise VoronoiError("point is not in the cut space")
    for S in proper_subsets(g.vertex_count):
        total, count = cut_sum(g, eta, S)
        bound = Fraction(count, 2)
        if abs(total) > bound or (strict and abs(total) == bound):
            return False
    return True


def positive_support(x: Sequence) -> Orientation:
    return frozenset((k, 1 if a > 0 else -1) for k, a in enumerate(x) if a != 0)


def orientation_vector(g: Multigraph, D: Iterable[Arrow]) -> tuple[int, ...]:
    chi = [0] * g.edge_count
    for k, s in D:
        chi[k] = s
    return tuple(chi)


def arrows_between(g: Multigraph, parts: Sequence[Iterable[int]]) -> Orientation:
    """Arrows from an earlier part to a later one."""
    level = {}
    for i, part in enumerate(parts):
        for v in part:
            level[v] = i
    out = set()
    for k, (u, v) in enumerate(g.edges):
        if level[u] < level[v]:
            out.add((k, 1))
        elif level[u] > level[v]:
            out.add((k, -1))
    return frozenset(out)


def level_sets(values: Sequence) -> list[frozenset[int]]:
    order = sorted(set(values))
    return [frozenset(v for v, x in enumerate(values) if x == y) for y in order]


@dataclass(frozen=True)
class GeneralizedCut:
    graph: Multigraph
    parts: tuple[frozenset[int], ...]

    def __post_init__(self):
        parts = tuple(frozenset(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if len(parts) < 2 or any(not p for p in parts):
            raise VoronoiError("a generalized cut needs at least two nonempty parts")
        seen = [v for p in parts for v in p]
        if sorted(seen) != list(self.graph.vertices):
            raise VoronoiError("parts must partition the vertex set")
        level = {v: i for i, p in enumerate(parts) for v in p}
        for u, v in self.graph.edges:
            if abs(level[u] - level[v]) >= 2:
                raise VoronoiError("an edge joins two non-consecutive parts")

    @property
    def arrows(self) -> Orientation:
        return arrows_between(self.graph, self.parts)

    def element(self) -> tuple[int, ...]:
        """d of the level function (value i on the i-th part)."""
        level = [0] * self.graph.vertex_count
        for i, p in enumerate(self.parts):
            for v in p:
                level[v] = i
        return coboundary(self.graph, level)

    def rank(self) -> int:
        g = self.graph
        total = 0
        for i in range(1, len(self.parts)):
            left = [v for p in self.parts[:i] for v in p]
            right = [v for p in self.parts[i:] for v in p]
            total += len(g.components(vertices=left)) + len(g.components(vertices=right)) - 1
        return total


def is_generalized_cut_element(g: Multigraph, beta: Sequence) -> GeneralizedCut | None:
    if any(Fraction(b).denominator != 1 for b in beta):
        raise VoronoiError("expected an integral cochain")
    if not is_in_cut_space(g, beta) or max((abs(b) for b in beta), default=0) > 1:
        return None
    parts = level_sets(potential(g, beta))
    if len(parts) < 2:
        return None
    return GeneralizedCut(g, tuple(parts))


def cells_intersect(g: Multigraph, beta: Sequence, lam: Sequence) -> bool:
    diff = tuple(a - b for a, b in zip(beta, lam))
    if not any(diff):
        return True
    return is_generalized_cut_element(g, diff) is not None


def is_bond_set(g: Multigraph, C: Iterable[int]) -> bool:
    C = set(C)
    rest = [v for v in g.vertices if v not in C]
    return bool(C) and bool(rest) and g.induced_connected(C) and g.induced_connected(rest)


@lru_cache(maxsize=None)
def enumerate_bonds(g: Multigraph) -> tuple[tuple[int, ...], ...]:
    out = set()
    for C in proper_subsets(g.vertex_count):
        if is_bond_set(g, C):
            out.add(coboundary(g, indicator(g.vertex_count, C)))
    return tuple(sorted(out))


def bond_decomposition(g: Multigraph, S: Iterable[int]) -> list[tuple[int, ...]]:
    """Bonds summing to d(chi_S), each with positive support inside that of d(chi_S)."""
    S = frozenset(S)
    n = g.vertex_count
    if not S or len(S) == n:
        return []
    comps = g.components(vertices=S)
    if len(comps) > 1:
        # d(chi_S) is the sum over the components of S
        return [b for c in comps for b in bond_decomposition(g, c)]
    rest = [v for v in g.vertices if v not in S]
    outside = g.components(vertices=rest)
    if len(outside) == 1:
        return [coboundary(g, indicator(n, S))]
    # S connected, complement split: d(chi_S) = - sum of d(chi_W) over complement parts W
    out = []
    for W in outside:
        out.extend(tuple(-x for x in b) for b in bond_decomposition(g, W))
    return out


def ordered_partitions(items: Sequence[int]) -> Iterator[tuple[frozenset[int], ...]]:
    items = list(items)
    if not items:
        yield ()
        return
    n = len(items)
    for mask in range(1, 1 << n):
        first = frozenset(items[i] for i in range(n) if mask >> i & 1)
        rest = [items[i] for i in range(n) if not mask >> i & 1]
        for tail in ordered_partitions(rest):
            yield (first, *tail)


@dataclass(frozen=True)
class CoherentAcyclicOrientation:
    arrows: Orientation
    witness: tuple[frozenset[int], ...] = field(compare=False, hash=False)

    def key(self) -> tuple:
        return tuple(sorted(self.arrows))


class Poset:
    """Finite poset given by its elements and a comparison predicate."""

    def __init__(self, elements: Sequence, leq):
        self.elements = list(elements)
        n = len(self.elements)
        self.relation = [[leq(self.elements[i], self.elements[j]) for j in range(n)] for i in range(n)]

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, i: int, j: int) -> bool:
        return self.relation[i][j]

    def covers(self) -> list[tuple[int, int]]:
        n = len(self.elements)
        out = []
        for i in range(n):
            for j in range(n):
                if i == j or not self.relation[i][j]:
                    continue
                if not any(k not in (i, j) and self.relation[i][k] and self.relation[k][j] for k in range(n)):
                    out.append((i, j))
        return out

    def is_isomorphic_via(self, other: "Poset", mapping: Sequence[int]) -> bool:
        """mapping[i] is the index in ``other`` of the image of element i."""
        n = len(self.elements)
        if len(other) != n or sorted(mapping) != list(range(n)):
            return False
        return all(
            self.relation[i][j] == other.relation[mapping[i]][mapping[j]] for i in range(n) for j in range(n)
        )


def _cac_leq(a: CoherentAcyclicOrientation, b: CoherentAcyclicOrientation) -> bool:
    return b.arrows <= a.arrows


def coherent_orientations(g: Multigraph) -> list[CoherentAcyclicOrientation]:
    found: dict[Orientation, CoherentAcyclicOrientation] = {}
    for parts in ordered_partitions(list(g.vertices)):
        arrows = arrows_between(g, parts)
        if arrows not in found:
            found[arrows] = CoherentAcyclicOrientation(arrows, parts)
    return sorted(found.values(), key=lambda c: (len(c.arrows), c.key()))


def enumerate_cac(g: Multigraph) -> Poset:
    return Poset(coherent_orientations(g), _cac_leq)


def codim(g: Multigraph, D: Iterable[Arrow]) -> int:
    used = {k for k, _ in D}
    rest = [k for k in range(g.edge_count) if k not in used]
    return len(g.components(rest)) - 1


def is_acyclic(g: Multigraph, D: Iterable[Arrow]) -> bool:
    D = list(D)
    indeg = [0] * g.vertex_count
    out: list[list[int]] = [[] for _ in g.vertices]
    for arrow in D:
        out[g.tail(arrow)].append(g.head(arrow))
        indeg[g.head(arrow)] += 1
    ready = [v for v in g.vertices if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return seen == g.vertex_count


def topological_order(g: Multigraph, D: Iterable[Arrow]) -> list[int]:
    D = list(D)
    indeg = [0] * g.vertex_count
    out: list[list[int]] = [[] for _ in g.vertices]
    for arrow in D:
        out[g.tail(arrow)].append(g.head(arrow))
        indeg[g.head(arrow)] += 1
    ready = sorted(v for v in g.vertices if indeg[v] == 0)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort()
    if len(order) != g.vertex_count:
        raise VoronoiError("orientation has a directed cycle")
    return order


@lru_cache(maxsize=None)
def acyclic_orientations(g: Multigraph) -> tuple[Orientation, ...]:
    found = {arrows_between(g, [[v] for v in perm]) for perm in permutations(g.vertices)}
    return tuple(sorted(found, key=lambda D: sorted(D)))


def _vertex_equations(g: Multigraph, order: Sequence[int]) -> list[tuple[int, ...]]:
    """Cut elements whose hyperplanes pass through the vertex of a total order."""
    n = g.vertex_count
    eqs = []
    for i in range(1, n):
        left, right = order[:i], order[i:]
        for comp in g.components(vertices=left):
            eqs.append(tuple(-x for x in coboundary(g, indicator(n, comp))))
        for comp in g.components(vertices=right):
            eqs.append(coboundary(g, indicator(n, comp)))
    return eqs


def face_vertex(g: Multigraph, D: Iterable[Arrow]) -> tuple[Fraction, ...]:
    """The vertex of the cell attached to a total acyclic orientation."""
    D = frozenset(D)
    if len({k for k, _ in D}) != g.edge_count or len(D) != g.edge_count:
        raise VoronoiError("orientation must orient every edge exactly once")
    order = topological_order(g, D)
    eqs = _vertex_equations(g, order)
    chosen = [eqs[i] for i in linalg.independent_rows([adjoint(g, b) for b in eqs])]
    # x = d(f) with f(0) = 0;  2 <d f, b> = 2 <f, d* b> = |b|^2
    rows = [[2 * a for a in adjoint(g, b)[1:]] for b in chosen]
    rhs = [inner(b, b) for b in chosen]
    f = (Fraction(0), *linalg.solve(rows, rhs))
    nu = coboundary(g, f)
    if not voronoi_membership(g, nu):
        raise AssertionError("computed vertex lies outside the cell")
    return nu


def half_projection(g: Multigraph, D: Iterable[Arrow]) -> tuple[Fraction, ...]:
    """Projection of half the orientation vector onto the cut space."""
    chi = orientation_vector(g, D)
    return project_to_cut_space(g, tuple(Fraction(c, 2) for c in chi))


@dataclass(frozen=True)
class Face:
    cao: CoherentAcyclicOrientation
    bonds_through: frozenset
    vertices: frozenset
    codim: int


def affine_dimension(points: Sequence[Sequence]) -> int:
    points = list(points)
    if not points:
        return -1
    base = points[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    return linalg.rank(diffs) if diffs else 0


@dataclass
class FacePoset:
    graph: Multigraph
    faces: list[Face]
    order: Poset
    cac: Poset
    mapping: list[int]

    @property
    def isomorphic(self) -> bool:
        return self.order.is_isomorphic_via(self.cac, self.mapping)

    def f_vector(self) -> list[int]:
        top = self.graph.vertex_count - 1
        counts = [0] * (top + 1)
        for face in self.faces:
            counts[top - face.codim] += 1
        return counts


def _cell_vertices(g: Multigraph) -> dict[Orientation, tuple]:
    return {D: face_vertex(g, D) for D in acyclic_orientations(g)}


def geometric_faces(g: Multigraph) -> list[tuple[frozenset, frozenset]]:
    """All nonempty faces as (vertex set, bonds whose hyperplane contains the face).

    Faces are intersections of facets, so closing the facet vertex sets
    under intersection (plus the whole cell) yields every face.
    """
    verts = sorted(set(_cell_vertices(g).values()))
    bonds = enumerate_bonds(g)
    tight = {}
    for b in bonds:
        norm = inner(b, b)
        tight[b] = frozenset(p for p in verts if 2 * inner(p, b) == norm)
    faces = {frozenset(verts)}
    for b in bonds:
        faces |= {F & tight[b] for F in faces if F & tight[b]}
    out = []
    for F in faces:
        through = frozenset(b for b in bonds if F <= tight[b])
        out.append((F, through))
    return out


def face_poset(g: Multigraph) -> FacePoset:
    n = g.vertex_count
    vertex_of = _cell_vertices(g)
    cac = enumerate_cac(g)
    index = {c.arrows: i for i, c in enumerate(cac.elements)}
    faces = []
    mapping = []
    for verts, through in geometric_faces(g):
        phi = frozenset().union(*(positive_support(b) for b in through)) if through else frozenset()
        if phi not in index:
            raise AssertionError("face label is not a coherent acyclic orientation")
        cao = cac.elements[index[phi]]
        expected = frozenset(vertex_of[D] for D in vertex_of if phi <= D)
        if expected != verts:
            raise AssertionError("face vertices disagree with orientation extensions")
        c = n - 1 - affine_dimension(sorted(verts))
        if c != codim(g, phi):
            raise AssertionError("codimension mismatch")
        faces.append(Face(cao, through, verts, c))
        mapping.append(index[phi])
    order_ = sorted(range(len(faces)), key=lambda i: mapping[i])
    faces = [faces[i] for i in order_]
    mapping = [mapping[i] for i in order_]
    poset = Poset(faces, lambda a, b: a.vertices <= b.vertices)
    return FacePoset(g, faces, poset, cac, mapping)
