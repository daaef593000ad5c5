"""Divisors on the subdivided graph H and G-admissible chip-firing.

The subdivision replaces edge ``k = (u, v)`` (canonical arrow u -> v) by a path
``u = x_0, x_1, ..., x_l = v``.  Interior vertices are numbered after the
vertices of G, edge by edge.  Walking the same path from v gives the reversed
labels, so ``x_j`` on arrow ``(k, -1)`` is ``x_{l-j}`` on ``(k, +1)``.

Sign convention: ``div(F)(x) = sum over neighbours y of F(y) - F(x)``, i.e.
``div = -Laplacian_H``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .graph import Arrow, Multigraph, laplacian_apply, linalg, laplacian_matrix


class DivisorError(ValueError):
    pass


@dataclass(frozen=True)
class Subdivision:
    base: Multigraph
    lengths: tuple[int, ...]

    def __post_init__(self):
        lengths = tuple(int(x) for x in self.lengths)
        if len(lengths) != self.base.edge_count:
            raise DivisorError("need one length per edge")
        if any(x < 1 for x in lengths):
            raise DivisorError("edge lengths must be positive integers")
        object.__setattr__(self, "lengths", lengths)

    @cached_property
    def _offsets(self) -> tuple[int, ...]:
        out, acc = [], self.base.vertex_count
        for l in self.lengths:
            out.append(acc)
            acc += l - 1
        return tuple(out)

    @property
    def size(self) -> int:
        return self.base.vertex_count + sum(l - 1 for l in self.lengths)

    def point(self, arrow: Arrow, j: int) -> int:
        """Index in V(H) of x_j on the given arrow, 0 <= j <= l."""
        k, s = arrow
        l = self.lengths[k]
        if not 0 <= j <= l:
            raise IndexError(j)
        if s < 0:
            j = l - j
        if j == 0:
            return self.base.edges[k][0]
        if j == l:
            return self.base.edges[k][1]
        return self._offsets[k] + j - 1

    def path(self, arrow: Arrow) -> list[int]:
        return [self.point(arrow, j) for j in range(self.lengths[arrow[0]] + 1)]

    def interior(self, k: int) -> list[int]:
        """Interior vertices of edge k in canonical order."""
        return self.path((k, 1))[1:-1]

    def locate(self, x: int) -> tuple[int, int] | None:
        """(edge, canonical position j) for an interior vertex, None on V(G)."""
        if x < self.base.vertex_count:
            return None
        for k, off in enumerate(self._offsets):
            if off <= x < off + self.lengths[k] - 1:
                return k, x - off + 1
        raise IndexError(x)

    @cached_property
    def graph(self) -> Multigraph:
        edges = []
        for k in range(self.base.edge_count):
            p = self.path((k, 1))
            edges.extend(zip(p, p[1:]))
        return Multigraph(self.size, tuple(edges))


@dataclass(frozen=True)
class Divisor:
    host: Subdivision
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.host.size:
            raise DivisorError("divisor length does not match V(H)")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def zero(cls, host: Subdivision) -> "Divisor":
        return cls(host, (0,) * host.size)

    @classmethod
    def from_points(cls, host: Subdivision, points: Mapping[int, int]) -> "Divisor":
        c = [0] * host.size
        for x, a in points.items():
            c[x] += a
        return cls(host, tuple(c))

    @property
    def degree(self) -> int:
        return sum(self.coeffs)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(self.coeffs) if c)

    def __getitem__(self, x: int) -> int:
        return self.coeffs[x]

    def _check(self, other: "Divisor"):
        if other.host != self.host:
            raise DivisorError("divisors live on different subdivisions")

    def __add__(self, other: "Divisor") -> "Divisor":
        self._check(other)
        return Divisor(self.host, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Divisor") -> "Divisor":
        self._check(other)
        return Divisor(self.host, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Divisor":
        return Divisor(self.host, tuple(-a for a in self.coeffs))


def principal_divisor_H(host: Subdivision, F: Sequence[int]) -> Divisor:
    lap = laplacian_apply(host.graph, F)
    return Divisor(host, tuple(-x for x in lap))


def is_G_admissible(D: Divisor) -> bool:
    host = D.host
    for k in range(host.base.edge_count):
        vals = [D[x] for x in host.interior(k)]
        if any(c not in (0, 1) for c in vals) or sum(vals) > 1:
            return False
    return True


@dataclass(frozen=True)
class DivisorTwist:
    """Integer function on arrows: value on (k, +1) and on (k, -1)."""

    forward: tuple[int, ...]
    backward: tuple[int, ...]

    def __getitem__(self, arrow: Arrow) -> int:
        k, s = arrow
        return self.forward[k] if s > 0 else self.backward[k]


def twist_of(D: Divisor) -> DivisorTwist:
    host = D.host
    out = {1: [], -1: []}
    for k, l in enumerate(host.lengths):
        for s in (1, -1):
            out[s].append(sum((l - j) * D[host.point((k, s), j)] for j in range(1, l)))
    return DivisorTwist(tuple(out[1]), tuple(out[-1]))


def shifted_floor(f: Sequence[int], g: Multigraph, lengths: Sequence[int], arrow: Arrow, t: int) -> int:
    """floor((f(head) - f(tail) + t) / l)."""
    return (f[g.head(arrow)] - f[g.tail(arrow)] + t) // lengths[arrow[0]]


def canonical_extension(f: Sequence[int], D: Divisor) -> tuple[int, ...]:
    host = D.host
    g = host.base
    if len(f) != g.vertex_count:
        raise DivisorError("function must be defined on V(G)")
    t = twist_of(D)
    F = list(f) + [0] * (host.size - g.vertex_count)
    for k, l in enumerate(host.lengths):
        arrow = (k, 1)
        u = g.tail(arrow)
        x = f[g.head(arrow)] - f[u] + t[arrow]
        slope, r = divmod(x, l)
        value = f[u]
        for j in range(1, l):
            value += slope
            F[host.point(arrow, j)] = value
            slope += -D[host.point(arrow, j)] + (1 if r and l - j == r else 0)
        # the path must close up at the head
        assert value + slope == f[g.head(arrow)]
    return tuple(F)


def div_ell(f: Sequence[int], D: Divisor) -> Divisor:
    return principal_divisor_H(D.host, canonical_extension(f, D))


def _fire_set(D: Divisor, v: int) -> set[int]:
    host = D.host
    cut = {v}
    for arrow in host.base.arrows_from(v):
        l = host.lengths[arrow[0]]
        j_e = next((j for j in range(1, l) if D[host.point(arrow, j)] == 1), 0)
        cut.update(host.point(arrow, i) for i in range(j_e + 1))
    return cut


def chip_fire(D: Divisor, v: int) -> Divisor:
    """Fire the cut of v determined by D; stays within G-admissible divisors."""
    if not is_G_admissible(D):
        raise DivisorError("chip_fire needs a G-admissible divisor")
    host = D.host
    cut = _fire_set(D, v)
    chi = [1 if x in cut else 0 for x in range(host.size)]
    return D + principal_divisor_H(host, chi)


def solve_equivalence(D: Divisor, D2: Divisor) -> tuple[int, ...] | None:
    """f on V(G) with D2 = D + div_ell(f; D), normalised by f(0) = 0, or None."""
    D._check(D2)
    if D.degree != D2.degree:
        return None
    host = D.host
    # div = -Laplacian, so Laplacian(F) = D - D2
    rhs = [a - b for a, b in zip(D.coeffs, D2.coeffs)]
    L = laplacian_matrix(host.graph)
    sol = linalg.solve([row[1:] for row in L[1:]], rhs[1:])
    if any(x.denominator != 1 for x in sol):
        return None
    F = (0, *(int(x) for x in sol))
    f = F[: host.base.vertex_count]
    if not (is_G_admissible(D) and is_G_admissible(D2)):
        return f
    if D + div_ell(f, D) != D2:
        raise AssertionError("admissible equivalent divisor not reached by div_ell")
    return f


def firing_sequence(D: Divisor, D2: Divisor) -> list[int] | None:
    f = solve_equivalence(D, D2)
    if f is None:
        return None
    low = min(f)
    return [v for v, c in enumerate(f) for _ in range(c - low)]


def replay(D: Divisor, sequence: Iterable[int]) -> Divisor:
    for v in sequence:
        D = chip_fire(D, v)
    return D
