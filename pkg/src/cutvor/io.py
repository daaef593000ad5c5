"""JSON and DOT encodings.  Rationals travel as "p/q" strings, integers as numbers."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .divisors import Divisor, Subdivision
from .graph import Arrow, Multigraph
from .tiling import MixedTiling, NeighborRecord, TileDescriptor, Tiling
from .voronoi import FacePoset


class ParseError(ValueError):
    pass


_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def rational_to_json(x) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.fullmatch(value.strip()):
        try:
            return Fraction(value.strip())
        except ZeroDivisionError as exc:
            raise ParseError(f"zero denominator: {value!r}") from exc
    raise ParseError(f"not a rational: {value!r}")


def parse_int(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer, got {value!r}")
    return value


def vector_to_json(values: Iterable) -> list:
    return [rational_to_json(x) for x in values]


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc


def arrow_code(arrow: Arrow) -> str:
    k, s = arrow
    return f"{k}{'+' if s > 0 else '-'}"


def orientation_code(D: Iterable[Arrow]) -> str:
    arrows = sorted(D)
    return ",".join(arrow_code(a) for a in arrows) if arrows else "empty"


# graphs


def graph_from_json(data: Any) -> tuple[Multigraph, tuple[int, ...] | None, tuple[int, ...] | None]:
    """Parse a graph object; domain errors (loops, disconnection) surface from Multigraph."""
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise ParseError('graph needs "vertices" and "edges"')
    n = parse_int(data["vertices"])
    edges = data["edges"]
    if not isinstance(edges, list) or any(not isinstance(e, list) or len(e) != 2 for e in edges):
        raise ParseError("edges must be a list of vertex pairs")
    edges = tuple((parse_int(a), parse_int(b)) for a, b in edges)
    lengths = twist = None
    for name in ("lengths", "twist"):
        if name in data and not isinstance(data[name], list):
            raise ParseError(f'"{name}" must be a list')
    if "lengths" in data:
        lengths = tuple(parse_int(x) for x in data["lengths"])
        if len(lengths) != len(edges):
            raise ParseError("need one length per edge")
    if "twist" in data:
        twist = tuple(parse_int(x) for x in data["twist"])
        if len(twist) != len(edges):
            raise ParseError("need one twist value per edge")
    return Multigraph(n, edges), lengths, twist


def graph_to_json(g: Multigraph, lengths: Sequence[int] | None = None, twist: Sequence[int] | None = None) -> dict:
    out: dict = {"vertices": g.vertex_count, "edges": [list(e) for e in g.edges]}
    if lengths is not None:
        out["lengths"] = list(lengths)
    if twist is not None:
        out["twist"] = list(twist)
    return out


# divisors


def divisor_to_json(D: Divisor) -> dict:
    host = D.host
    n = host.base.vertex_count
    on_g = {str(v): D[v] for v in range(n) if D[v]}
    interior = []
    for k in range(host.base.edge_count):
        for j, x in enumerate(host.interior(k), start=1):
            if D[x]:
                interior.append({"edge": k, "dir": "+", "j": j, "coeff": D[x]})
    return {"on_G": on_g, "interior": interior}


def divisor_from_json(host: Subdivision, data: Any) -> Divisor:
    if not isinstance(data, dict):
        raise ParseError("divisor must be a JSON object")
    coeffs = [0] * host.size
    n = host.base.vertex_count
    on_g = data.get("on_G", {})
    if not isinstance(on_g, dict):
        raise ParseError('"on_G" must map vertices to coefficients')
    for key, c in on_g.items():
        try:
            v = int(key)
        except ValueError as exc:
            raise ParseError(f"bad vertex {key!r}") from exc
        if not 0 <= v < n:
            raise ParseError(f"vertex {v} out of range")
        coeffs[v] += parse_int(c)
    for item in data.get("interior", []):
        if not isinstance(item, dict) or not {"edge", "j", "coeff"} <= set(item):
            raise ParseError('interior entries need "edge", "j" and "coeff"')
        k, j = parse_int(item["edge"]), parse_int(item["j"])
        sign = item.get("dir", "+")
        if sign not in ("+", "-"):
            raise ParseError('"dir" must be "+" or "-"')
        if not 0 <= k < host.base.edge_count or not 1 <= j < host.lengths[k]:
            raise ParseError(f"no interior vertex x_{j} on edge {k}")
        coeffs[host.point((k, 1 if sign == "+" else -1), j)] += parse_int(item["coeff"])
    return Divisor(host, tuple(coeffs))


# face posets


def face_poset_to_json(fp: FacePoset) -> dict:
    faces = []
    for face in fp.faces:
        faces.append(
            {
                "cao": orientation_code(face.cao.arrows),
                "codim": face.codim,
                "bonds_through": sorted(vector_to_json(b) for b in face.bonds_through),
                "vertices": sorted(vector_to_json(p) for p in face.vertices),
            }
        )
    codes = [orientation_code(f.cao.arrows) for f in fp.faces]
    covers = [[codes[i], codes[j]] for i, j in fp.order.covers()]
    return {
        "faces": len(fp.faces),
        "cac": len(fp.cac),
        "isomorphic": fp.isomorphic,
        "f_vector": fp.f_vector(),
        "poset": sorted(faces, key=lambda f: (f["codim"], f["cao"])),
        "covers": sorted(covers),
    }


def face_poset_to_dot(fp: FacePoset) -> str:
    codes = [orientation_code(f.cao.arrows) for f in fp.faces]
    lines = ["digraph faces {", "  rankdir=BT;"]
    for i in sorted(range(len(codes)), key=lambda i: codes[i]):
        lines.append(f'  "{codes[i]}" [label="{codes[i]}\\ncodim {fp.faces[i].codim}"];')
    for i, j in sorted(fp.order.covers(), key=lambda e: (codes[e[0]], codes[e[1]])):
        lines.append(f'  "{codes[i]}" -> "{codes[j]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# tilings


def tiling_to_json(tiling: Tiling) -> dict:
    setup = tiling.setup
    tiles = []
    for t in tiling.tiles:
        tiles.append(
            {
                "key": t.key,
                "f": list(t.f),
                "dm": vector_to_json(t.dm),
                "subgraph_edges": list(t.subgraph),
                "center": vector_to_json(t.center),
                "neighbors": [
                    {
                        "S": list(r.S),
                        "n": r.n,
                        "eta": vector_to_json(r.eta),
                        "target": r.target,
                        "shift": list(r.shift),
                    }
                    for r in tiling.adjacency[t.key]
                ],
            }
        )
    return {
        "graph": graph_to_json(setup.graph, setup.lengths, setup.twist),
        "period": setup.period,
        "tiles": tiles,
    }


def tiling_from_json(data: Any) -> Tiling:
    if not isinstance(data, dict) or "tiles" not in data or "graph" not in data:
        raise ParseError('tiling needs "graph" and "tiles"')
    g, lengths, twist = graph_from_json(data["graph"])
    setup = MixedTiling(g, lengths, twist)
    tiles, adjacency = [], {}
    for item in data["tiles"]:
        t = TileDescriptor(
            tuple(parse_int(x) for x in item["f"]),
            tuple(parse_rational(x) for x in item["dm"]),
            tuple(parse_int(x) for x in item["subgraph_edges"]),
            tuple(parse_rational(x) for x in item["center"]),
            True,
        )
        if t.key != item["key"]:
            raise ParseError(f"tile key {item['key']!r} does not match its data")
        tiles.append(t)
        adjacency[t.key] = [
            NeighborRecord(
                tuple(parse_int(x) for x in r["S"]),
                parse_int(r["n"]),
                tuple(parse_rational(x) for x in r["eta"]),
                r["target"],
                tuple(parse_int(x) for x in r["shift"]),
            )
            for r in item["neighbors"]
        ]
    return Tiling(setup, tiles, adjacency)


def dual_skeleton_to_dot(skeleton: dict) -> str:
    lines = ["graph dual_skeleton {"]
    for key in skeleton["vertices"]:
        lines.append(f'  "{key}";')
    seen = set()
    for a, b, S, shift in skeleton["edges"]:
        # each facet is seen from both sides; keep one copy
        back = tuple(-x for x in shift)
        if (b, a, back) in seen:
            continue
        seen.add((a, b, tuple(shift)))
        label = "S=" + "".join(str(v) for v in S) + " shift=" + ",".join(str(x) for x in shift)
        lines.append(f'  "{a}" -- "{b}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
