"""Command-line front end.

Exit status: 0 on success, 1 when the input violates a mathematical
precondition, 2 when it cannot be parsed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import io
from .divisors import DivisorError, Subdivision, firing_sequence, is_G_admissible, solve_equivalence
from .graph import GraphError, Multigraph, coboundary, indicator, quadratic_form_q, spanning_tree_count
from .render import RenderError, render_svg
from .tiling import MixedTiling, TilingError
from .voronoi import VoronoiError, face_poset, is_bond_set, proper_subsets

DOMAIN_ERRORS = (GraphError, DivisorError, VoronoiError, TilingError, RenderError)


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise io.ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return io.loads(text)


def _load_graph(path: str):
    return io.graph_from_json(_read_json(path))


def _q_gram(g: Multigraph) -> list[list]:
    """Gram matrix of q's bilinear form on the basis e_v - e_0, v > 0."""
    n = g.vertex_count
    basis = []
    for v in range(1, n):
        b = [0] * n
        b[0], b[v] = -1, 1
        basis.append(b)
    q = [quadratic_form_q(g, b) for b in basis]
    gram = []
    for i, bi in enumerate(basis):
        row = []
        for j, bj in enumerate(basis):
            if i == j:
                row.append(q[i])
            else:
                s = quadratic_form_q(g, [a + b for a, b in zip(bi, bj)])
                row.append((s - q[i] - q[j]) / 2)
        gram.append([io.rational_to_json(x) for x in row])
    return gram


def cmd_analyze(args) -> str:
    g, lengths, twist = _load_graph(args.graph)
    bonds = [
        {"set": list(C), "element": list(coboundary(g, indicator(g.vertex_count, C)))}
        for C in proper_subsets(g.vertex_count)
        if is_bond_set(g, C)
    ]
    report = {
        "vertices": g.vertex_count,
        "edges": [list(e) for e in g.edges],
        "spanning_trees": spanning_tree_count(g),
        "q_gram": _q_gram(g),
        "bonds": bonds,
    }
    return io.dumps(report)


def cmd_faces(args) -> str:
    g, _, _ = _load_graph(args.graph)
    fp = face_poset(g)
    if args.format == "dot":
        return io.face_poset_to_dot(fp)
    if args.format != "json":
        raise UsageError("faces supports --format json or dot")
    return io.dumps(io.face_poset_to_json(fp))


def cmd_admissible(args) -> str:
    g, lengths, _ = _load_graph(args.graph)
    host = Subdivision(g, lengths or (1,) * g.edge_count)
    divisors = [io.divisor_from_json(host, _read_json(p)) for p in args.divisors]
    report: dict = {
        "admissible": [is_G_admissible(D) for D in divisors],
        "degree": [D.degree for D in divisors],
    }
    if len(divisors) == 2:
        D1, D2 = divisors
        for name, D in (("first", D1), ("second", D2)):
            if not is_G_admissible(D):
                raise DivisorError(f"the {name} divisor is not G-admissible")
        f = solve_equivalence(D1, D2)
        report["equivalent"] = f is not None
        report["f"] = list(f) if f is not None else None
        seq = firing_sequence(D1, D2)
        report["firing_sequence"] = seq
    return io.dumps(report)


def _coverage(setup: MixedTiling, tiling, samples: int, seed: int) -> dict:
    covered = overlaps = 0
    for p in setup.sample_points(samples, seed):
        cands = setup.candidates(p, tiling)
        if any(setup.tile_contains(q, t.f) for t, _, q in cands):
            covered += 1
        if sum(setup.tile_contains(q, t.f, strict=True) for t, _, q in cands) > 1:
            overlaps += 1
    return {"samples": samples, "seed": seed, "covered": covered, "overlaps": overlaps}


def cmd_tiles(args) -> str:
    g, lengths, twist = _load_graph(args.graph)
    setup = MixedTiling(g, lengths, twist)
    if args.format == "dot":
        return io.dual_skeleton_to_dot(setup.dual_skeleton())
    if args.format != "json":
        raise UsageError("tiles supports --format json or dot")
    tiling = setup.enumerate_tiling()
    report = io.tiling_to_json(tiling)
    if args.samples:
        report["coverage"] = _coverage(setup, tiling, args.samples, args.seed)
    return io.dumps(report)


def cmd_locate(args) -> str:
    g, lengths, twist = _load_graph(args.graph)
    setup = MixedTiling(g, lengths, twist)
    data = _read_json(args.points)
    if not isinstance(data, dict) or not isinstance(data.get("points"), list):
        raise io.ParseError('points file needs a "points" list')
    points = []
    for raw in data["points"]:
        if not isinstance(raw, list) or len(raw) != g.vertex_count:
            raise io.ParseError("each point needs one coordinate per vertex")
        p = tuple(io.parse_rational(x) for x in raw)
        if sum(p) != 0:
            raise TilingError("points must have coordinate sum zero")
        points.append(p)
    tiling = setup.enumerate_tiling()
    results = []
    for p in points:
        hits = []
        for t, shift, q in setup.candidates(p, tiling):
            if setup.tile_contains(q, t.f):
                hits.append(
                    {"key": t.key, "shift": list(shift), "interior": setup.tile_contains(q, t.f, strict=True)}
                )
        results.append({"point": io.vector_to_json(p), "tiles": hits})
    return io.dumps({"results": results})


def cmd_render(args) -> str:
    g, lengths, twist = _load_graph(args.graph)
    if args.format not in ("svg", None):
        raise UsageError("render only produces svg")
    return render_svg(MixedTiling(g, lengths, twist))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cutvor", description="Cut lattices, admissible divisors and Voronoi tilings.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_: str, default_format: str | None = "json"):
        p = sub.add_parser(name, help=help_)
        p.add_argument("graph", help="graph JSON file")
        p.add_argument("--output", "-o", help="write the result here instead of stdout")
        p.add_argument("--format", choices=["json", "dot", "svg"], default=default_format)
        p.set_defaults(func=func)
        return p

    add("analyze", cmd_analyze, "spanning trees, q Gram matrix and bonds")
    add("faces", cmd_faces, "face poset of the Voronoi cell checked against coherent orientations")
    p = add("admissible", cmd_admissible, "admissibility and linear equivalence of divisors")
    p.add_argument("divisors", nargs="+", help="one or two divisor JSON files")
    p = add("tiles", cmd_tiles, "enumerate the tiling and its adjacency")
    p.add_argument("--samples", type=int, default=0, help="run a coverage check on this many random points")
    p.add_argument("--seed", type=int, default=0)
    p = add("locate", cmd_locate, "tiles containing each point of a point file")
    p.add_argument("points", help='JSON file {"points": [[...], ...]}')
    add("render", cmd_render, "SVG of a tiling for a 3-vertex graph", default_format="svg")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "admissible" and len(args.divisors) > 2:
        print("error: admissible takes one or two divisor files", file=sys.stderr)
        return 2
    try:
        text = args.func(args)
    except (io.ParseError, UsageError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())

