"""SVG picture of a tiling on a three-vertex graph.

The plane of degree-zero points is drawn isometrically for the quadratic form
q, so 100 SVG units correspond to q-length 1.  This is the only place floats
appear.
"""

from __future__ import annotations

import math
from itertools import product

from .graph import quadratic_form_q
from .tiling import MixedTiling, Tiling

SCALE = 100
PALETTE = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5"]


class RenderError(ValueError):
    pass


def _embedding(setup: MixedTiling):
    g = setup.graph
    b1, b2 = (-1, 1, 0), (-1, 0, 1)
    q11 = quadratic_form_q(g, b1)
    q22 = quadratic_form_q(g, b2)
    q12 = (quadratic_form_q(g, tuple(a + b for a, b in zip(b1, b2))) - q11 - q22) / 2
    # Cholesky of the Gram matrix
    a = math.sqrt(q11)
    b = float(q12) / a
    c = math.sqrt(float(q22) - b * b)

    def to_plane(p) -> tuple[float, float]:
        x1, x2 = float(p[1]), float(p[2])
        return (SCALE * (a * x1 + b * x2), -SCALE * c * x2)

    return to_plane


def render_svg(setup: MixedTiling, tiling: Tiling | None = None) -> str:
    if setup.graph.vertex_count != 3:
        raise RenderError("rendering needs a graph with exactly 3 vertices")
    tiling = tiling or setup.enumerate_tiling()
    to_plane = _embedding(setup)
    kinds = sorted({t.subgraph for t in tiling.tiles})
    color = {sub: PALETTE[i % len(PALETTE)] for i, sub in enumerate(kinds)}
    shapes = []
    for t in tiling.tiles:
        verts = [to_plane(p) for p in setup.tile_vertices(t.f)]
        cx = sum(x for x, _ in verts) / len(verts)
        cy = sum(y for _, y in verts) / len(verts)
        verts.sort(key=lambda v: math.atan2(v[1] - cy, v[0] - cx))
        shapes.append((t, verts))
    polys = []
    xs, ys = [], []
    for g1, g2 in product((-1, 0, 1), repeat=2):
        shift = to_plane(setup.period_vector((0, g1, g2)))
        home = g1 == 0 and g2 == 0
        for t, verts in shapes:
            pts = [(x + shift[0], y + shift[1]) for x, y in verts]
            xs.extend(x for x, _ in pts)
            ys.extend(y for _, y in pts)
            coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in pts)
            opacity = "1" if home else "0.45"
            polys.append(
                f'  <polygon points="{coords}" fill="{color[t.subgraph]}" fill-opacity="{opacity}" '
                f'stroke="#333" stroke-width="1"><title>{t.key}</title></polygon>'
            )
    corners = [(0, 0, 0), (0, 1, 0), (0, 1, 1), (0, 0, 1)]
    domain = [to_plane(setup.period_vector(c)) for c in corners]
    outline = " ".join(f"{x:.3f},{y:.3f}" for x, y in domain)
    pad = 20
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.3f} {y0:.3f} {w:.3f} {h:.3f}" '
        f'width="{w:.0f}" height="{h:.0f}">'
    )
    body = polys + [f'  <polygon points="{outline}" fill="none" stroke="#000" stroke-width="3" stroke-dasharray="8 4"/>']
    return "\n".join([head, *body, "</svg>"]) + "\n"

