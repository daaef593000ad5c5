"""Exact computations with cut lattices, G-admissible divisors and mixed Voronoi tilings."""

from .divisors import (
    Divisor,
    Subdivision,
    canonical_extension,
    chip_fire,
    div_ell,
    firing_sequence,
    is_G_admissible,
    principal_divisor_H,
    solve_equivalence,
    twist_of,
)
from .graph import (
    Multigraph,
    adjoint,
    coboundary,
    is_in_cut_space,
    laplacian_apply,
    quadratic_form_q,
    spanning_tree_count,
)
from .tiling import MixedTiling, TileDescriptor
from .voronoi import (
    GeneralizedCut,
    cells_intersect,
    enumerate_bonds,
    enumerate_cac,
    face_poset,
    face_vertex,
    is_generalized_cut_element,
    voronoi_membership,
)

__version__ = "0.1.0"

__all__ = [
    "adjoint",
    "canonical_extension",
    "cells_intersect",
    "chip_fire",
    "coboundary",
    "div_ell",
    "Divisor",
    "enumerate_bonds",
    "enumerate_cac",
    "face_poset",
    "face_vertex",
    "firing_sequence",
    "GeneralizedCut",
    "is_G_admissible",
    "is_generalized_cut_element",
    "is_in_cut_space",
    "laplacian_apply",
    "MixedTiling",
    "Multigraph",
    "principal_divisor_H",
    "quadratic_form_q",
    "solve_equivalence",
    "spanning_tree_count",
    "Subdivision",
    "TileDescriptor",
    "twist_of",
    "voronoi_membership",
]
