"""Coloring algorithms for graphs built by substitution and gluing."""

from .depth import color_by_depth
from .gluing import (
    ColoringConstraint, KGlueStep, KGlueTrace, color_clique_glue, color_kglue,
    merge_on_clique,
)
from .poly import PolyNode, PolyTrace, bucket_of, choose_m, color_poly, s_index
from .reduction import reduce_to_base, reduce_tree
from .supermult import SupermultNode, SupermultTrace, color_supermult

__all__ = [
    "ColoringConstraint", "KGlueStep", "KGlueTrace", "PolyNode", "PolyTrace",
    "SupermultNode", "SupermultTrace", "bucket_of", "choose_m", "color_by_depth",
    "color_clique_glue", "color_kglue", "color_poly", "color_supermult",
    "merge_on_clique", "reduce_to_base", "reduce_tree", "s_index",
]
