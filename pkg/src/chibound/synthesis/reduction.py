"""Reduce a substitution/clique-glue tree to a substitution-only witness."""

from __future__ import annotations

from .. import oracle
from ..graph import Graph
from ..optree import CliqueGlue, Leaf, OpTree, Substitute, realize
from ._common import require_valid


def reduce_tree(t: OpTree) -> OpTree:
    """A Leaf/Substitute tree realizing an induced subgraph of realize(t) with equal chi.

    A clique glue has the chromatic number of its larger side, so the other
    side is dropped (ties keep the left). A substitution's chromatic number
    depends only on its children's chromatic numbers, so reducing every child
    in place preserves it. Vertex ids survive both steps unchanged.
    """
    require_valid(t, {"Leaf", "Substitute", "CliqueGlue"}, "reduce_to_base")
    return _reduce(t)


def _reduce(t: OpTree) -> OpTree:
    if isinstance(t, Leaf):
        return t
    if isinstance(t, Substitute):
        return Substitute(t.base, {b: _reduce(c) for b, c in t.children.items()})
    assert isinstance(t, CliqueGlue)
    left, right = _reduce(t.left), _reduce(t.right)
    if oracle.chromatic_number(realize(left)) >= oracle.chromatic_number(realize(right)):
        return left
    return right


def reduce_to_base(t: OpTree) -> tuple[Graph, dict[str, str]]:
    """(witness graph, embedding of its vertices into realize(t))."""
    witness = realize(reduce_tree(t))
    return witness, {v: v for v in witness.sorted_vertices()}
