"""Product coloring along the substitution depth."""

from __future__ import annotations

from ..bounds import BoundFn, FloorPower, floor_value
from ..certificate import Certificate
from ..errors import InvariantViolation
from ..graph import induced_subgraph
from ..optree import Leaf, OpTree, Substitute, _depth
from ._common import BaseLog, checked_coloring, certify, prefixed, require_valid, tree_omega


def depth_coloring(
    t: OpTree, palette: int, f: BoundFn, log: BaseLog, path: str = "root"
) -> dict[str, int]:
    """Coloring of realize(t) with colors below ``palette ** (d + 1)``.

    ``palette`` is floor(f(omega)) for the omega of the whole graph. Children
    at isolated base vertices are colored on their own; every other child
    vertex gets the pair (base color, child color), flattened as
    ``base * palette**d + child``.
    """
    if isinstance(t, Leaf):
        return checked_coloring(t.graph, f, f"leaf at {path}") if len(t.graph) else {}
    assert isinstance(t, Substitute)
    d = _depth(t)
    out: dict[str, int] = {}
    linked = [b for b in t.base if t.base.degree(b) > 0]
    if linked:
        base = induced_subgraph(t.base, linked)
        outer = log.color(base, f, f"base at {path}")
        step = palette ** d
        for b in linked:
            inner = depth_coloring(t.children[b], palette, f, log, f"{path}.children[{b}]")
            out.update(prefixed(b, inner, outer[b] * step))
    for b in t.base.isolated_vertices():
        sub = depth_coloring(t.children[b], palette, f, log, f"{path}.children[{b}]")
        out.update(prefixed(b, sub))
    return out


def color_by_depth(t: OpTree, f: BoundFn) -> tuple[dict[str, int], Certificate]:
    """Proper coloring with at most floor(f(omega))**(d+1) colors, d the depth of t."""
    require_valid(t, {"Leaf", "Substitute"}, "color_by_depth")
    omega = tree_omega(t)
    d = _depth(t)
    if d >= 0 and omega < d + 1:
        raise InvariantViolation(f"clique number {omega} below depth + 1 = {d + 1}")
    palette = floor_value(f, omega)
    log = BaseLog()
    coloring = depth_coloring(t, palette, f, log)
    return certify(
        t, coloring, FloorPower(f, d + 1), omega, "depth",
        notes={"depth": d, "palette": palette, **log.notes()},
    )
