"""Bucket coloring for supermultiplicative bounds: g(x) = f(x) x**log2(x).

For a connected substitution with clique number ``omega``, base vertices
whose child has clique number ``j <= omega/2`` form bucket ``W_j``; the rest
form ``W_inf``, a stable set of the base. Each ``W_j`` gets its own palette
of ``chi(F_j) * max chi(B_i)`` colors, and all ``W_inf`` blocks share one
more palette.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import oracle
from ..bounds import BoundFn, DEFAULT_PRECISION, MAX_PRECISION, supermult_star_bound
from ..certificate import Certificate
from ..errors import InvariantViolation
from ..graph import induced_subgraph
from ..optree import Leaf, OpTree, Substitute
from ._common import (
    BaseLog, certify, checked_coloring, compact, palette_size, prefixed, require_valid,
    substitution_parts, tree_omega,
)


def _exceeds(n: int, factors: list[tuple[BoundFn, int]]) -> bool:
    """True iff n is certainly above the product of the f(x) in ``factors``."""
    bits = DEFAULT_PRECISION
    while True:
        prod = None
        for fn, x in factors:
            val = fn(x, bits)
            prod = val if prod is None else prod * val
        if n <= prod.lo:
            return False
        if n > prod.hi:
            return True
        if bits >= MAX_PRECISION:
            return False
        bits *= 2


@dataclass
class SupermultNode:
    path: str
    omega: int
    buckets: dict[str, str] = field(default_factory=dict)
    palettes: dict[str, int] = field(default_factory=dict)

    @property
    def w_inf(self) -> list[str]:
        return sorted(b for b, j in self.buckets.items() if j == "inf")

    def to_json(self) -> dict:
        return {"path": self.path, "omega": self.omega, "buckets": self.buckets,
                "palettes": self.palettes}


@dataclass
class SupermultTrace:
    bound: str
    nodes: list[SupermultNode] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"bound": self.bound, "nodes": [n.to_json() for n in self.nodes]}


class _Supermult:
    def __init__(self, f: BoundFn, g: BoundFn):
        self.f, self.g = f, g
        self.memo: dict[int, tuple] = {}
        self.trace = SupermultTrace(str(g))
        self.log = BaseLog()

    def color(self, t: OpTree, path: str) -> dict[str, int]:
        if isinstance(t, Leaf):
            return checked_coloring(t.graph, self.f, f"leaf at {path}") if len(t.graph) else {}
        out: dict[str, int] = {}
        for kind, part in substitution_parts(t):
            if kind == "single":
                out.update(prefixed(part, self.color(t.children[part], f"{path}.children[{part}]")))
            else:
                out.update(self.block(part, path))
        return compact(out)

    def block(self, t: Substitute, path: str) -> dict[str, int]:
        f, g = self.f, self.g
        omega = tree_omega(t, self.memo)
        node = SupermultNode(path, omega)
        wi = {b: tree_omega(t.children[b], self.memo) for b in t.base}
        for b in t.base.sorted_vertices():
            node.buckets[b] = "inf" if 2 * wi[b] > omega else str(wi[b])

        child = {}
        for b in t.base:
            child[b] = self.color(t.children[b], f"{path}.children[{b}]")
            if _exceeds(palette_size(child[b]), [(g, wi[b])]):
                raise self.log.breach(f"{path}: child {b} exceeds g(omega_i)")

        out: dict[str, int] = {}
        offset = 0
        for j in range(1, omega // 2 + 1):
            members = [b for b, k in node.buckets.items() if k == str(j)]
            if not members:
                continue
            fj = induced_subgraph(t.base, members)
            if oracle.clique_number(fj) > omega // j:
                raise InvariantViolation(f"{path}: clique number of F_{j} exceeds omega // {j}")
            outer = self.log.color(fj, f, f"base bucket {j} at {path}")
            width = max(palette_size(child[b]) for b in members)
            size = palette_size(outer) * width
            if _exceeds(size, [(f, omega // j), (g, j)]):
                raise self.log.breach(f"{path}: bucket {j} palette {size} exceeds f(omega // j) g(j)")
            for b in members:
                out.update(prefixed(b, child[b], offset + outer[b] * width))
            node.palettes[str(j)] = size
            offset += size

        top = node.w_inf
        if top:
            if not t.base.is_stable(top):
                raise InvariantViolation(f"{path}: W_inf is not a stable set")
            width = max(palette_size(child[b]) for b in top)
            if _exceeds(width, [(g, omega - 1)]):
                raise self.log.breach(f"{path}: W_inf palette {width} exceeds g(omega - 1)")
            for b in top:
                out.update(prefixed(b, child[b], offset))
            node.palettes["inf"] = width
        self.trace.nodes.append(node)
        return out


def color_supermult(t: OpTree, f: BoundFn) -> tuple[dict[str, int], Certificate]:
    """Proper coloring with at most f(omega) omega**log2(omega) colors.

    Supermultiplicativity of f is checked on 1..omega, which covers every
    product ``f(omega // j) f(j)`` the argument relies on.
    """
    require_valid(t, {"Leaf", "Substitute"}, "color_supermult")
    omega = tree_omega(t)
    g = supermult_star_bound(f, check_up_to=max(omega, 2))
    run = _Supermult(f, g)
    coloring = run.color(t, "root")
    return certify(t, coloring, g, omega, "supermult", trace=run.trace, notes=run.log.notes())
