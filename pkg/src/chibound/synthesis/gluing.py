"""Colorings across clique cutsets and small cutsets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .. import oracle
from ..bounds import BoundFn, KGlueShift, check_certificate, floor_value
from ..certificate import Certificate
from ..errors import DomainError, InvariantViolation
from ..graph import Graph, induced_subgraph, is_proper
from ..optree import (
    CliqueGlue, KGlue, Leaf, OpTree, glue_order_ok, iter_nodes, max_k,
    normalize_glue_order, realize,
)
from ._common import certify, checked_coloring, require_valid, tree_omega


# -- clique cutsets ---------------------------------------------------------------

def merge_on_clique(
    g: Graph, c1: Mapping[str, int], c2: Mapping[str, int], shared: Iterable[str]
) -> dict[str, int]:
    """Combine colorings of the two sides of a clique cutset.

    The side with fewer colors is renamed by a bijection that agrees with the
    other side on ``shared``, so the result uses max(|c1|, |c2|) colors.
    """
    shared = frozenset(shared)
    v1, v2 = frozenset(c1), frozenset(c2)
    if v1 | v2 != g.vertices or v1 & v2 != shared:
        raise DomainError("colorings must cover the two glue sides and overlap exactly on shared")
    if not g.is_clique(shared):
        raise DomainError("shared set is not a clique")
    for c, side in ((c1, v1), (c2, v2)):
        if not is_proper(induced_subgraph(g, side), c):
            raise DomainError("input coloring is not proper on its side")
    big, small = (c1, c2) if len(set(c1.values())) >= len(set(c2.values())) else (c2, c1)
    rename = {small[v]: big[v] for v in shared}
    spare = iter(sorted(set(big.values()) - set(rename.values())))
    for col in sorted(set(small.values()) - set(rename)):
        rename[col] = next(spare)
    out = dict(big)
    out.update({v: rename[c] for v, c in small.items()})
    return out


def color_clique_glue(t: OpTree, f: BoundFn) -> tuple[dict[str, int], Certificate]:
    """Color a Leaf/CliqueGlue tree with max over leaves of their chromatic numbers."""
    require_valid(t, {"Leaf", "CliqueGlue"}, "color_clique_glue")

    def go(node: OpTree, path: str) -> tuple[Graph, dict[str, int]]:
        if isinstance(node, Leaf):
            return node.graph, checked_coloring(node.graph, f, f"leaf at {path}")
        gl, cl = go(node.left, f"{path}.left")
        gr, cr = go(node.right, f"{path}.right")
        g = realize(CliqueGlue(Leaf(gl), Leaf(gr), node.shared))
        return g, merge_on_clique(g, cl, cr, node.shared)

    _, coloring = go(t, "root")
    return certify(t, coloring, f, tree_omega(t), "clique-glue")


# -- small cutsets --------------------------------------------------------------------

@dataclass(frozen=True)
class ColoringConstraint:
    """Palette B, precoloring phi_K of the set K, and forbidden colors F(v) off K."""

    palette: frozenset[int]
    precolored: Mapping[str, int] = field(default_factory=dict)
    forbidden: Mapping[str, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        pal = self.palette
        if isinstance(pal, int):
            pal = range(pal)
        object.__setattr__(self, "palette", frozenset(pal))
        object.__setattr__(self, "precolored", dict(self.precolored))
        object.__setattr__(
            self, "forbidden", {v: frozenset(s) for v, s in self.forbidden.items() if s}
        )

    @property
    def K(self) -> frozenset[str]:
        return frozenset(self.precolored)

    def budget(self, k: int) -> int:
        return k * len(self.precolored) + sum(len(s) for s in self.forbidden.values())

    def check(self, g: Graph) -> None:
        K = self.K
        if not K <= g.vertices:
            raise DomainError("precolored vertices are not in the graph")
        if not set(self.forbidden) <= g.vertices - K:
            raise DomainError("forbidden colors are only defined off the precolored set")
        if not set(self.precolored.values()) <= self.palette:
            raise DomainError("precoloring uses colors outside the palette")
        if any(not s <= self.palette for s in self.forbidden.values()):
            raise DomainError("forbidden sets must lie inside the palette")
        if not is_proper(induced_subgraph(g, K), self.precolored):
            raise DomainError("precoloring is not proper")

    def admits(self, coloring: Mapping[str, int]) -> bool:
        """Whether ``coloring`` is appropriate: extends phi_K, avoids F, stays in B."""
        return (
            all(coloring.get(v) == c for v, c in self.precolored.items())
            and all(coloring[v] not in s for v, s in self.forbidden.items())
            and set(coloring.values()) <= self.palette
        )


@dataclass
class KGlueStep:
    path: str
    kind: str
    K: int
    budget: int
    heavy: str | None = None
    light_weight: int | None = None

    def to_json(self) -> dict:
        out = {"path": self.path, "kind": self.kind, "K": self.K, "budget": self.budget}
        if self.heavy is not None:
            out.update(heavy=self.heavy, light_weight=self.light_weight)
        return out


@dataclass
class KGlueTrace:
    k: int
    palette: int
    steps: list[KGlueStep] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"k": self.k, "palette": self.palette, "steps": [s.to_json() for s in self.steps]}


class _KGlue:
    def __init__(self, f: BoundFn, k: int, palette: frozenset[int], trace: KGlueTrace):
        self.f, self.k, self.palette, self.trace = f, k, sorted(palette), trace

    def solve(
        self, t: OpTree, K: dict[str, int], F: dict[str, frozenset[int]], path: str
    ) -> dict[str, int]:
        k = self.k
        budget = k * len(K) + sum(len(s) for s in F.values())
        step = KGlueStep(path, "kglue" if isinstance(t, KGlue) else "leaf", len(K), budget)
        self.trace.steps.append(step)
        if budget > 2 * k * k - 1:
            raise InvariantViolation(f"{path}: constraint budget {budget} exceeds 2k^2-1")
        if not isinstance(t, KGlue):
            return self.leaf(t, K, F, path)

        C = t.shared
        V1 = realize(t.left).vertices - C
        V2 = realize(t.right).vertices - C

        def weight(side):
            return k * len(K.keys() & side) + sum(len(F.get(v, ())) for v in side - K.keys())

        heavy, light = (t.left, t.right), (V1, V2)
        step.heavy = "left"
        if weight(V1) < weight(V2):
            heavy, light = (t.right, t.left), (V2, V1)
            step.heavy = "right"
        (g1, g2), (_, W2) = heavy, light
        step.light_weight = weight(W2)
        if step.light_weight > k * k - 1:
            raise InvariantViolation(f"{path}: lighter side weight {step.light_weight} exceeds k^2-1")

        near = {K[v] for v in K.keys() & W2}
        K1 = {v: c for v, c in K.items() if v not in W2}
        F1 = {}
        for v in realize(g1).vertices - K1.keys():
            extra = near if v in C else set()
            F1[v] = frozenset(F.get(v, frozenset()) | extra)
        side = "right" if step.heavy == "left" else "left"
        phi1 = self.solve(g1, K1, {v: s for v, s in F1.items() if s}, f"{path}.{step.heavy}")

        K2 = {v: phi1[v] for v in C}
        K2.update({v: K[v] for v in K.keys() & W2})
        F2 = {v: F[v] for v in W2 - K.keys() if v in F}
        phi2 = self.solve(g2, K2, F2, f"{path}.{side}")
        if any(phi1[v] != phi2[v] for v in C):
            raise InvariantViolation(f"{path}: the two sides disagree on the cutset")
        return {**phi1, **phi2}

    def leaf(self, t: OpTree, K: dict[str, int], F: dict[str, frozenset[int]], path: str) -> dict[str, int]:
        for i, node in enumerate(iter_nodes(t)):
            if isinstance(node, Leaf):
                checked_coloring(node.graph, self.f, f"leaf {i} at {path}")
        g = realize(t)
        taken = set(K.values()).union(*F.values())
        free = [c for c in self.palette if c not in taken]
        rest = induced_subgraph(g, g.vertices - K.keys())
        inner = oracle.optimal_coloring(rest)
        if len(set(inner.values())) > len(free):
            raise InvariantViolation(f"{path}: {len(free)} free colors cannot color the leaf")
        out = dict(K)
        out.update({v: free[c] for v, c in inner.items()})
        if any(out[v] in F.get(v, ()) for v in rest):
            raise InvariantViolation(f"{path}: leaf coloring uses a forbidden color")
        return out


def color_kglue(
    t: OpTree, f: BoundFn, constraint: ColoringConstraint | None = None, k: int | None = None
) -> tuple[dict[str, int], Certificate]:
    """Coloring of a Leaf/KGlue tree (CliqueGlue allowed) appropriate for the constraint.

    ``k`` defaults to the largest k in the tree (at least 1). Without a
    constraint the palette is {0, ..., floor(f(omega)) + 2k^2 - 2}, nothing
    precolored and nothing forbidden. Subtrees built only from clique glues
    are treated as leaves, after pushing clique glues below small-cutset glues.
    """
    require_valid(t, {"Leaf", "KGlue", "CliqueGlue"}, "color_kglue")
    if not glue_order_ok(t):
        t = normalize_glue_order(t)
    top = max_k(t)
    k = max(top, 1) if k is None else k
    if k < max(top, 1):
        raise DomainError(f"k = {k} is below the largest glue size {top} in the tree")
    g = realize(t)
    omega = tree_omega(t)
    need = floor_value(f, omega) + 2 * k * k - 1
    if constraint is None:
        constraint = ColoringConstraint(need)
    constraint.check(g)
    if len(constraint.palette) < need:
        raise DomainError(f"palette has {len(constraint.palette)} colors; at least {need} are needed")
    if constraint.budget(k) > 2 * k * k - 1:
        raise DomainError(f"constraint budget {constraint.budget(k)} exceeds 2k^2-1 = {2 * k * k - 1}")

    trace = KGlueTrace(k, len(constraint.palette))
    run = _KGlue(f, k, constraint.palette, trace)
    coloring = run.solve(t, dict(constraint.precolored), dict(constraint.forbidden), "root")
    if not constraint.admits(coloring):
        raise InvariantViolation("k-glue coloring is not appropriate for its constraint")
    if not is_proper(g, coloring):
        raise InvariantViolation("k-glue produced an improper coloring")
    cert = Certificate(
        bound=KGlueShift(f, k), omega=omega, colors_used=len(set(coloring.values())),
        method="kglue", trace=trace, notes={"k": k},
    )
    check_certificate(cert)
    return coloring, cert
