"""Example families and seeded random construction trees."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import oracle
from .errors import DomainError
from .graph import (
    Graph, complete_graph, cycle_graph, edgeless_graph, find_isomorphism,
    induced_subgraph, lex_product, mycielskian, path_graph,
)
from .optree import CliqueGlue, KGlue, Leaf, OpTree, Substitute, realize
from .rng import SplitMix64

MAX_VERTICES = 100


def mycielski_tower(t: int) -> Graph:
    """The Mycielskian applied t times to K2: 3 * 2**t - 1 vertices, omega 2, chi t + 2."""
    if t < 0:
        raise DomainError("t must be a natural number")
    if 3 * 2**t - 1 > MAX_VERTICES:
        raise DomainError(f"tower {t} would exceed {MAX_VERTICES} vertices")
    g = complete_graph(2)
    for _ in range(t):
        g = mycielskian(g)
    return g


def alternate_o1_o2(t: int) -> Graph:
    """Apply O1, O2, O1, ... (t operators in all) to K2.

    O1 takes the Mycielskian when chi is odd and O2 when chi is even; each
    is the identity otherwise. chi starts at the oracle value 2 and rises by
    exactly one per Mycielskian of a graph with an edge.
    """
    if t < 0:
        raise DomainError("t must be a natural number")
    g = complete_graph(2)
    chi = oracle.chromatic_number(g)
    for step in range(t):
        wants_odd = step % 2 == 0
        if (chi % 2 == 1) == wants_odd:
            if 2 * len(g) + 1 > MAX_VERTICES:
                raise DomainError(f"step {step + 1} would exceed {MAX_VERTICES} vertices")
            g = mycielskian(g)
            chi += 1
    return g


def lex_power(f: Graph, i: int) -> Graph:
    """F_1 = f and F_(i+1) = f[F_i]: a copy of F_i substituted for every vertex of f."""
    if i < 1:
        raise DomainError("i must be a positive integer")
    if len(f) ** i > MAX_VERTICES:
        raise DomainError(f"lex power would exceed {MAX_VERTICES} vertices")
    g = f
    for _ in range(i - 1):
        g = lex_product(f, g)
    return g


def lex_power_tree(f: Graph, i: int, class_tag: str = "base") -> OpTree:
    """Substitution tree realizing lex_power(f, i) with the same vertex ids."""
    if i < 1:
        raise DomainError("i must be a positive integer")
    t: OpTree = Leaf(f, class_tag)
    for _ in range(i - 1):
        t = Substitute(f, {v: t for v in f})
    return t


# -- named pool graphs --------------------------------------------------------------

_POOL = re.compile(r"([KEPCM])(\d+)")


def pool_graph(name: str) -> Graph:
    """``Kn`` complete, ``En`` edgeless, ``Pn`` path, ``Cn`` cycle, ``Mt`` Mycielski tower."""
    m = _POOL.fullmatch(name)
    if not m:
        raise DomainError(f"unknown pool graph {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "M":
        return mycielski_tower(n)
    if n < 1 or (kind == "C" and n < 3):
        raise DomainError(f"pool graph {name!r} is too small")
    return {"K": complete_graph, "E": edgeless_graph, "P": path_graph, "C": cycle_graph}[kind](n)


# -- random construction trees ----------------------------------------------------------

KINDS = ("leaf", "substitute", "clique_glue", "k_glue")


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_vertices: int = 20
    max_depth: int = 3
    weights: dict[str, int] = field(
        default_factory=lambda: {"leaf": 1, "substitute": 2, "clique_glue": 0, "k_glue": 0}
    )
    leaf_pool: tuple[str, ...] = ("K1", "K2", "K3", "E2", "P3", "C5")
    base_pool: tuple[str, ...] = ("K2", "E2", "P3")
    k: int = 1

    def __post_init__(self):
        if set(self.weights) - set(KINDS):
            raise DomainError(f"unknown node kinds in weights: {sorted(set(self.weights) - set(KINDS))}")
        if any(w < 0 for w in self.weights.values()) or not any(self.weights.values()):
            raise DomainError("weights must be non-negative with a positive total")
        if self.max_vertices < 1 or self.max_depth < 0 or self.k < 1:
            raise DomainError("max_vertices >= 1, max_depth >= 0 and k >= 1 are required")
        for name in self.leaf_pool + self.base_pool:
            pool_graph(name)


def _rename_tree(t: OpTree, mapping: dict[str, str]) -> OpTree:
    """Relabel the vertices of a Leaf/glue tree (Substitute ids are derived, so never renamed)."""
    if isinstance(t, Leaf):
        return Leaf(t.graph.relabel({v: mapping.get(v, v) for v in t.graph}), t.class_tag)
    if isinstance(t, CliqueGlue):
        return CliqueGlue(
            _rename_tree(t.left, mapping), _rename_tree(t.right, mapping),
            frozenset(mapping.get(v, v) for v in t.shared),
        )
    if isinstance(t, KGlue):
        return KGlue(
            t.k, _rename_tree(t.left, mapping), _rename_tree(t.right, mapping),
            frozenset(mapping.get(v, v) for v in t.shared),
        )
    raise DomainError("only Leaf/glue trees can be relabelled")


class _Gen:
    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rng = SplitMix64(cfg.seed)
        self.counter = 0

    def fresh(self) -> str:
        self.counter += 1
        return f"n{self.counter}"

    def leaf(self, budget: int) -> tuple[OpTree, Graph]:
        fits = [p for p in self.cfg.leaf_pool if len(pool_graph(p)) <= budget]
        g = pool_graph(self.rng.choice(fits)) if fits else complete_graph(1)
        g = g.relabel({v: self.fresh() for v in g.sorted_vertices()})
        return Leaf(g), g

    def kind(self, depth: int, budget: int, glue_only: bool) -> str:
        if depth == 0 or budget < 2:
            return "leaf"
        kinds = [k for k in KINDS if self.cfg.weights.get(k, 0) > 0]
        if glue_only:
            kinds = [k for k in kinds if k != "substitute"]
        bases = [p for p in self.cfg.base_pool if 2 <= len(pool_graph(p)) <= budget]
        if not bases:
            kinds = [k for k in kinds if k != "substitute"]
        if not kinds:
            return "leaf"
        return self.rng.weighted(kinds, [self.cfg.weights[k] for k in kinds])

    def tree(self, depth: int, budget: int, glue_only: bool = False) -> tuple[OpTree, Graph]:
        kind = self.kind(depth, budget, glue_only)
        if kind == "leaf":
            return self.leaf(budget)
        if kind == "substitute":
            return self.substitute(depth, budget)
        return self.glue(kind, depth, budget, glue_only)

    def substitute(self, depth: int, budget: int) -> tuple[OpTree, Graph]:
        bases = [p for p in self.cfg.base_pool if 2 <= len(pool_graph(p)) <= budget]
        base = pool_graph(self.rng.choice(bases))
        base = base.relabel({v: self.fresh() for v in base.sorted_vertices()})
        share = budget // len(base)
        children = {b: self.tree(depth - 1, share)[0] for b in base.sorted_vertices()}
        t = Substitute(base, children)
        return t, realize(t)

    def glue(self, kind: str, depth: int, budget: int, glue_only: bool) -> tuple[OpTree, Graph]:
        left, gl = self.tree(depth - 1, max(1, budget // 2), glue_only)
        right, gr = self.tree(depth - 1, max(1, budget - len(gl)), glue_only=True)
        cap = min(len(gl), len(gr)) - 1
        if kind == "k_glue":
            cap = min(cap, self.cfg.k)
        c_set, d_set = self.matching_sets(kind, gl, gr, self.rng.randbelow(max(cap, 0) + 1))
        right = _rename_tree(right, dict(zip(d_set, c_set)))
        # operand order is random so both sides see every tree shape
        if self.rng.randbelow(2):
            left, right = right, left
        shared = frozenset(c_set)
        t = CliqueGlue(left, right, shared) if kind == "clique_glue" else KGlue(self.cfg.k, left, right, shared)
        return t, realize(t)

    def matching_sets(self, kind: str, gl: Graph, gr: Graph, size: int) -> tuple[list[str], list[str]]:
        """Sets C in gl and D in gr, listed so that position i of D maps to position i of C."""
        if size == 0:
            return [], []
        if kind == "k_glue":
            for _ in range(30):
                c = self.rng.sample(gl.sorted_vertices(), size)
                d = self.rng.sample(gr.sorted_vertices(), size)
                iso = find_isomorphism(induced_subgraph(gr, d), induced_subgraph(gl, c))
                if iso is not None:
                    return [iso[v] for v in d], d
        kl = sorted(oracle.maximum_clique(gl))
        kr = sorted(oracle.maximum_clique(gr))
        size = min(size, len(kl), len(kr))
        return self.rng.sample(kl, size), self.rng.sample(kr, size)


def random_optree(cfg: GenConfig) -> OpTree:
    """A valid tree drawn from cfg's pools and node mix; equal configs give equal trees."""
    return _Gen(cfg).tree(cfg.max_depth, cfg.max_vertices)[0]
