"""Exact brute-force invariants used to certify synthesized colorings.

Everything here is exact and deterministic: clique number, chromatic
number (with a witness coloring), maximal stable sets, the fractional
chromatic number as a rational, and minimum vertex cutsets. Each search
counts elementary steps and raises :class:`BudgetExceeded` past its budget.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from . import lp
from .errors import BudgetExceeded, DomainError
from .graph import Graph, induced_subgraph

DEFAULT_BUDGET = int(os.environ.get("CHIBOUND_BUDGET", 10**7))


class _Steps:
    __slots__ = ("left", "what", "budget")

    def __init__(self, what: str, budget: int | None):
        self.budget = DEFAULT_BUDGET if budget is None else budget
        self.left = self.budget
        self.what = what

    def tick(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise BudgetExceeded(self.what, self.budget)


def _bits(g: Graph) -> tuple[list[str], list[int]]:
    if g._bits is None:
        order = g.sorted_vertices()
        idx = {v: i for i, v in enumerate(order)}
        masks = [sum(1 << idx[w] for w in g.neighbors(v)) for v in order]
        g._bits = (order, masks)
    return g._bits


def _members(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- cliques ---------------------------------------------------------------

def max_weight_clique(
    g: Graph, weights: Mapping[str, int] | None = None, budget: int | None = None
) -> tuple[int, frozenset[str]]:
    """Maximum-weight clique by branch and bound (unit weights by default)."""
    order, adj = _bits(g)
    n = len(order)
    if n == 0:
        return 0, frozenset()
    w = [1 if weights is None else int(weights[v]) for v in order]
    if any(x < 0 for x in w):
        raise DomainError("clique weights must be non-negative")
    steps = _Steps("clique search", budget)
    best = [0, 0]

    def expand(cur_w: int, cur_mask: int, cand: int) -> None:
        steps.tick()
        if cur_w > best[0]:
            best[0], best[1] = cur_w, cur_mask
        while cand:
            if cur_w + sum(w[i] for i in _members(cand)) <= best[0]:
                return
            low = cand & -cand
            i = low.bit_length() - 1
            cand ^= low
            expand(cur_w + w[i], cur_mask | low, cand & adj[i])

    expand(0, 0, (1 << n) - 1)
    return best[0], frozenset(order[i] for i in _members(best[1]))


def clique_number(g: Graph, budget: int | None = None) -> int:
    return max_weight_clique(g, budget=budget)[0]


def maximum_clique(g: Graph, budget: int | None = None) -> frozenset[str]:
    return max_weight_clique(g, budget=budget)[1]


# -- chromatic number ----------------------------------------------------------

def _dsatur_greedy(adj: list[int]) -> list[int]:
    n = len(adj)
    color = [-1] * n
    for _ in range(n):
        best = None
        for v in range(n):
            if color[v] >= 0:
                continue
            sat = len({color[u] for u in _members(adj[v]) if color[u] >= 0})
            key = (sat, bin(adj[v]).count("1"), -v)
            if best is None or key > best[0]:
                best = (key, v)
        v = best[1]
        taken = {color[u] for u in _members(adj[v]) if color[u] >= 0}
        color[v] = next(c for c in range(n) if c not in taken)
    return color


def _k_coloring(adj: list[int], k: int, steps: _Steps) -> list[int] | None:
    """Exact k-colorability by DSATUR branching.

    A new color may only be the next unused index, which fixes the first
    vertex to color 0 and removes color-permutation symmetry.
    """
    n = len(adj)
    color = [-1] * n
    classes = [0] * k
    degree = [bin(a).count("1") for a in adj]

    def pick(uncolored: int, used: int) -> tuple[int, int]:
        best_v, best_key, best_forb = -1, None, 0
        for v in _members(uncolored):
            forb = 0
            for c in range(used):
                if adj[v] & classes[c]:
                    forb |= 1 << c
            key = (bin(forb).count("1"), degree[v])
            if best_key is None or key > best_key:
                best_v, best_key, best_forb = v, key, forb
        return best_v, best_forb

    def search(uncolored: int, used: int) -> bool:
        steps.tick()
        if not uncolored:
            return True
        v, forb = pick(uncolored, used)
        bit = 1 << v
        for c in range(min(used + 1, k)):
            if forb >> c & 1:
                continue
            color[v] = c
            classes[c] |= bit
            if search(uncolored ^ bit, max(used, c + 1)):
                return True
            classes[c] ^= bit
        color[v] = -1
        return False

    if search((1 << n) - 1, 0):
        return color
    return None


def optimal_coloring(g: Graph, budget: int | None = None) -> dict[str, int]:
    """A proper coloring with exactly chi(g) colors, named ``0..chi-1``."""
    order, adj = _bits(g)
    if not order:
        return {}
    steps = _Steps("chromatic number", budget)
    upper = _dsatur_greedy(adj)
    best = upper
    ub = max(upper) + 1
    lb = max_weight_clique(g, budget=steps.left)[0]
    for k in range(lb, ub):
        found = _k_coloring(adj, k, steps)
        if found is not None:
            best = found
            break
    return {order[i]: c for i, c in enumerate(best)}


def chromatic_number(g: Graph, budget: int | None = None) -> int:
    c = optimal_coloring(g, budget)
    return len(set(c.values()))


# -- stable sets and the fractional chromatic number ------------------------

def maximal_stable_sets(g: Graph, budget: int | None = None) -> list[frozenset[str]]:
    """All inclusion-maximal stable sets (Bron-Kerbosch with pivoting on the complement)."""
    order, adj = _bits(g)
    n = len(order)
    if n == 0:
        return []
    full = (1 << n) - 1
    comp = [full & ~adj[i] & ~(1 << i) for i in range(n)]
    steps = _Steps("stable set enumeration", budget)
    out: list[int] = []

    def bk(r: int, p: int, x: int) -> None:
        steps.tick()
        if not p and not x:
            out.append(r)
            return
        pivot = max(_members(p | x), key=lambda u: bin(p & comp[u]).count("1"))
        for v in _members(p & ~comp[pivot]):
            bit = 1 << v
            bk(r | bit, p & comp[v], x & comp[v])
            p ^= bit
            x |= bit

    bk(0, full, 0)
    sets = [frozenset(order[i] for i in _members(r)) for r in out]
    return sorted(sets, key=lambda s: sorted(s))


@dataclass(frozen=True)
class FractionalColoring:
    """Optimal primal/dual pair of the stable-set covering LP.

    ``weights`` covers every vertex with total weight >= 1; ``clique_weights``
    puts weight on vertices so that every stable set carries at most 1. Equal
    totals prove optimality by weak duality.
    """

    value: Fraction
    weights: dict[frozenset[str], Fraction]
    clique_weights: dict[str, Fraction]


def fractional_coloring(g: Graph, budget: int | None = None) -> FractionalColoring:
    if len(g) == 0:
        raise DomainError("fractional chromatic number of the empty graph is not defined here")
    order = g.sorted_vertices()
    stables = maximal_stable_sets(g, budget)
    # solved through the dual packing LP, whose slack basis is feasible
    A = [[1 if v in s else 0 for v in order] for s in stables]
    sol = lp.maximize([1] * len(order), A, [1] * len(stables))
    weights = {s: lam for s, lam in zip(stables, sol.dual) if lam}
    clique_weights = {v: y for v, y in zip(order, sol.primal) if y}
    return FractionalColoring(sol.value, weights, clique_weights)


def fractional_chromatic_number(g: Graph, budget: int | None = None) -> Fraction:
    return fractional_coloring(g, budget).value


# -- vertex cutsets -------------------------------------------------------------

@dataclass(frozen=True)
class CutsetResult:
    found: bool
    cutset: frozenset[str] = frozenset()
    sides: tuple[frozenset[str], frozenset[str]] | None = None


def _local_connectivity(adj: list[int], s: int, t: int, cap: int) -> int:
    """Max number of internally disjoint s-t paths, stopping at ``cap``.

    Unit-capacity max flow on the split network: vertex v is the arc
    ``2v -> 2v+1``; an edge uv becomes arcs ``2u+1 -> 2v`` and ``2v+1 -> 2u``.
    """
    n = len(adj)
    residual: dict[int, dict[int, int]] = {x: {} for x in range(2 * n)}

    def arc(a: int, b: int, c: int) -> None:
        residual[a][b] = residual[a].get(b, 0) + c
        residual[b].setdefault(a, 0)

    big = n + 1
    for v in range(n):
        arc(2 * v, 2 * v + 1, big if v in (s, t) else 1)
        for u in _members(adj[v]):
            arc(2 * v + 1, 2 * u, big)
    source, sink = 2 * s + 1, 2 * t
    flow = 0
    while flow < cap:
        prev = {source: source}
        queue = deque([source])
        while queue and sink not in prev:
            a = queue.popleft()
            for b, c in residual[a].items():
                if c > 0 and b not in prev:
                    prev[b] = a
                    queue.append(b)
        if sink not in prev:
            break
        b = sink
        while b != source:
            a = prev[b]
            residual[a][b] -= 1
            residual[b][a] += 1
            b = a
        flow += 1
    return flow


def vertex_connectivity(g: Graph, cap: int | None = None) -> int:
    """kappa(g), computed up to ``cap``; ``len(g) - 1`` for complete graphs."""
    order, adj = _bits(g)
    n = len(order)
    best = n - 1 if cap is None else min(n - 1, cap)
    for s, t in combinations(range(n), 2):
        if adj[s] >> t & 1:
            continue
        best = min(best, _local_connectivity(adj, s, t, best))
        if best == 0:
            break
    return best


def min_vertex_cutset(g: Graph, limit: int) -> CutsetResult:
    """Smallest separating set of at most ``limit`` vertices, if any.

    The size comes from max-flow; the witness is the lexicographically least
    separating set of that size (over sorted vertex ids), so results are
    canonical. Complete graphs have no separating set.
    """
    if len(g) < 2:
        raise DomainError("min_vertex_cutset needs at least two vertices")
    if limit < 0:
        raise DomainError("limit must be non-negative")
    if g.is_complete():
        return CutsetResult(False)
    kappa = vertex_connectivity(g, cap=limit + 1)
    if kappa > limit:
        return CutsetResult(False)
    for cut in combinations(g.sorted_vertices(), kappa):
        rest = induced_subgraph(g, g.vertices - set(cut))
        comps = rest.components()
        if len(comps) >= 2:
            first = comps[0]
            return CutsetResult(True, frozenset(cut), (first, rest.vertices - first))
    raise AssertionError("max-flow reported a cutset that enumeration cannot find")
