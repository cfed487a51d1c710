"""Polynomial bound for the substitution closure: the alpha-bucket coloring.

For a connected substitution with clique number ``omega >= 4`` and children
of clique numbers ``omega_i``, fix the smallest ``m`` with
``alpha = (omega/2)**(1/m)`` in ``[5/4, 3/2]``. Base vertices fall into
buckets ``V_0`` (``omega_i > omega/2``), ``V_j`` for ``1 <= j <= m``
(``omega/(2 alpha^j) < omega_i <= omega/(2 alpha^(j-1))``) and ``V_(m+1)``
(``omega_i = 1``). Buckets 1..m+1 get disjoint palettes; the blocks of the
stable set ``V_0`` are then colored greedily around their neighborhoods.

``alpha`` is irrational in general and never materializes: every test is
rewritten with ``alpha**m = omega/2`` into an integer comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .. import oracle
from ..bounds import Polynomial, PolyStar
from ..certificate import Certificate
from ..errors import DomainError, InvariantViolation
from ..graph import induced_subgraph
from ..optree import Leaf, OpTree, Substitute, _depth
from ._common import (
    BaseLog, certify, checked_coloring, compact, palette_size, prefixed, require_valid,
    substitution_parts, tree_omega,
)
from .depth import depth_coloring


def choose_m(omega: int) -> int:
    """Smallest m >= 1 with (5/4)**m <= omega/2 <= (3/2)**m."""
    if omega < 4:
        raise DomainError("bucket scheme needs omega >= 4")
    for m in range(1, 8 * omega.bit_length() + 8):
        if 5**m * 2 <= 4**m * omega <= 6**m * 2:
            return m
    raise InvariantViolation(f"no admissible m for omega = {omega}")


def bucket_of(omega_i: int, omega: int, m: int) -> int:
    if 2 * omega_i > omega:
        return 0
    if omega_i == 1:
        return m + 1
    for j in range(1, m + 1):
        above = omega**m * 2**j < (2 * omega_i) ** m * omega**j
        below = omega ** (j - 1) * (2 * omega_i) ** m <= omega**m * 2 ** (j - 1)
        if above and below:
            return j
    raise InvariantViolation(f"omega_i = {omega_i} fits no bucket for omega = {omega}, m = {m}")


def s_index(omega_i: int, omega: int, m: int) -> int:
    """Least s >= 1 with omega / (2 alpha^s) < omega - omega_i."""
    if not 0 < omega_i < omega:
        raise DomainError("s_i needs 0 < omega_i < omega")
    s = 1
    while not omega**m * 2**s < (2 * (omega - omega_i)) ** m * omega**s:
        s += 1
    return s


def bucket_clique_ok(c: int, omega: int, m: int, j: int) -> bool:
    """``c <= 2 alpha^j`` in exact form."""
    return c**m * 2**j <= 2**m * omega**j


def bucket_cap_ok(colors: int, A: int, omega: int, m: int, j: int) -> bool:
    """``colors <= f(2 alpha^j) g(omega / (2 alpha^(j-1)))`` raised to the m-th power."""
    E = 3 * A + 11
    half = Fraction(omega, 2)
    rhs = (
        Fraction(2) ** (A * m) * half ** (j * A)
        * Fraction(omega) ** (E * m) / Fraction(2) ** (E * m)
        / half ** ((j - 1) * E)
    )
    return colors**m <= rhs


@dataclass
class PolyNode:
    path: str
    omega: int
    method: str
    depth: int
    m: int | None = None
    buckets: dict[str, int] = field(default_factory=dict)
    bucket_palettes: dict[int, int] = field(default_factory=dict)
    bucket_cliques: dict[int, int] = field(default_factory=dict)
    blocks: list[dict] = field(default_factory=list)
    total: int = 0
    g: int = 0

    @property
    def alpha(self) -> tuple[int, int] | None:
        """alpha encoded as (omega, m), meaning (omega/2)**(1/m)."""
        return None if self.m is None else (self.omega, self.m)

    def to_json(self) -> dict:
        out = {"path": self.path, "omega": self.omega, "method": self.method, "depth": self.depth}
        if self.m is not None:
            out.update(
                m=self.m, alpha=list(self.alpha), buckets=self.buckets,
                bucket_palettes={str(j): n for j, n in self.bucket_palettes.items()},
                bucket_cliques={str(j): n for j, n in self.bucket_cliques.items()},
                blocks=[{**b, "p": str(b["p"])} for b in self.blocks],
                total=self.total, g=self.g,
            )
        return out


@dataclass
class PolyTrace:
    A: int
    nodes: list[PolyNode] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"A": self.A, "nodes": [n.to_json() for n in self.nodes]}


class _Poly:
    def __init__(self, A: int):
        self.A = A
        self.E = 3 * A + 11
        self.f = Polynomial.monomial(A)
        self.memo: dict[int, tuple] = {}
        self.trace = PolyTrace(A)
        self.log = BaseLog()

    def color(self, t: OpTree, path: str) -> dict[str, int]:
        if isinstance(t, Leaf):
            return checked_coloring(t.graph, self.f, f"leaf at {path}") if len(t.graph) else {}
        out: dict[str, int] = {}
        for kind, part in substitution_parts(t):
            if kind == "single":
                sub = self.color(t.children[part], f"{path}.children[{part}]")
                out.update(prefixed(part, sub))
            else:
                out.update(self.block(part, path))
        return compact(out)

    def block(self, t: Substitute, path: str) -> dict[str, int]:
        """Connected substitution: depth fallback or the bucket scheme."""
        omega = tree_omega(t, self.memo)
        d = _depth(t)
        if d <= 2:
            self.trace.nodes.append(PolyNode(path, omega, "depth", d))
            return depth_coloring(t, omega**self.A, self.f, self.log, path)
        if omega < 4:
            raise InvariantViolation(f"{path}: depth {d} with omega {omega} < 4")
        A, E, g = self.A, self.E, omega**self.E
        m = choose_m(omega)
        node = PolyNode(path, omega, "buckets", d, m=m, g=g)
        wi = {b: tree_omega(t.children[b], self.memo) for b in t.base}
        node.buckets = {b: bucket_of(wi[b], omega, m) for b in t.base.sorted_vertices()}

        child = {}
        for b in t.base:
            child[b] = self.color(t.children[b], f"{path}.children[{b}]")
            if palette_size(child[b]) > wi[b] ** E:
                raise self.log.breach(f"{path}: child {b} exceeds g(omega_i)")

        out: dict[str, int] = {}
        offset = 0
        for j in range(1, m + 2):
            members = [b for b, k in node.buckets.items() if k == j]
            if not members:
                continue
            fj = induced_subgraph(t.base, members)
            outer = self.log.color(fj, self.f, f"base bucket {j} at {path}")
            width = max(palette_size(child[b]) for b in members)
            size = palette_size(outer) * width
            if j <= m:
                c = oracle.clique_number(fj)
                node.bucket_cliques[j] = c
                if not bucket_clique_ok(c, omega, m, j):
                    raise InvariantViolation(f"{path}: clique number of F_{j} exceeds 2 alpha^{j}")
                if not bucket_cap_ok(size, A, omega, m, j):
                    raise self.log.breach(f"{path}: bucket {j} palette {size} exceeds its bucket cap")
            elif size > omega**A:
                raise self.log.breach(f"{path}: bucket {m + 1} palette {size} exceeds f(omega)")
            for b in members:
                out.update(prefixed(b, child[b], offset + outer[b] * width))
            node.bucket_palettes[j] = size
            offset += size
        node.total = offset
        if offset > g:
            raise self.log.breach(f"{path}: disjoint palettes use {offset} > g(omega) = {g}")

        top = [b for b, k in node.buckets.items() if k == 0]
        for b in sorted(top, key=lambda v: (-wi[v], v)):
            s = s_index(wi[b], omega, m)
            near = {node.buckets[u] for u in t.base.neighbors(b)}
            if not near <= set(range(s, m + 2)):
                raise InvariantViolation(f"{path}: neighbor of V_0 block {b} below bucket s_i = {s}")
            # colors on the bucket palettes that can touch this block
            P = sum(n for j, n in node.bucket_palettes.items() if j >= s) + palette_size(child[b])
            if P > g:
                raise self.log.breach(f"{path}: block {b} ledger P = {P} > g(omega) = {g}")
            forbidden = {
                out[f"{u}/{x}"] for u in t.base.neighbors(b) for x in child[u]
            }
            used = set(out.values())
            free = sorted(used - forbidden)
            fresh = max(used, default=-1) + 1
            needed = palette_size(child[b])
            while len(free) < needed:
                free.append(fresh)
                fresh += 1
            out.update({f"{b}/{x}": free[c] for x, c in child[b].items()})
            node.blocks.append({
                "vertex": b, "omega_i": wi[b], "s_i": s,
                "p": 1 - Fraction(wi[b], omega), "P": P,
            })
        self.trace.nodes.append(node)
        return out


def color_poly(t: OpTree, A: int) -> tuple[dict[str, int], Certificate]:
    """Proper coloring with at most omega**(3A+11) colors when leaves obey x**A."""
    if not isinstance(A, int) or A < 1:
        raise DomainError("A must be a positive integer")
    require_valid(t, {"Leaf", "Substitute"}, "color_poly")
    run = _Poly(A)
    coloring = run.color(t, "root")
    omega = tree_omega(t, run.memo)
    return certify(
        t, coloring, PolyStar(A), omega, "poly", trace=run.trace, notes=run.log.notes()
    )
