"""Immutable labelled graphs and the elementary constructions on them.

Vertex ids are strings without whitespace. Composite constructions build
hierarchical ids joined with ``/`` so a vertex of a product or a
substitution still names where it came from (``"u/v"`` is vertex ``v`` of
the copy substituted for ``u``).
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping

from .errors import DomainError, ParseError

Coloring = Mapping[str, int]


def _check_id(v) -> str:
    if not isinstance(v, str) or not v or any(ch.isspace() for ch in v):
        raise DomainError(f"vertex id must be a non-empty string without whitespace: {v!r}")
    return v


class Graph:
    """A finite simple graph. Never mutated after construction."""

    __slots__ = ("_adj", "_bits")

    def __init__(self, vertices: Iterable[str] = (), edges: Iterable[tuple[str, str]] = ()):
        adj: dict[str, set[str]] = {_check_id(v): set() for v in vertices}
        for e in edges:
            u, v = e
            if u not in adj or v not in adj:
                raise DomainError(f"edge {u!r}-{v!r} references a vertex outside the graph")
            if u == v:
                raise DomainError(f"self-loop at {u!r}")
            adj[u].add(v)
            adj[v].add(u)
        self._adj: dict[str, frozenset[str]] = {v: frozenset(ns) for v, ns in adj.items()}
        self._bits = None

    @classmethod
    def _from_adj(cls, adj: dict[str, frozenset[str]]) -> "Graph":
        g = cls.__new__(cls)
        g._adj = adj
        g._bits = None
        return g

    # -- queries -----------------------------------------------------------

    @property
    def vertices(self) -> frozenset[str]:
        return frozenset(self._adj)

    def sorted_vertices(self) -> list[str]:
        return sorted(self._adj)

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __iter__(self):
        return iter(sorted(self._adj))

    def neighbors(self, v: str) -> frozenset[str]:
        try:
            return self._adj[v]
        except KeyError:
            raise DomainError(f"vertex {v!r} not in graph") from None

    def degree(self, v: str) -> int:
        return len(self.neighbors(v))

    def adjacent(self, u: str, v: str) -> bool:
        return v in self._adj.get(u, ())

    def edges(self) -> list[tuple[str, str]]:
        """Edges as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        return sorted((u, v) for u, ns in self._adj.items() for v in ns if u < v)

    @property
    def num_edges(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2

    def is_clique(self, s: Iterable[str]) -> bool:
        s = list(s)
        return all(self.adjacent(u, v) for u, v in combinations(s, 2))

    def is_stable(self, s: Iterable[str]) -> bool:
        s = list(s)
        return not any(self.adjacent(u, v) for u, v in combinations(s, 2))

    def is_complete(self) -> bool:
        n = len(self)
        return all(len(ns) == n - 1 for ns in self._adj.values())

    def isolated_vertices(self) -> list[str]:
        return sorted(v for v, ns in self._adj.items() if not ns)

    def components(self) -> list[frozenset[str]]:
        """Connected components, ordered by their least vertex id."""
        seen: set[str] = set()
        comps = []
        for start in sorted(self._adj):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def _require_subset(self, s: Iterable[str]) -> frozenset[str]:
        s = frozenset(s)
        missing = s - self._adj.keys()
        if missing:
            raise DomainError(f"vertices not in graph: {sorted(missing)}")
        return s

    def delete(self, s: Iterable[str]) -> "Graph":
        """``G \\ S``."""
        s = self._require_subset(s)
        return induced_subgraph(self, self.vertices - s)

    def relabel(self, mapping: Mapping[str, str]) -> "Graph":
        """Rename vertices; ids absent from ``mapping`` keep their name."""
        new = {v: mapping.get(v, v) for v in self._adj}
        if len(set(new.values())) != len(new):
            raise DomainError("relabelling is not injective")
        return Graph(new.values(), ((new[u], new[v]) for u, v in self.edges()))

    # -- value semantics ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash((frozenset(self._adj), frozenset(map(frozenset, self.edges()))))

    def __repr__(self) -> str:
        return f"Graph(n={len(self)}, m={self.num_edges})"


# -- standard families ------------------------------------------------------

def _labels(spec) -> list[str]:
    if isinstance(spec, int):
        return [str(i) for i in range(spec)]
    return [_check_id(v) for v in spec]


def complete_graph(spec) -> Graph:
    vs = _labels(spec)
    return Graph(vs, combinations(vs, 2))


def edgeless_graph(spec) -> Graph:
    return Graph(_labels(spec))


def cycle_graph(spec) -> Graph:
    vs = _labels(spec)
    if len(vs) < 3:
        raise DomainError("a cycle needs at least 3 vertices")
    return Graph(vs, ((vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))))


def path_graph(spec) -> Graph:
    vs = _labels(spec)
    return Graph(vs, zip(vs, vs[1:]))


# -- constructions ------------------------------------------------------------

def induced_subgraph(g: Graph, s: Iterable[str]) -> Graph:
    """``G[S]``: vertex set ``s`` with every edge of ``g`` inside it."""
    s = g._require_subset(s)
    return Graph._from_adj({v: g._adj[v] & s for v in s})


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    clash = g1.vertices & g2.vertices
    if clash:
        raise DomainError(f"disjoint_union: shared vertex ids {sorted(clash)}")
    return Graph._from_adj({**g1._adj, **g2._adj})


def mycielskian(g: Graph) -> Graph:
    """Mycielski's construction.

    Original vertex ``x`` becomes ``v/x``; its shadow ``w/x`` is joined to the
    originals adjacent to ``x``; the apex ``w`` is joined to every shadow.
    """
    if len(g) == 0:
        raise DomainError("mycielskian of the empty graph is undefined")
    orig = {x: f"v/{x}" for x in g}
    shadow = {x: f"w/{x}" for x in g}
    edges = [(orig[u], orig[v]) for u, v in g.edges()]
    for x in g:
        edges.extend((shadow[x], orig[y]) for y in g.neighbors(x))
        edges.append((shadow[x], "w"))
    return Graph([*orig.values(), *shadow.values(), "w"], edges)


def lex_product(f: Graph, h: Graph) -> Graph:
    """Lexicographic product: a copy of ``h`` substituted for every vertex of ``f``.

    ``(u1, v1) ~ (u2, v2)`` iff ``u1 ~ u2`` in ``f``, or ``u1 == u2`` and
    ``v1 ~ v2`` in ``h``. The pair ``(u, v)`` is named ``"u/v"``.
    """
    if len(f) == 0 or len(h) == 0:
        raise DomainError("lex_product needs two non-empty graphs")
    name = {(u, v): f"{u}/{v}" for u in f for v in h}
    edges = [(name[u, a], name[u, b]) for u in f for a, b in h.edges()]
    for u1, u2 in f.edges():
        edges.extend((name[u1, a], name[u2, b]) for a in h for b in h)
    return Graph(name.values(), edges)


def is_homogeneous(g: Graph, s: Iterable[str]) -> bool:
    """True iff no vertex outside ``s`` is mixed on ``s``."""
    s = g._require_subset(s)
    if not s:
        raise DomainError("a homogeneous set must be non-empty")
    for v in g.vertices - s:
        hits = len(g.neighbors(v) & s)
        if 0 < hits < len(s):
            return False
    return True


def is_proper(g: Graph, c: Coloring) -> bool:
    missing = g.vertices - c.keys()
    if missing:
        raise DomainError(f"coloring is not total; uncolored: {sorted(missing)[:5]}")
    return all(c[u] != c[v] for u, v in g.edges())


def colors_used(c: Coloring) -> int:
    return len(set(c.values()))


# -- isomorphism (desk scale; used by tests) ---------------------------------

def find_isomorphism(g: Graph, h: Graph) -> dict[str, str] | None:
    """Exhaustive backtracking search for an isomorphism ``g -> h``.

    Candidates are pruned by degree and by adjacency to the already-mapped
    vertices, which keeps graphs of a dozen or so vertices tractable.
    """
    if len(g) != len(h) or g.num_edges != h.num_edges:
        return None
    if sorted(map(g.degree, g)) != sorted(map(h.degree, h)):
        return None
    order = sorted(g, key=lambda v: (-g.degree(v), v))
    hv = h.sorted_vertices()
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in hv:
            if w in used or h.degree(w) != g.degree(v):
                continue
            if all(g.adjacent(v, x) == h.adjacent(w, mapping[x]) for x in order[:i]):
                mapping[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    return dict(mapping) if extend(0) else None


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None


# -- text formats -------------------------------------------------------------

def to_text(g: Graph) -> str:
    """Serialize as ``p n m`` / ``v id`` / ``e id id`` lines, sorted."""
    lines = [f"p {len(g)} {g.num_edges}"]
    lines += [f"v {v}" for v in g.sorted_vertices()]
    lines += [f"e {u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Graph:
    header = None
    vertices: list[str] = []
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        tag = parts[0]
        if tag == "p" and len(parts) == 3 and header is None:
            try:
                header = (int(parts[1]), int(parts[2]))
            except ValueError:
                raise ParseError(f"line {lineno}: bad counts in {raw!r}") from None
        elif tag == "v" and len(parts) == 2:
            vertices.append(parts[1])
        elif tag == "e" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        else:
            raise ParseError(f"line {lineno}: cannot parse {raw!r}")
    if header is None:
        raise ParseError("missing 'p <n> <m>' header")
    if len(set(vertices)) != len(vertices):
        raise ParseError("duplicate vertex line")
    try:
        g = Graph(vertices, edges)
    except DomainError as exc:
        raise ParseError(str(exc)) from None
    if (len(g), g.num_edges) != header:
        raise ParseError(f"header says {header}, body has ({len(g)}, {g.num_edges})")
    return g


def coloring_to_text(c: Coloring) -> str:
    return "".join(f"{v} {c[v]}\n" for v in sorted(c))


def coloring_from_text(text: str) -> dict[str, int]:
    c: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected '<vertex> <color>', got {raw!r}")
        try:
            color = int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: color must be an integer") from None
        if parts[0] in c:
            raise ParseError(f"line {lineno}: vertex {parts[0]!r} colored twice")
        c[parts[0]] = color
    return c
