"""Construction trees: substitution and the two gluing operations.

A tree's leaves are base-class graphs; internal nodes substitute graphs
for every vertex of a base graph, glue two graphs along a shared clique, or
glue them along at most ``k`` shared vertices. Which node kinds a tree uses
determines the closure its realization lies in::

    Leaf + Substitute             substitution closure
    Leaf + KGlue                  closure under gluing along <= k vertices
    Leaf + Substitute + CliqueGlue   substitution and clique gluing
    Leaf + CliqueGlue + KGlue     both gluing operations

Gluing identifies vertices by id, so a shared vertex carries the same id in
both operands. Substitution puts each child in a fresh namespace: vertex
``x`` of the child for base vertex ``b`` is realized as ``"b/x"``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

from . import oracle
from .errors import DomainError, InvariantViolation, ParseError, ValidationError
from .graph import Graph, from_text, induced_subgraph


@dataclass(frozen=True)
class Leaf:
    graph: Graph
    class_tag: str = "base"


@dataclass(frozen=True)
class Substitute:
    base: Graph
    children: Mapping[str, "OpTree"]


@dataclass(frozen=True)
class CliqueGlue:
    left: "OpTree"
    right: "OpTree"
    shared: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "shared", frozenset(self.shared))


@dataclass(frozen=True)
class KGlue:
    k: int
    left: "OpTree"
    right: "OpTree"
    shared: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "shared", frozenset(self.shared))


OpTree = Union[Leaf, Substitute, CliqueGlue, KGlue]


@dataclass(frozen=True)
class Issue:
    path: str
    invariant: str
    message: str

    def __str__(self):
        return f"{self.path}: {self.message} [{self.invariant}]"


@dataclass
class Diagnostics:
    issues: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def __bool__(self):
        return self.ok

    def __iter__(self):
        return iter(self.issues)


# -- realization ---------------------------------------------------------------

def substitute(base: Graph, children: Mapping[str, Graph]) -> Graph:
    """Substitute ``children[b]`` for every vertex ``b`` of ``base``."""
    if set(children) != set(base.vertices):
        raise DomainError("children must be indexed by exactly the base vertices")
    names = {b: [f"{b}/{x}" for x in children[b].sorted_vertices()] for b in base}
    vertices = [v for b in base for v in names[b]]
    edges = [(f"{b}/{u}", f"{b}/{v}") for b in base for u, v in children[b].edges()]
    for b1, b2 in base.edges():
        edges.extend((u, v) for u in names[b1] for v in names[b2])
    return Graph(vertices, edges)


def glue(left: Graph, right: Graph) -> Graph:
    """Union of two graphs that agree on their common vertices; no cross edges."""
    return Graph(left.vertices | right.vertices, left.edges() + right.edges())


def _walk(t: OpTree, path: str, issues: list[Issue]) -> Graph | None:
    def bad(invariant: str, message: str) -> None:
        issues.append(Issue(path, invariant, message))

    if isinstance(t, Leaf):
        if not isinstance(t.graph, Graph):
            bad("leaf-graph", "leaf does not hold a graph")
            return None
        return t.graph

    if isinstance(t, Substitute):
        if len(t.base) == 0:
            bad("base-nonempty", "substitution base is empty")
            return None
        if set(t.children) != set(t.base.vertices):
            bad("children-match-base", "children are not indexed by exactly the base vertices")
            return None
        graphs = {}
        for b in t.base:
            g = _walk(t.children[b], f"{path}.children[{b}]", issues)
            if g is None:
                return None
            if len(g) == 0:
                bad("child-nonempty", f"child for base vertex {b!r} is empty")
                return None
            graphs[b] = g
        return substitute(t.base, graphs)

    if isinstance(t, (CliqueGlue, KGlue)):
        left = _walk(t.left, f"{path}.left", issues)
        right = _walk(t.right, f"{path}.right", issues)
        ok = True
        if isinstance(t, KGlue):
            if not isinstance(t.k, int) or t.k < 1:
                bad("k-positive", "k must be a positive integer")
                ok = False
            elif len(t.shared) > t.k:
                bad("shared-exceeds-k", "|shared| exceeds k")
                ok = False
        if left is None or right is None:
            return None
        lv, rv = left.vertices, right.vertices
        if not lv or not rv:
            bad("glue-side-nonempty", "glue operands must be non-empty")
            return None
        if lv <= rv or rv <= lv:
            bad("glue-incomparable", "glue operands have comparable vertex sets")
            ok = False
        if lv & rv != t.shared:
            bad("shared-is-intersection", "shared set differs from the operands' common vertices")
            return None
        if induced_subgraph(left, t.shared) != induced_subgraph(right, t.shared):
            bad("shared-agreement", "operands induce different graphs on the shared set")
            return None
        if isinstance(t, CliqueGlue) and not left.is_clique(t.shared):
            bad("shared-clique", "shared not a clique")
            ok = False
        return glue(left, right) if ok else None

    bad("node-kind", f"unknown node type {type(t).__name__}")
    return None


def validate(t: OpTree) -> Diagnostics:
    """Check every structural invariant bottom-up; empty diagnostics iff legal."""
    issues: list[Issue] = []
    _walk(t, "root", issues)
    return Diagnostics(issues)


def realize(t: OpTree) -> Graph:
    issues: list[Issue] = []
    g = _walk(t, "root", issues)
    if issues or g is None:
        raise ValidationError(Diagnostics(issues))
    return g


# -- structure queries -----------------------------------------------------------

def iter_nodes(t: OpTree) -> Iterator[OpTree]:
    yield t
    if isinstance(t, Substitute):
        for b in sorted(t.children):
            yield from iter_nodes(t.children[b])
    elif isinstance(t, (CliqueGlue, KGlue)):
        yield from iter_nodes(t.left)
        yield from iter_nodes(t.right)


def node_kinds(t: OpTree) -> set[str]:
    return {type(n).__name__ for n in iter_nodes(t)}


def max_k(t: OpTree) -> int:
    return max((n.k for n in iter_nodes(t) if isinstance(n, KGlue)), default=0)


def closure_name(t: OpTree) -> str:
    kinds = node_kinds(t) - {"Leaf"}
    names = {
        frozenset(): "base",
        frozenset({"Substitute"}): "G*",
        frozenset({"KGlue"}): "G^k",
        frozenset({"CliqueGlue"}): "G^cl",
        frozenset({"Substitute", "CliqueGlue"}): "G^#",
        frozenset({"CliqueGlue", "KGlue"}): "G^k_cl",
    }
    return names.get(frozenset(kinds), "unsupported")


def substitution_depth(t: OpTree) -> int:
    """Substitution depth of this representation (not minimized over representations).

    -1 for the empty graph, 0 for a non-empty leaf; a Substitute node takes
    the max over its children of the child's depth, plus one unless the
    child sits at an isolated base vertex. Nested disjoint unions therefore
    never add depth.
    """
    if not node_kinds(t) <= {"Leaf", "Substitute"}:
        raise DomainError("substitution depth is defined for Leaf/Substitute trees only")
    diags = validate(t)
    if not diags.ok:
        raise ValidationError(diags)
    return _depth(t)


def _depth(t: OpTree) -> int:
    if isinstance(t, Leaf):
        return 0 if len(t.graph) else -1
    return max(
        _depth(t.children[b]) + (0 if t.base.degree(b) == 0 else 1) for b in t.base
    )


# -- glue-order normalization -----------------------------------------------------

def _vertex_set(t: OpTree) -> frozenset[str]:
    if isinstance(t, Leaf):
        return t.graph.vertices
    if isinstance(t, (CliqueGlue, KGlue)):
        return _vertex_set(t.left) | _vertex_set(t.right)
    raise DomainError("glue-order normalization accepts Leaf/CliqueGlue/KGlue trees only")


def _push_clique_glue(a: OpTree, b: OpTree, clique: frozenset[str]) -> OpTree:
    """A normalized tree for gluing normalized ``a`` and ``b`` along ``clique``."""
    if not isinstance(a, KGlue) and isinstance(b, KGlue):
        a, b = b, a
        swapped = True
    else:
        swapped = False
    if not isinstance(a, KGlue):
        return CliqueGlue(b, a, clique) if swapped else CliqueGlue(a, b, clique)

    # a clique of a glued graph lies inside one operand
    in_left = clique <= _vertex_set(a.left)
    in_right = clique <= _vertex_set(a.right)
    if not (in_left or in_right):
        raise InvariantViolation("shared clique straddles a small-cutset glue")
    inner, other = (a.left, a.right) if in_left else (a.right, a.left)
    if clique == _vertex_set(inner):
        merged = b
    else:
        merged = _push_clique_glue(inner, b, clique)
    if in_left:
        return KGlue(a.k, merged, other, a.shared)
    return KGlue(a.k, other, merged, a.shared)


def _normalize(t: OpTree) -> OpTree:
    if isinstance(t, Leaf):
        return t
    if isinstance(t, KGlue):
        return KGlue(t.k, _normalize(t.left), _normalize(t.right), t.shared)
    if isinstance(t, CliqueGlue):
        return _push_clique_glue(_normalize(t.left), _normalize(t.right), t.shared)
    raise DomainError("glue-order normalization accepts Leaf/CliqueGlue/KGlue trees only")


def normalize_glue_order(t: OpTree, closed_tags: Iterable[str] | None = None) -> OpTree:
    """Rewrite so that no CliqueGlue node sits above a KGlue node.

    The realized graph is unchanged vertex for vertex. Clique glues are
    pushed into the small-cutset operand that contains the shared clique;
    when that operand is exactly the clique, the other graph replaces it.
    ``closed_tags``, if given, lists the leaf classes known to be closed
    under clique gluing; a clique-glued leaf of any other class is refused.
    """
    diags = validate(t)
    if not diags.ok:
        raise ValidationError(diags)
    if closed_tags is not None:
        allowed = set(closed_tags)
        for node in iter_nodes(t):
            if isinstance(node, CliqueGlue):
                for leaf in iter_nodes(node):
                    if isinstance(leaf, Leaf) and leaf.class_tag not in allowed:
                        raise DomainError(
                            f"leaf class {leaf.class_tag!r} is not declared closed under clique gluing"
                        )
    return _normalize(t)


def glue_order_ok(t: OpTree) -> bool:
    """True iff no CliqueGlue node has a KGlue node below it."""
    for node in iter_nodes(t):
        if isinstance(node, CliqueGlue) and "KGlue" in node_kinds(node):
            return False
    return True


# -- small-cutset decomposition -------------------------------------------------------

def decompose_small_cutsets(g: Graph, k: int, class_tag: str = "base") -> OpTree:
    """Split ``g`` along minimum cutsets of size <= k until every piece is
    complete or (k+1)-connected; the KGlue tree realizes ``g`` exactly.

    Each split keeps the component with the least vertex id on the left.
    """
    if len(g) == 0:
        raise DomainError("cannot decompose the empty graph")
    if k < 1:
        raise DomainError("k must be a positive integer")

    def split(h: Graph) -> OpTree:
        if len(h) < 2 or h.is_complete():
            return Leaf(h, class_tag)
        cut = oracle.min_vertex_cutset(h, k)
        if not cut.found:
            return Leaf(h, class_tag)
        a, rest = cut.sides
        left = induced_subgraph(h, a | cut.cutset)
        right = induced_subgraph(h, rest | cut.cutset)
        return KGlue(k, split(left), split(right), cut.cutset)

    return split(g)


# -- JSON format ----------------------------------------------------------------------

def _graph_to_json(g: Graph) -> dict:
    return {"vertices": g.sorted_vertices(), "edges": [list(e) for e in g.edges()]}


def _graph_from_json(obj, where: str) -> Graph:
    if isinstance(obj, str):
        return from_text(obj)
    if not isinstance(obj, dict) or set(obj) - {"vertices", "edges"} or "vertices" not in obj:
        raise ParseError(f"{where}: inline graph needs 'vertices' and optional 'edges'")
    edges = obj.get("edges", [])
    if not all(isinstance(e, list) and len(e) == 2 for e in edges):
        raise ParseError(f"{where}: edges must be [u, v] pairs")
    if len(set(obj["vertices"])) != len(obj["vertices"]):
        raise ParseError(f"{where}: duplicate vertex")
    try:
        return Graph(obj["vertices"], [tuple(e) for e in edges])
    except DomainError as exc:
        raise ParseError(f"{where}: {exc}") from None


def tree_to_json(t: OpTree):
    if isinstance(t, Leaf):
        return {"leaf": {"graph": _graph_to_json(t.graph), "class": t.class_tag}}
    if isinstance(t, Substitute):
        return {"substitute": {
            "base": _graph_to_json(t.base),
            "children": {b: tree_to_json(c) for b, c in t.children.items()},
        }}
    if isinstance(t, CliqueGlue):
        return {"clique_glue": {
            "left": tree_to_json(t.left), "right": tree_to_json(t.right),
            "shared": sorted(t.shared),
        }}
    if isinstance(t, KGlue):
        return {"k_glue": {
            "k": t.k, "left": tree_to_json(t.left), "right": tree_to_json(t.right),
            "shared": sorted(t.shared),
        }}
    raise DomainError(f"not an operation tree: {t!r}")


def _fields(obj, kind: str, required: set[str], optional: set[str], where: str) -> dict:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: {kind} body must be an object")
    unknown = set(obj) - required - optional
    missing = required - set(obj)
    if unknown:
        raise ParseError(f"{where}: unknown key(s) {sorted(unknown)} in {kind}")
    if missing:
        raise ParseError(f"{where}: missing key(s) {sorted(missing)} in {kind}")
    return obj


def tree_from_json(obj, where: str = "root") -> OpTree:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ParseError(f"{where}: a node is an object with exactly one key")
    (kind, body), = obj.items()
    if kind == "leaf":
        body = _fields(body, kind, {"graph"}, {"class"}, where)
        tag = body.get("class", "base")
        if not isinstance(tag, str):
            raise ParseError(f"{where}: class tag must be a string")
        return Leaf(_graph_from_json(body["graph"], where), tag)
    if kind == "substitute":
        body = _fields(body, kind, {"base", "children"}, set(), where)
        if not isinstance(body["children"], dict):
            raise ParseError(f"{where}: children must be an object")
        children = {
            b: tree_from_json(c, f"{where}.children[{b}]") for b, c in body["children"].items()
        }
        return Substitute(_graph_from_json(body["base"], where), children)
    if kind in ("clique_glue", "k_glue"):
        req = {"left", "right", "shared"} | ({"k"} if kind == "k_glue" else set())
        body = _fields(body, kind, req, set(), where)
        shared = body["shared"]
        if not isinstance(shared, list) or not all(isinstance(v, str) for v in shared):
            raise ParseError(f"{where}: shared must be a list of vertex ids")
        left = tree_from_json(body["left"], f"{where}.left")
        right = tree_from_json(body["right"], f"{where}.right")
        if kind == "clique_glue":
            return CliqueGlue(left, right, frozenset(shared))
        if not isinstance(body["k"], int) or isinstance(body["k"], bool):
            raise ParseError(f"{where}: k must be an integer")
        return KGlue(body["k"], left, right, frozenset(shared))
    raise ParseError(f"{where}: unknown node kind {kind!r}")


def dumps(t: OpTree) -> str:
    return json.dumps(tree_to_json(t), sort_keys=True, indent=2) + "\n"


def loads(text: str) -> OpTree:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"tree file is not JSON: {exc}") from None
    return tree_from_json(obj)
