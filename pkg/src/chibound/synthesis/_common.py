"""Helpers shared by the coloring algorithms."""

from __future__ import annotations

from typing import Iterator, Mapping

from .. import oracle
from ..bounds import BoundFn, check_certificate, floor_value
from ..certificate import Certificate
from ..errors import CertificationError, DomainError, InvariantViolation, ValidationError
from ..graph import Graph, induced_subgraph, is_proper
from ..optree import (
    CliqueGlue, KGlue, Leaf, OpTree, Substitute, node_kinds, realize, validate,
)


def require_valid(t: OpTree, allowed: set[str], what: str) -> None:
    extra = node_kinds(t) - allowed
    if extra:
        raise DomainError(f"{what} does not accept {', '.join(sorted(extra))} nodes")
    diags = validate(t)
    if not diags.ok:
        raise ValidationError(diags)


def tree_omega(t: OpTree, memo: dict[int, tuple] | None = None) -> int:
    """Clique number of realize(t), computed structurally.

    A substitution's clique number is the max-weight clique of the base with
    the children's clique numbers as weights; a glued graph's is the larger
    side's, since every clique lies inside one operand.
    """
    memo = {} if memo is None else memo
    key = id(t)
    if key in memo:
        return memo[key][1]
    if isinstance(t, Leaf):
        w = oracle.clique_number(t.graph)
    elif isinstance(t, Substitute):
        weights = {b: tree_omega(t.children[b], memo) for b in t.base}
        w = oracle.max_weight_clique(t.base, weights)[0]
    elif isinstance(t, (CliqueGlue, KGlue)):
        w = max(tree_omega(t.left, memo), tree_omega(t.right, memo))
    else:
        raise DomainError(f"not an operation tree: {t!r}")
    memo[key] = (t, w)  # holding t keeps its id from being reused
    return w


def checked_coloring(g: Graph, f: BoundFn, where: str) -> dict[str, int]:
    """Optimal coloring of a base-class graph, refusing one that violates f."""
    c = oracle.optimal_coloring(g)
    chi = len(set(c.values()))
    w = oracle.clique_number(g)
    cap = floor_value(f, w)
    if chi > cap:
        raise CertificationError(
            f"{where}: chromatic number {chi} exceeds floor(f({w})) = {cap}"
        )
    return c


class BaseLog:
    """Substitution bases colored optimally, with any bound violations recorded.

    Only leaves are required to obey the bound. A base that does not is
    noted; if a ledger inequality later breaks, the breach is reported as a
    certification failure blaming those bases rather than as an internal error.
    """

    def __init__(self):
        self.violations: list[str] = []

    def color(self, g: Graph, f: BoundFn, where: str) -> dict[str, int]:
        c = oracle.optimal_coloring(g)
        chi = len(set(c.values()))
        w = oracle.clique_number(g)
        cap = floor_value(f, w)
        if chi > cap:
            self.violations.append(f"{where}: chi {chi} > floor(f({w})) = {cap}")
        return c

    def breach(self, message: str) -> Exception:
        if self.violations:
            return CertificationError(f"{message}; bases above the bound: {'; '.join(self.violations)}")
        return InvariantViolation(message)

    def notes(self) -> dict:
        return {"base_bound_violations": list(self.violations)} if self.violations else {}


def substitution_parts(t: Substitute) -> Iterator[tuple[str, object]]:
    """Split a Substitute node along the components of its base.

    Yields ``("single", b)`` for an isolated base vertex and
    ``("block", Substitute)`` for each component with at least two vertices.
    """
    for comp in t.base.components():
        if len(comp) == 1:
            (b,) = comp
            yield "single", b
        else:
            base = induced_subgraph(t.base, comp)
            yield "block", Substitute(base, {b: t.children[b] for b in comp})


def prefixed(b: str, coloring: Mapping[str, int], offset: int = 0) -> dict[str, int]:
    return {f"{b}/{x}": c + offset for x, c in coloring.items()}


def palette_size(coloring: Mapping[str, int]) -> int:
    return max(coloring.values(), default=-1) + 1


def compact(coloring: Mapping[str, int]) -> dict[str, int]:
    """Rename colors to 0, 1, ... in order of first use over sorted vertices."""
    names: dict[int, int] = {}
    out = {}
    for v in sorted(coloring):
        out[v] = names.setdefault(coloring[v], len(names))
    return out


def certify(
    t: OpTree, coloring: Mapping[str, int], bound: BoundFn, omega: int, method: str,
    trace=None, notes=None,
) -> tuple[dict[str, int], Certificate]:
    g = realize(t)
    coloring = compact(coloring)
    if set(coloring) != g.vertices or not is_proper(g, coloring):
        raise InvariantViolation(f"{method} produced an improper coloring")
    cert = Certificate(
        bound=bound, omega=omega, colors_used=len(set(coloring.values())),
        method=method, trace=trace, notes=dict(notes or {}),
    )
    check_certificate(cert)
    return coloring, cert
