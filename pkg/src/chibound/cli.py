"""Command-line interface.

Exit codes: 0 pass, 1 certification failure, 2 bad input, 3 step budget
exhausted, 4 verdict undecided at the highest precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds, oracle, optree
from .bounds import KGlueShift, Polynomial, PolyStar, SupermultStar
from .certificate import Certificate, Verdict
from .errors import BudgetExceeded, CertificationError, ChiboundError, DomainError
from .generators import (
    GenConfig, KINDS, alternate_o1_o2, lex_power, mycielski_tower, random_optree,
)
from .graph import coloring_from_text, coloring_to_text, from_text, is_proper, to_text
from .synthesis import (
    color_by_depth, color_kglue, color_poly, color_supermult, reduce_to_base,
)

EXIT = {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.INCONCLUSIVE: 4}


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _tree(path: str) -> optree.OpTree:
    return optree.loads(_read(path))


# -- subcommands --------------------------------------------------------------

def cmd_realize(a) -> int:
    _write(a.output, to_text(optree.realize(_tree(a.tree))))
    return 0


def cmd_validate(a) -> int:
    diags = optree.validate(_tree(a.tree))
    for issue in diags:
        print(issue)
    if diags.ok:
        print("valid")
        return 0
    return 2


def cmd_depth(a) -> int:
    print(optree.substitution_depth(_tree(a.tree)))
    return 0


def _recheck(cert: Certificate, bits: int) -> None:
    """Decide the verdict with interval precision capped at ``bits``."""
    bounds.check_certificate(cert, bits=min(bits, bounds.DEFAULT_PRECISION), max_bits=bits)


def _poly_degree(f: bounds.BoundFn) -> int:
    if isinstance(f, PolyStar):
        return f.A
    if isinstance(f, Polynomial) and f == Polynomial.monomial(f.degree) and f.degree >= 1:
        return f.degree
    raise DomainError("poly needs a bound of the form x^A or polystar(A)")


def cmd_color(a) -> int:
    t = _tree(a.tree)
    f = bounds.parse(a.bound)
    if a.method == "depth":
        coloring, cert = color_by_depth(t, f)
    elif a.method == "poly":
        coloring, cert = color_poly(t, _poly_degree(f))
    elif a.method == "supermult":
        coloring, cert = color_supermult(t, f.inner if isinstance(f, SupermultStar) else f)
    else:
        k = a.k
        if isinstance(f, KGlueShift):
            if k is not None and k != f.k:
                raise DomainError(f"--k {k} disagrees with the bound's k = {f.k}")
            f, k = f.inner, f.k
        coloring, cert = color_kglue(t, f, k=k)
    _recheck(cert, a.precision_bits)
    _write(a.output, coloring_to_text(coloring))
    if a.cert:
        Path(a.cert).write_text(cert.dumps())
    print(f"{cert.method}: {cert.colors_used} colors, bound {cert.bound} at omega {cert.omega}: "
          f"{cert.verdict.value}", file=sys.stderr)
    return EXIT[cert.verdict]


def cmd_verify(a) -> int:
    g = from_text(_read(a.graph))
    coloring = coloring_from_text(_read(a.coloring))
    if set(coloring) != g.vertices:
        raise DomainError("coloring does not cover exactly the graph's vertices")
    if not is_proper(g, coloring):
        print("fail: coloring is not proper")
        return 1
    cert = Certificate(bounds.parse(a.bound), oracle.clique_number(g, a.budget),
                       len(set(coloring.values())), method="verify")
    _recheck(cert, a.precision_bits)
    print(cert.verdict.value)
    return EXIT[cert.verdict]


def cmd_oracle(a) -> int:
    g = from_text(_read(a.graph))
    if a.omega:
        print(oracle.clique_number(g, a.budget))
    elif a.chi:
        print(oracle.chromatic_number(g, a.budget))
    elif a.chif:
        print(oracle.fractional_chromatic_number(g, a.budget))
    else:
        res = oracle.min_vertex_cutset(g, a.cutset)
        print(" ".join(sorted(res.cutset)) if res.found else "none")
    return 0


def _mix(text: str) -> dict[str, int]:
    out = {}
    for part in filter(None, text.split(",")):
        name, _, w = part.partition("=")
        if name not in KINDS or not w.isdigit():
            raise DomainError(f"bad mix entry {part!r}; expected kind=weight with kind in {KINDS}")
        out[name] = int(w)
    return out


def cmd_gen(a) -> int:
    if a.family == "mycielski":
        _write(a.output, to_text(mycielski_tower(a.t)))
    elif a.family == "alt-o1o2":
        _write(a.output, to_text(alternate_o1_o2(a.t)))
    elif a.family == "lexpow":
        _write(a.output, to_text(lex_power(from_text(_read(a.graph)), a.i)))
    else:
        cfg = GenConfig(
            seed=a.seed, max_vertices=a.max_vertices, max_depth=a.max_depth,
            weights=_mix(a.mix), leaf_pool=tuple(a.leaf_pool.split(",")),
            base_pool=tuple(a.base_pool.split(",")), k=a.k,
        )
        _write(a.output, optree.dumps(random_optree(cfg)))
    return 0


def cmd_normalize(a) -> int:
    _write(a.output, optree.dumps(optree.normalize_glue_order(_tree(a.tree))))
    return 0


def cmd_reduce(a) -> int:
    witness, _ = reduce_to_base(_tree(a.tree))
    _write(a.output, to_text(witness))
    return 0


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chibound", description=__doc__.splitlines()[0])
    p.add_argument("--precision-bits", type=int, default=bounds.MAX_PRECISION,
                   help="highest interval precision tried before a verdict is inconclusive")
    p.add_argument("--budget", type=int, default=None,
                   help="step budget for exact searches (default $CHIBOUND_BUDGET or 10^7)")
    sub = p.add_subparsers(dest="command", required=True)

    def tree_cmd(name, fn, out=False, help=""):
        s = sub.add_parser(name, help=help)
        s.add_argument("tree")
        if out:
            s.add_argument("-o", "--output")
        s.set_defaults(fn=fn)
        return s

    tree_cmd("realize", cmd_realize, out=True, help="write the graph a tree builds")
    tree_cmd("validate", cmd_validate, help="check a tree's structural invariants")
    tree_cmd("depth", cmd_depth, help="substitution depth of a Leaf/Substitute tree")
    tree_cmd("normalize", cmd_normalize, out=True, help="push clique glues below small-cutset glues")
    tree_cmd("reduce", cmd_reduce, out=True, help="substitution-only witness with equal chi")

    s = tree_cmd("color", cmd_color, out=True, help="synthesize and certify a coloring")
    s.add_argument("--method", choices=["depth", "poly", "supermult", "kglue"], required=True)
    s.add_argument("--bound", required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--cert")

    s = sub.add_parser("verify", help="check a coloring against a bound")
    s.add_argument("graph")
    s.add_argument("coloring")
    s.add_argument("--bound", required=True)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("oracle", help="exact invariants of a graph")
    s.add_argument("graph")
    which = s.add_mutually_exclusive_group(required=True)
    which.add_argument("--omega", action="store_true")
    which.add_argument("--chi", action="store_true")
    which.add_argument("--chif", action="store_true")
    which.add_argument("--cutset", type=int, metavar="K")
    s.set_defaults(fn=cmd_oracle)

    s = sub.add_parser("gen", help="example families and random trees")
    fam = s.add_subparsers(dest="family", required=True)
    for name in ("mycielski", "alt-o1o2"):
        f = fam.add_parser(name)
        f.add_argument("t", type=int)
        f.add_argument("-o", "--output")
    f = fam.add_parser("lexpow")
    f.add_argument("graph")
    f.add_argument("i", type=int)
    f.add_argument("-o", "--output")
    f = fam.add_parser("tree")
    f.add_argument("--seed", type=int, required=True)
    f.add_argument("--max-vertices", type=int, default=20)
    f.add_argument("--max-depth", type=int, default=3)
    f.add_argument("--mix", default="leaf=1,substitute=2", help="e.g. leaf=1,k_glue=2")
    f.add_argument("--leaf-pool", default="K1,K2,K3,E2,P3,C5")
    f.add_argument("--base-pool", default="K2,E2,P3")
    f.add_argument("--k", type=int, default=1)
    f.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision_bits < 1 or (args.budget is not None and args.budget < 1):
        parser.error("--precision-bits and --budget must be positive")
    saved = oracle.DEFAULT_BUDGET
    if args.budget is not None:
        oracle.DEFAULT_BUDGET = args.budget
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return 1
    except (DomainError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ChiboundError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    finally:
        oracle.DEFAULT_BUDGET = saved


if __name__ == "__main__":
    sys.exit(main())
