import math
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from chibound import oracle
from chibound.bounds import Exponential, Polynomial, parse
from chibound.certificate import Verdict
from chibound.errors import CertificationError, DomainError
from chibound.generators import GenConfig, mycielski_tower, random_optree
from chibound.graph import (
    Graph, complete_graph, cycle_graph, edgeless_graph, induced_subgraph, is_proper,
)
from chibound.optree import (
    CliqueGlue, KGlue, Leaf, Substitute, decompose_small_cutsets, iter_nodes, realize,
    substitution_depth,
)
from chibound.synthesis import (
    ColoringConstraint, bucket_of, choose_m, color_by_depth, color_clique_glue, color_kglue,
    color_poly, color_supermult, merge_on_clique, reduce_to_base, reduce_tree, s_index,
)
from chibound.synthesis.poly import bucket_cap_ok, bucket_clique_ok

X = Polynomial.monomial(1)
C5 = cycle_graph(["v1", "v2", "v3", "v4", "v5"])


def c5_of_k2():
    return Substitute(C5, {v: Leaf(complete_graph("ab")) for v in C5})


def n_colors(c):
    return len(set(c.values()))


def bowtie_tree(k=1):
    return KGlue(k, Leaf(complete_graph("abx")), Leaf(complete_graph("xcd")), frozenset("x"))


# -- depth ---------------------------------------------------------------------------

def test_depth_leaf():
    c, cert = color_by_depth(Leaf(complete_graph(3)), X)
    assert n_colors(c) == 3 and cert.verdict is Verdict.PASS
    assert cert.bound(cert.omega).lo == 3


def test_depth_c5_of_k2():
    t = c5_of_k2()
    c, cert = color_by_depth(t, parse("x+3"))
    g = realize(t)
    assert is_proper(g, c) and n_colors(c) <= 49
    assert cert.bound(4).lo == 49 and cert.verdict is Verdict.PASS
    assert oracle.chromatic_number(g) == 5


def cograph_cfg(seed):
    return GenConfig(seed=seed, max_vertices=20, max_depth=4, leaf_pool=("K1", "K2", "K3", "K4"),
                     base_pool=("K2", "E2", "E3", "K3"))


@pytest.mark.parametrize("seed", range(40))
def test_depth_on_cographs(seed):
    t = random_optree(cograph_cfg(seed))
    g = realize(t)
    c, cert = color_by_depth(t, X)
    omega, d = oracle.clique_number(g), substitution_depth(t)
    assert cert.omega == omega
    assert is_proper(g, c) and n_colors(c) <= omega ** (d + 1)
    assert oracle.chromatic_number(g) == omega
    assert cert.verdict is Verdict.PASS


def test_depth_rejects_glue_trees():
    with pytest.raises(DomainError):
        color_by_depth(bowtie_tree(), X)


def test_leaf_over_its_bound_is_a_certification_error():
    with pytest.raises(CertificationError):
        color_by_depth(Leaf(C5), parse("const 2"))


def test_base_violation_is_recorded_not_raised():
    # C5 needs 3 colors, but 2^(x-1) allows only 2 at omega 2
    c, cert = color_supermult(c5_of_k2(), Exponential(1))
    assert cert.verdict is Verdict.PASS
    assert cert.notes["base_bound_violations"]


# -- poly ------------------------------------------------------------------------------------

def test_choose_m_examples():
    assert choose_m(4) == 2
    assert choose_m(8) == 4
    with pytest.raises(DomainError):
        choose_m(3)


def test_bucket_example_omega_4():
    assert 4**2 * 2**1 == 32 < (2 * 2) ** 2 * 4**1 == 64
    assert bucket_of(2, 4, 2) == 1
    assert bucket_of(3, 4, 2) == 0
    assert bucket_of(1, 4, 2) == 3


@pytest.mark.parametrize("omega", range(4, 200))
def test_exact_tests_agree_with_high_precision_reals(omega):
    mp.prec = 200
    m = choose_m(omega)
    alpha = (mpf(omega) / 2) ** (mpf(1) / m)
    assert mpf(5) / 4 <= alpha <= mpf(3) / 2
    if m > 1:
        prev = (mpf(omega) / 2) ** (mpf(1) / (m - 1))
        assert not (mpf(5) / 4 <= prev <= mpf(3) / 2)
    for wi in range(1, omega):
        j = bucket_of(wi, omega, m)
        if j == 0:
            assert 2 * wi > omega
        elif j == m + 1:
            assert wi == 1
        else:
            lo = omega / (2 * alpha**j)
            hi = omega / (2 * alpha ** (j - 1))
            assert lo < wi <= hi * (1 + mpf(2) ** -150)
        s = s_index(wi, omega, m)
        assert omega / (2 * alpha**s) < omega - wi
        assert s == 1 or not omega / (2 * alpha ** (s - 1)) < (omega - wi) * (1 - mpf(2) ** -150)
    for j in range(1, m + 1):
        cap = 2 * alpha**j
        for c in range(1, omega + 1):
            if abs(c - cap) > mpf(2) ** -100:
                assert bucket_clique_ok(c, omega, m, j) == (c <= cap)


def test_bucket_cap_matches_real_formula():
    mp.prec = 200
    A = 1
    E = 3 * A + 11
    for omega in (4, 6, 9, 12):
        m = choose_m(omega)
        alpha = (mpf(omega) / 2) ** (mpf(1) / m)
        for j in range(1, m + 1):
            cap = (2 * alpha**j) ** A * (omega / (2 * alpha ** (j - 1))) ** E
            n = int(mp.floor(cap + mpf(2) ** -100))
            assert bucket_cap_ok(n, A, omega, m, j)
            assert not bucket_cap_ok(n + 1, A, omega, m, j)


def test_poly_leaf_only():
    g = mycielski_tower(2)
    c, cert = color_poly(Leaf(g), 2)
    assert n_colors(c) == oracle.chromatic_number(g) and cert.verdict is Verdict.PASS


def test_poly_depth_fallback_on_shallow_trees():
    c, cert = color_poly(c5_of_k2(), 1)
    assert is_proper(realize(c5_of_k2()), c)
    assert [n.method for n in cert.trace.nodes] == ["depth"]


def poly_cfg(seed, leaves=("K1", "K2", "K3", "P3", "C5")):
    return GenConfig(seed=seed, max_vertices=24, max_depth=4,
                     leaf_pool=leaves, base_pool=("K2", "P3", "C5", "E2"))


@pytest.mark.parametrize("seed", range(25))
@pytest.mark.parametrize("A", [1, 2])
def test_poly_random_trees(seed, A):
    # C5 has chi 3 > 2, so it only belongs to a class bounded by x^A for A >= 2
    t = random_optree(poly_cfg(seed, ("K1", "K2", "K3", "P3") + (("C5",) if A >= 2 else ())))
    g = realize(t)
    c, cert = color_poly(t, A)
    assert is_proper(g, c)
    assert cert.verdict is Verdict.PASS
    for node in cert.trace.nodes:
        if node.method != "buckets":
            continue
        E = 3 * A + 11
        assert node.g == node.omega**E
        assert node.total == sum(node.bucket_palettes.values()) <= node.g
        for b in node.blocks:
            assert b["P"] <= node.g


def test_poly_bucket_scheme_runs_on_a_deep_tree():
    inner = Substitute(complete_graph("pq"), {"p": Leaf(complete_graph(3)), "q": Leaf(C5)})
    mid = Substitute(complete_graph("rs"), {"r": inner, "s": Leaf(complete_graph(2))})
    t = Substitute(Graph("uvw", [("u", "v"), ("v", "w")]),
                   {"u": mid, "v": Leaf(complete_graph(2)), "w": Leaf(complete_graph(1))})
    assert substitution_depth(t) == 3
    c, cert = color_poly(t, 2)
    assert is_proper(realize(t), c)
    node = cert.trace.nodes[-1]
    assert node.method == "buckets" and node.alpha == (node.omega, choose_m(node.omega))
    assert node.buckets["u"] == 0 and node.blocks[0]["vertex"] == "u"


# -- supermult --------------------------------------------------------------------------------

def test_supermult_c5_of_k2():
    c, cert = color_supermult(c5_of_k2(), Exponential(1))
    assert is_proper(realize(c5_of_k2()), c)
    assert cert.omega == 4 and cert.bound(4).lo == 128 and n_colors(c) <= 128


def test_supermult_w_inf_is_stable():
    base = Graph("abcd", [("a", "c"), ("b", "c"), ("c", "d"), ("a", "d")])
    kids = {"a": Leaf(complete_graph(4)), "b": Leaf(complete_graph(4)),
            "c": Leaf(complete_graph(1)), "d": Leaf(complete_graph(2))}
    t = Substitute(base, kids)
    c, cert = color_supermult(t, Exponential(1))
    node = cert.trace.nodes[-1]
    assert node.w_inf == ["a", "b"]
    assert base.is_stable(node.w_inf)
    assert is_proper(realize(t), c)


def test_supermult_leaf_only():
    c, cert = color_supermult(Leaf(C5), Exponential(2))
    assert n_colors(c) == 3 and cert.verdict is Verdict.PASS


def test_supermult_rejects_non_supermultiplicative():
    with pytest.raises(DomainError):
        color_supermult(c5_of_k2(), parse("x+1"))


@pytest.mark.parametrize("seed", range(25))
def test_supermult_random_trees(seed):
    t = random_optree(poly_cfg(seed))
    c, cert = color_supermult(t, Exponential(2))
    assert is_proper(realize(t), c) and cert.verdict is Verdict.PASS


# -- clique glue -----------------------------------------------------------------------------

def test_merge_two_triangles():
    g = realize(CliqueGlue(Leaf(complete_graph("abx")), Leaf(complete_graph("xcd")), frozenset("x")))
    out = merge_on_clique(g, {"a": 0, "b": 1, "x": 2}, {"x": 0, "c": 1, "d": 2}, {"x"})
    assert is_proper(g, out) and n_colors(out) == 3


def test_merge_k3_k4_on_edge():
    left, right = complete_graph("abx"), complete_graph("abyz")
    g = realize(CliqueGlue(Leaf(left), Leaf(right), frozenset("ab")))
    c1 = oracle.optimal_coloring(left)
    c2 = {"a": 3, "b": 2, "y": 1, "z": 0}
    out = merge_on_clique(g, c1, c2, {"a", "b"})
    assert is_proper(g, out) and n_colors(out) == 4
    for side, c in ((left, c1), (right, c2)):
        # a renaming: equal colors stay equal, distinct stay distinct
        assert len({(c[v], out[v]) for v in side}) == n_colors(c)


def test_merge_disjoint_union():
    g = realize(CliqueGlue(Leaf(C5), Leaf(complete_graph("xy")), frozenset()))
    out = merge_on_clique(g, oracle.optimal_coloring(C5), {"x": 5, "y": 6}, set())
    assert is_proper(g, out) and n_colors(out) == 3


def test_merge_domain_errors():
    g = realize(CliqueGlue(Leaf(complete_graph("ab")), Leaf(complete_graph("bc")), frozenset("b")))
    with pytest.raises(DomainError):
        merge_on_clique(g, {"a": 0, "b": 0}, {"b": 0, "c": 1}, {"b"})
    with pytest.raises(DomainError):
        merge_on_clique(g, {"a": 0, "b": 1}, {"b": 0, "c": 1}, {"a"})


@pytest.mark.parametrize("seed", range(30))
def test_clique_glue_chi_is_max_of_sides(seed):
    cfg = GenConfig(seed=seed, max_vertices=16, max_depth=4, weights={"leaf": 1, "clique_glue": 3},
                    leaf_pool=("K2", "K3", "P3", "C5", "M2"))
    t = random_optree(cfg)
    g = realize(t)
    c, cert = color_clique_glue(t, parse("x+3"))
    assert is_proper(g, c)
    assert n_colors(c) == max(oracle.chromatic_number(n.graph) for n in iter_nodes(t) if isinstance(n, Leaf))
    assert n_colors(c) == oracle.chromatic_number(g)


# -- k-glue ---------------------------------------------------------------------------------------

def test_kglue_two_triangles():
    t = bowtie_tree()
    c, cert = color_kglue(t, X)
    g = realize(t)
    assert is_proper(g, c) and n_colors(c) <= 4
    assert oracle.chromatic_number(g) == 3
    assert cert.bound(3).lo == 4 and cert.verdict is Verdict.PASS


def test_kglue_extends_precoloring():
    cons = ColoringConstraint(4, precolored={"x": 3})
    c, _ = color_kglue(bowtie_tree(), X, constraint=cons)
    assert c["x"] == 3 and cons.admits(c)


def test_kglue_respects_forbidden_colors():
    cons = ColoringConstraint(4, forbidden={"a": {0}})
    c, _ = color_kglue(bowtie_tree(), X, constraint=cons)
    assert c["a"] != 0 and cons.admits(c) and is_proper(realize(bowtie_tree()), c)


def test_kglue_domain_errors():
    with pytest.raises(DomainError):
        color_kglue(bowtie_tree(), X, constraint=ColoringConstraint(3))
    with pytest.raises(DomainError):
        color_kglue(bowtie_tree(), X, constraint=ColoringConstraint(4, precolored={"x": 0, "a": 1}))
    with pytest.raises(DomainError):
        color_kglue(bowtie_tree(), X, constraint=ColoringConstraint(4, precolored={"x": 9}))
    with pytest.raises(DomainError):
        color_kglue(KGlue(2, Leaf(complete_graph("abx")), Leaf(complete_graph("abc")), frozenset("ab")), X, k=1)


def kglue_cfg(seed, k):
    return GenConfig(seed=seed, max_vertices=20, max_depth=3, weights={"leaf": 1, "k_glue": 3}, k=k,
                     leaf_pool=("K3", "K4", "K5"))


@pytest.mark.parametrize("seed", range(20))
def test_kglue_random_k2(seed):
    t = random_optree(kglue_cfg(seed, 2))
    c, cert = color_kglue(t, X, k=2)
    g = realize(t)
    assert is_proper(g, c) and n_colors(c) <= oracle.clique_number(g) + 7
    for step in cert.trace.steps:
        assert step.budget <= 7
        if step.light_weight is not None:
            assert step.light_weight <= 3


def test_kglue_normalizes_mixed_trees():
    inner = KGlue(1, Leaf(complete_graph("xyz")), Leaf(complete_graph(["x", "p", "q"])), frozenset("x"))
    t = CliqueGlue(inner, Leaf(complete_graph(["y", "r", "s"])), frozenset("y"))
    c, cert = color_kglue(t, X)
    assert is_proper(realize(t), c) and cert.verdict is Verdict.PASS


def test_high_conn_sanity():
    g = mycielski_tower(3)
    leaves = [n.graph for n in iter_nodes(decompose_small_cutsets(g, 1)) if isinstance(n, Leaf)]
    for h in leaves:
        assert h.is_complete() or oracle.vertex_connectivity(h) >= 2
    assert max(oracle.chromatic_number(h) for h in leaves) >= 3


# -- reduction -----------------------------------------------------------------------------------

def test_reduce_trivial_cases():
    t = c5_of_k2()
    w, emb = reduce_to_base(t)
    assert w == realize(t) and all(k == v for k, v in emb.items())
    assert reduce_to_base(Leaf(C5))[0] == C5


def test_reduce_keeps_heavier_glue_side():
    glue = CliqueGlue(Leaf(complete_graph("abx")), Leaf(complete_graph("xcd")), frozenset("x"))
    t = Substitute(complete_graph("pq"), {"p": Leaf(complete_graph(1)), "q": glue})
    w, emb = reduce_to_base(t)
    g = realize(t)
    assert oracle.chromatic_number(g) == 4 == oracle.chromatic_number(w)
    assert len(w) == 4 and w.is_complete()
    assert induced_subgraph(g, emb.values()) == w


def test_reduce_nested_case():
    glue = CliqueGlue(Leaf(complete_graph("abx")), Leaf(complete_graph("abyz")), frozenset("ab"))
    inner = Substitute(Graph("uv", [("u", "v")]), {"u": glue, "v": Leaf(complete_graph(1))})
    t = Substitute(C5, {v: inner if v == "v1" else Leaf(complete_graph(2)) for v in C5})
    w, emb = reduce_to_base(t)
    g = realize(t)
    assert induced_subgraph(g, emb.values()) == w
    assert oracle.chromatic_number(w) == oracle.chromatic_number(g)


@pytest.mark.parametrize("seed", range(40))
def test_substituted_clique_glue_chi_is_max_of_the_two_choices(seed):
    # chi(G[S]) = max(chi(G[H]), chi(G[K])) when S is a clique glue of H and K
    cfg = GenConfig(seed=seed, max_vertices=14, max_depth=3,
                    weights={"leaf": 1, "substitute": 2, "clique_glue": 2},
                    leaf_pool=("K1", "K2", "K3", "P3"), base_pool=("K2", "P3", "C5"))
    t = random_optree(cfg)
    for node in iter_nodes(t):
        if isinstance(node, Substitute):
            for b, child in node.children.items():
                if isinstance(child, CliqueGlue):
                    chis = []
                    for side in (child.left, child.right):
                        alt = Substitute(node.base, {**node.children, b: side})
                        chis.append(oracle.chromatic_number(realize(alt)))
                    assert oracle.chromatic_number(realize(node)) == max(chis)
    w, emb = reduce_to_base(t)
    assert induced_subgraph(realize(t), emb.values()) == w
    assert oracle.chromatic_number(w) == oracle.chromatic_number(realize(t))
    assert {type(n).__name__ for n in iter_nodes(reduce_tree(t))} <= {"Leaf", "Substitute"}


def test_reduce_rejects_kglue():
    with pytest.raises(DomainError):
        reduce_to_base(bowtie_tree())
