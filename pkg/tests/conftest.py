import itertools

from hypothesis import strategies as st

from chibound.graph import Graph


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    vs = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(vs, 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(vs, [p for p, k in zip(pairs, keep) if k])


def brute_omega(g: Graph) -> int:
    vs = g.sorted_vertices()
    for r in range(len(vs), 0, -1):
        if any(g.is_clique(c) for c in itertools.combinations(vs, r)):
            return r
    return 0


def brute_chi(g: Graph) -> int:
    vs = g.sorted_vertices()
    if not vs:
        return 0
    for k in range(1, len(vs) + 1):
        for cols in itertools.product(range(k), repeat=len(vs)):
            c = dict(zip(vs, cols))
            if all(c[u] != c[v] for u, v in g.edges()):
                return k
    raise AssertionError("unreachable")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
