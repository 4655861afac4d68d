import itertools
import random

import networkx as nx
import pytest

from llskit.dual_graph import DualGraph, GraphAutomorphism

ACCEPTANCE = {}


def star(n_tails: int, center_genus: int = 0) -> DualGraph:
    vs = [("s", center_genus)] + [(f"t{i}", 1) for i in range(1, n_tails + 1)]
    es = [(f"e{i}", ("s", f"t{i}")) for i in range(1, n_tails + 1)]
    return DualGraph(vs, es)


def path(genera) -> DualGraph:
    vs = [(f"v{i}", g) for i, g in enumerate(genera, start=1)]
    es = [(f"e{i}", (f"v{i}", f"v{i + 1}")) for i in range(1, len(genera))]
    return DualGraph(vs, es)


def chain3():
    """Three rational vertices in a row, two elliptic tails on each (genus 6)."""
    vs = [("v1", 0), ("v2", 0), ("v3", 0)] + [(f"t{i}", 1) for i in range(1, 7)]
    es = [("a", ("v1", "v2")), ("b", ("v2", "v3"))]
    es += [(f"e{i}", (f"v{(i + 1) // 2}", f"t{i}")) for i in range(1, 7)]
    return DualGraph(vs, es)


END_SWAP = GraphAutomorphism(
    {"v1": "v3", "v3": "v1", "t1": "t5", "t5": "t1", "t2": "t6", "t6": "t2"},
    {"a": "b", "b": "a", "e1": "e5", "e5": "e1", "e2": "e6", "e6": "e2"},
)


def random_tree(rng: random.Random, n: int, max_genus: int = 3) -> DualGraph:
    vs = [(f"v{i}", rng.randint(0, max_genus)) for i in range(n)]
    if n == 1:
        return DualGraph(vs)
    seq = [rng.randrange(n) for _ in range(n - 2)]
    t = nx.from_prufer_sequence(seq)
    es = [(f"e{k}", (f"v{a}", f"v{b}")) for k, (a, b) in enumerate(t.edges())]
    return DualGraph(vs, es)


def spine_shapes(n_tails: int, max_rational: int = 4):
    """Every rational tree with up to ``max_rational`` vertices and tails placed on it (up to symmetry of the labels)."""
    for m in range(1, max_rational + 1):
        trees = nx.nonisomorphic_trees(m) if m > 1 else [nx.empty_graph(1)]
        for t in trees:
            for assign in itertools.combinations_with_replacement(range(m), n_tails):
                vs = [(f"r{i}", 0) for i in range(m)] + [(f"t{j}", 1) for j in range(n_tails)]
                es = [(f"i{k}", (f"r{a}", f"r{b}")) for k, (a, b) in enumerate(t.edges())]
                es += [(f"e{j}", (f"r{a}", f"t{j}")) for j, a in enumerate(assign)]
                yield DualGraph(vs, es)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        status, title, elapsed = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {status}  {title}  ({elapsed:.2f} s)")


@pytest.fixture
def rng():
    return random.Random(20240611)
