import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import path, random_tree, star
from llskit.dual_graph import (
    DualGraph,
    GraphAutomorphism,
    GraphFamily,
    apply_automorphism,
    check_automorphism,
    contract_edge,
    contract_edges,
    split_at_edge,
    total_genus,
    validate_compact_type,
)
from llskit.errors import AutomorphismError, InputError, NotCompactTypeError


def test_single_vertex_is_compact_type():
    assert validate_compact_type(DualGraph([("v", 2)])).ok


def test_one_edge_is_compact_type():
    assert validate_compact_type(path([0, 0])).ok


def test_parallel_edges_report_cycle():
    g = DualGraph([("v1", 0), ("v2", 0)], [("a", ("v1", "v2")), ("b", ("v1", "v2"))])
    res = validate_compact_type(g)
    assert not res.ok
    assert any("cycle" in d for d in res.diagnostics)


def test_loop_and_disconnection_reported():
    g = DualGraph([("v1", 0), ("v2", 0), ("v3", 1)], [("a", ("v1", "v1")), ("b", ("v1", "v2"))])
    res = validate_compact_type(g)
    assert any("loop" in d for d in res.diagnostics)
    assert any("disconnected" in d for d in res.diagnostics)


def test_edge_to_missing_vertex_rejected():
    with pytest.raises(InputError, match="missing vertex"):
        DualGraph([("v1", 0)], [("e", ("v1", "v9"))])


def test_duplicate_ids_rejected():
    with pytest.raises(InputError):
        DualGraph([("v1", 0), ("v1", 1)])
    with pytest.raises(InputError):
        DualGraph([("v1", 0), ("v2", 0)], [("e", ("v1", "v2")), ("e", ("v2", "v1"))])


@pytest.mark.parametrize(
    "graph, genus",
    [(DualGraph([("v", 4)]), 4), (star(4), 4), (path([1] * 6), 6)],
)
def test_total_genus(graph, genus):
    assert total_genus(graph) == genus


def test_total_genus_needs_tree():
    g = DualGraph([("v1", 0), ("v2", 0)], [("a", ("v1", "v2")), ("b", ("v1", "v2"))])
    with pytest.raises(NotCompactTypeError):
        total_genus(g)


def test_split_examples():
    assert split_at_edge(path([0, 0, 0]), "e1") == ({"v1"}, {"v2", "v3"})
    g = DualGraph([("c", 0), ("a", 0), ("b", 0), ("x", 0)],
                  [("ca", ("c", "a")), ("cb", ("c", "b")), ("cx", ("c", "x"))])
    assert split_at_edge(g, "ca") == ({"a"}, {"c", "b", "x"})
    assert split_at_edge(path([0, 0]), "e1") == ({"v1"}, {"v2"})


def test_contract_examples():
    g = contract_edge(path([1, 1]), "e1")
    assert [(v.id, v.genus) for v in g.vertices] == [("v1", 2)]
    g = contract_edge(path([0, 0, 0]), "e1")
    assert len(g.vertices) == 2 and len(g.edges) == 1
    assert validate_compact_type(g).ok


def test_contract_keeps_marks_and_relabels():
    g = DualGraph([("v1", 0), ("v2", 1)], [("e", ("v1", "v2"))], [("v2", "P")])
    h, relabel = contract_edges(g, ["e"])
    assert relabel == {"v1": "v1", "v2": "v1"}
    assert h.marks_at("v1") == ("P",)


def test_automorphism_examples():
    g = star(3)
    ident = GraphAutomorphism.identity(g)
    image, relabel = apply_automorphism(g, ident)
    assert image == g and all(k == v for k, v in relabel.items())
    swap = GraphAutomorphism({"t1": "t2", "t2": "t1"}, {"e1": "e2", "e2": "e1"})
    image, relabel = apply_automorphism(g, swap)
    assert image == g
    assert relabel["t1"] == "t2"
    assert swap.compose(swap).is_identity()


def test_bad_automorphism_rejected():
    g = DualGraph([("s", 0), ("a", 1), ("b", 2)], [("ea", ("s", "a")), ("eb", ("s", "b"))])
    with pytest.raises(AutomorphismError, match="genus"):
        check_automorphism(g, GraphAutomorphism({"a": "b", "b": "a"}, {"ea": "eb", "eb": "ea"}))
    with pytest.raises(AutomorphismError):
        check_automorphism(star(2), GraphAutomorphism({"t1": "t2", "t2": "t1"}, {}))


def test_family_fiber_graphs():
    g = path([0, 1, 1])
    fam = GraphFamily(g, [("b1", ["e1"]), ("b2", ["e2"]), ("gen", [])])
    assert fam.central_fibers() == ()
    fg, _ = fam.fiber_graph("b1")
    assert len(fg.vertices) == 2
    fg, _ = fam.fiber_graph("gen")
    assert [(v.id, v.genus) for v in fg.vertices] == [("v1", 2)]
    with pytest.raises(InputError):
        GraphFamily(g, [("b", ["nope"])])


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_split_is_bipartition(n, seed):
    g = random_tree(random.Random(seed), n)
    for e in g.edge_ids:
        a, b = split_at_edge(g, e)
        assert a | b == set(g.vertex_ids) and not a & b


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_contraction_preserves_genus(n, seed):
    g = random_tree(random.Random(seed), n)
    total = total_genus(g)
    for e in g.edge_ids:
        assert total_genus(contract_edge(g, e)) == total
    whole, _ = contract_edges(g, g.edge_ids)
    assert [v.genus for v in whole.vertices] == [total]


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8), st.integers(0, 8), st.integers(0, 2**32 - 1))
def test_compact_type_matches_networkx(n, extra, seed):
    rng = random.Random(seed)
    vs = [(f"v{i}", 0) for i in range(n)]
    es = [(f"e{k}", (f"v{rng.randrange(n)}", f"v{rng.randrange(n)}")) for k in range(extra)]
    g = DualGraph(vs, es)
    m = nx.MultiGraph()
    m.add_nodes_from(g.vertex_ids)
    m.add_edges_from(e.ends for e in g.edges)
    expected = nx.is_tree(m) if n else False
    assert validate_compact_type(g).ok == expected
    if validate_compact_type(g).ok:
        assert len(g.edges) == len(g.vertices) - 1


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
def test_automorphism_preserves_invariants(n, seed):
    g = star(n)
    rng = random.Random(seed)
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    a = GraphAutomorphism(
        {f"t{i}": f"t{p}" for i, p in zip(range(1, n + 1), perm)},
        {f"e{i}": f"e{p}" for i, p in zip(range(1, n + 1), perm)},
    )
    image, _ = apply_automorphism(g, a)
    assert validate_compact_type(image).ok
    assert total_genus(image) == total_genus(g)
