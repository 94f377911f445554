import pytest
from hypothesis import given, strategies as st

from stablenet.core import Arc, MulTree, PseudoDag, XNetwork, below, lca, subdivide, suppress, validate
from stablenet.errors import InvalidInputError

from conftest import random_network


def test_tree_from_arcs():
    t = XNetwork.from_arcs([("r", "a"), ("r", "3"), ("a", "1"), ("a", "2")])
    assert t.is_tree and t.is_phylogenetic
    assert sorted(t.taxa) == ["1", "2", "3"]
    assert t.root == 0
    assert validate(t, "phylotree").ok


def test_hybrid_and_parallel_arcs():
    n = XNetwork.from_arcs([("r", "a"), ("r", "b"), ("a", "h"), ("a", "h"), ("b", "h"), ("b", "2"), ("h", "1")])
    assert n.has_parallel_arcs and not n.is_phylogenetic
    assert validate(n, "xnetwork").ok
    assert validate(n, "phylonetwork").codes() == ["parallel-arcs"]
    (h,) = n.hybrids
    assert n.graph.indegree(h) == 3
    assert "hybrid-indegree" in validate(n, "binary").codes()


@pytest.mark.parametrize("arcs, code", [
    ([("r", "a"), ("a", "1")], "tree-outdegree"),
    ([("r", "1"), ("r", "2"), ("x", "3"), ("x", "1")], "root-count"),
    ([("r", "h"), ("r", "b"), ("b", "h"), ("h", "1"), ("h", "2"), ("b", "3")], "hybrid-outdegree"),
])
def test_degree_axioms(arcs, code):
    n = XNetwork.from_arcs(arcs, check=False)
    assert code in validate(n).codes()
    with pytest.raises(InvalidInputError):
        XNetwork.from_arcs(arcs)


def test_cycle_detected():
    g = PseudoDag(range(3), [(0, 1), (1, 2), (2, 1)])
    assert "cycle" in validate(g).codes()


def test_multree_validation():
    m = MulTree.from_arcs([("r", "a"), ("r", "b"), ("a", "x"), ("a", "y"), ("b", "z"), ("b", "w")],
                          {"x": "1", "y": "2", "z": "1", "w": "3"})
    assert m.mu["1"] and len(m.mu["1"]) == 2
    bad = MulTree(PseudoDag(range(3), [(0, 1), (1, 2)]), {"1": {2}})
    assert "degree-two" in validate(bad).codes()


def test_subdivide_and_suppress_roundtrip():
    t = XNetwork.from_arcs([("r", "a"), ("r", "3"), ("a", "1"), ("a", "2")])
    arc = t.graph.arcs[0]
    g2, w = subdivide(t.graph, arc)
    assert g2.indegree(w) == 1 and g2.outdegree(w) == 1
    assert suppress(g2, w) == t.graph
    with pytest.raises(InvalidInputError):
        suppress(t.graph, t.root)
    with pytest.raises(InvalidInputError):
        subdivide(t.graph, (99, 100))


def test_below_and_lca():
    t = XNetwork.from_arcs([("r", "a"), ("r", "3"), ("a", "1"), ("a", "2")])
    a = t.graph.parents(t.leaf_of["1"])[0]
    assert below(t, t.root, t.leaf_of["1"])
    assert below(t, a, a)
    assert not below(t, t.leaf_of["1"], a)
    assert lca(t, [t.leaf_of["1"], t.leaf_of["2"]]) == a
    assert lca(t, [t.leaf_of["1"], t.leaf_of["3"]]) == t.root
    with pytest.raises(InvalidInputError):
        lca(t, [t.leaf_of["1"]])


@given(st.integers(0, 10**6))
def test_generated_networks_are_valid(seed):
    n = random_network(seed)
    assert validate(n, "phylonetwork").ok
    assert sorted(n.graph.topological_order()) == sorted(n.graph.vertices)


def test_arc_keys_distinguish_parallel_arcs():
    g = PseudoDag(range(3), [(0, 1), (0, 1), (1, 2)])
    assert sorted(g.arcs) == [Arc(0, 1, 0), Arc(0, 1, 1), Arc(1, 2, 0)]
    assert g.parallel_arcs() == [(0, 1)]
