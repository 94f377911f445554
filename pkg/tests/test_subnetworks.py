import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from stablenet.canonical import canon_code, multree_isomorphic, xnetwork_isomorphic
from stablenet.core import MulTree, validate
from stablenet.errors import InvalidInputError
from stablenet.foldup import fold_up
from stablenet.io import parse_enewick, parse_mulnewick
from stablenet.oracles import gen_tree
from stablenet.subnetworks import (displays_mul_triplet, induced_subnetwork, mul_triplets, remove_leaf,
                                   restrict_multree, trinets, triplet_name, triplets, usupp_check)

from conftest import random_multree, random_network, random_stable


def test_remove_cherry_leaf():
    t = parse_enewick("((1,2),(3,4));")
    assert canon_code(remove_leaf(t, "4")) == "((1,2),3)"
    with pytest.raises(InvalidInputError):
        remove_leaf(t, "9")


def test_remove_leaf_below_hybrid(fig):
    n = fig("fig2_iii")
    out = remove_leaf(n, "1")
    assert validate(out, "xnetwork").ok
    assert sorted(out.taxa) == ["2", "3"]


@given(st.integers(0, 10**6), st.integers(0, 100))
def test_leaf_removal_order_does_not_matter(seed, order_seed):
    n = random_network(seed, (5, 8), (0, 3))
    keep = sorted(n.taxa)[:3]
    drop = [x for x in n.taxa if x not in keep]
    random.Random(order_seed).shuffle(drop)
    out = n
    for x in drop:
        out = remove_leaf(out, x)
        assert validate(out, "xnetwork").ok
    assert xnetwork_isomorphic(out, induced_subnetwork(n, keep))
    assert sorted(out.taxa) == keep


def test_induced_subnetwork_on_all_taxa(fig):
    n = fig("fig1")
    assert xnetwork_isomorphic(induced_subnetwork(n, n.taxa), n)
    with pytest.raises(InvalidInputError):
        induced_subnetwork(n, ["1", "2"])


def test_trinets_are_induced_subnetworks(fig):
    n = fig("fig1")
    tr = trinets(n)
    assert sorted(tr) == [tuple(y) for y in itertools.combinations("1234", 3)]
    for y, net in tr.items():
        assert xnetwork_isomorphic(net, induced_subnetwork(n, y))


def test_triplets_of_balanced_tree():
    t = parse_enewick("((a,b),(c,d));")
    names = {triplet_name(x) for x in [("a", "b", "c"), ("a", "b", "d"), ("c", "d", "a"), ("c", "d", "b")]}
    assert {triplet_name(x) for x in ["abc", "abd", "cda", "cdb"]} == names
    assert triplets(t) == {"((a,b),c)", "((a,b),d)", "((c,d),a)", "((c,d),b)"}


def test_triplets_of_network_are_displayed_trees(fig):
    assert triplets(fig("fig2_iii")) == {"((1,2),3)"}
    assert triplets(fig("fig2_i")) == {"((1,2),3)", "((2,3),1)", "((1,3),2)"}


def test_fig5_pair(fig):
    m, mp = fig("fig5_M"), fig("fig5_Mprime")
    assert not multree_isomorphic(m, mp)
    for y in itertools.combinations("1234", 3):
        assert multree_isomorphic(restrict_multree(m, y), restrict_multree(mp, y))
    assert mul_triplets(m) == mul_triplets(mp)
    assert len(mul_triplets(m)) == 21
    f, fp = fold_up(m)[0], fold_up(mp)[0]
    assert not xnetwork_isomorphic(f, fp)
    assert triplets(f) == triplets(fp)


def test_worked_mul_triplet(fig):
    tau = parse_mulnewick("((1,2),1);")
    assert displays_mul_triplet(fig("fig5_M"), tau)
    assert not displays_mul_triplet(fig("fig5_M"), parse_mulnewick("((1,1),2);"))
    with pytest.raises(InvalidInputError):
        displays_mul_triplet(fig("fig5_M"), parse_mulnewick("((1,2),(3,4));"))


@given(st.integers(0, 10**6))
def test_mul_triplets_reduce_to_triplets_on_trees(seed):
    t = gen_tree(random.Random(seed).randint(3, 8), seed)
    m = MulTree(t.graph, {x: {v} for x, v in t.leaf_of.items()})
    assert mul_triplets(m) == triplets(t)


@given(st.integers(0, 10**6))
def test_restriction_drops_exactly_the_other_labels(seed):
    m = random_multree(seed)
    y = sorted(m.taxa)[:2]
    r = restrict_multree(m, y)
    assert sorted(r.taxa) == y
    assert all(len(r.mu[x]) == len(m.mu[x]) for x in y)
    assert validate(r, "multree").ok


def test_fig6_foldup_does_not_commute(fig):
    m = fig("fig6_i")
    a = induced_subnetwork(fold_up(m)[0], "124")
    b = fold_up(restrict_multree(m, "124"))[0]
    assert xnetwork_isomorphic(a, fig("fig6_ii"))
    assert xnetwork_isomorphic(b, fig("fig6_iii"))
    assert not xnetwork_isomorphic(a, b)
    assert a.is_phylogenetic and not b.is_phylogenetic


@settings(max_examples=50)
@given(st.integers(0, 10**6))
def test_usupp(seed):
    n = random_stable(seed, (4, 7), (0, 3)) if seed % 2 else random_network(seed, (4, 7), (0, 3))
    for y in itertools.combinations(sorted(n.taxa), 3):
        assert usupp_check(n, y)
