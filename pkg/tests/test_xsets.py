import pytest
from hypothesis import given, strategies as st

from stablenet.canonical import canon_code, equiv_partition
from stablenet.core import XNetwork, lca, validate
from stablenet.errors import BudgetExceeded, InvalidInputError
from stablenet.io import parse_enewick, parse_mulnewick
from stablenet.unfold import unfold
from stablenet.xsets import (XSet, check_witness_paths, count_xsets, display_witness, endorsed_codes,
                             endorsing_xsets, enumerate_xsets, iter_display_witnesses, restrict_to_xset, span,
                             v_m_c, v_m_c_classes, witness_xset, xset_code)

from conftest import random_multree, random_stable


def _small_xsets(m, k):
    return list(enumerate_xsets(m)) if count_xsets(m) <= k else []


def test_fig2_has_four_xsets(fig):
    m = fig("fig2_ii")
    xs = list(enumerate_xsets(m))
    assert len(xs) == count_xsets(m) == 4
    assert len(set(xs)) == 4
    for c in xs:
        c.validate_for(m)
        assert sorted(c.mapping) == ["1", "2", "3"]


def test_limit_is_checked_up_front(fig):
    with pytest.raises(BudgetExceeded) as err:
        next(enumerate_xsets(fig("fig1_unfold"), limit=3))
    assert err.value.count == 9


def test_bad_xset_rejected(fig):
    m = fig("fig2_ii")
    with pytest.raises(InvalidInputError):
        XSet.from_mapping({"1": min(m.mu["1"])}).validate_for(m)
    with pytest.raises(InvalidInputError):
        XSet.from_mapping({"1": min(m.mu["2"]), "2": min(m.mu["2"]), "3": min(m.mu["3"])}).validate_for(m)


@given(st.integers(0, 10**6))
def test_span_matches_lca(seed):
    m = random_multree(seed)
    for c in _small_xsets(m, 64):
        r, verts = span(m, c.leaves)
        assert r == lca(m, c.leaves)
        assert c.leaves <= verts
        assert all(u == r or m.parent(u) in verts for u in verts)


@given(st.integers(0, 10**6))
def test_restriction_maps(seed):
    m = random_multree(seed)
    part = equiv_partition(m)
    for c in _small_xsets(m, 32):
        xm = restrict_to_xset(m, c, part)
        assert validate(xm.m_c, "phylotree").ok
        assert sorted(xm.m_c.taxa) == sorted(m.taxa)
        assert canon_code(xm.m_c) == xset_code(m, c)
        assert xm.xi_plus[xm.m_c_plus.root] == xm.r_c
        for x, v in c.chosen:
            assert xm.xi_plus[xm.m_c_plus.leaf_of[x]] == v
            assert xm.m_c.leaf_of[x] == xm.m_c_plus.leaf_of[x]
        for a in xm.m_c_plus.graph.arcs:
            assert m.parent(xm.xi_plus[a.head]) == xm.xi_plus[a.tail]
        assert all(xm.iota1[v] == v for v in xm.m_c.graph.vertices)
        assert xm.image == frozenset(part.class_of[u] for u in xm.xi_plus.values())


@given(st.integers(0, 10**6))
def test_v_m_c_is_everything_iff_root(seed):
    m = random_multree(seed)
    for c in _small_xsets(m, 32):
        r, _ = span(m, c.leaves)
        assert (v_m_c(m, c) == set(m.graph.vertices)) == (r == m.graph.root)


@given(st.integers(0, 10**6))
def test_image_inside_v_m_c(seed):
    n = random_stable(seed)
    m, _ = unfold(n)
    if count_xsets(m) > 256:
        return
    part = equiv_partition(m)
    for c in enumerate_xsets(m):
        assert restrict_to_xset(m, c, part).image <= v_m_c_classes(m, c, part)


def test_endorsing_xsets_fig2(fig):
    m = fig("fig2_ii")
    t = parse_enewick("((2,3),1);")
    cs = endorsing_xsets(m, t)
    assert len(cs) == 1
    assert not restrict_to_xset(m, cs[0]).injective
    # picking leaf 1 and leaf 2 from different copies of (1,2) yields 13|2 as well
    assert endorsed_codes(m) == {"((1,2),3)", "((1,3),2)", "((2,3),1)"}


def test_triplet_displayed_twice(fig):
    n = fig("fig2_iii")
    t = parse_enewick("((1,2),3);")
    ws = list(iter_display_witnesses(n, t))
    assert len(ws) == 2
    roots = {w.vertex_map[w.tree.root] for w in ws}
    assert n.root in roots and len(roots) == 2
    m, index = unfold(n)
    assert all(check_witness_paths(m, index, w) for w in ws)


def test_display_search_requires_same_taxa(fig):
    with pytest.raises(InvalidInputError):
        display_witness(fig("fig2_iii"), parse_enewick("(1,2);"))
    assert display_witness(fig("fig2_iii"), parse_enewick("(1,3);"), partial=True) is not None


@given(st.integers(0, 10**6))
def test_witness_paths_match_xsets(seed):
    n = random_stable(seed, (4, 6), (1, 3))
    m, index = unfold(n)
    if count_xsets(m) > 128:
        return
    for code in sorted(endorsed_codes(m))[:3]:
        t = parse_enewick(code + ";")
        for w in iter_display_witnesses(n, t):
            assert check_witness_paths(m, index, w)
            assert xset_code(m, witness_xset(index, w)) == code
            for (a, b), path in w.arc_paths.items():
                assert path[0].tail == w.vertex_map[a] and path[-1].head == w.vertex_map[b]
