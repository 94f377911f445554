import pytest
from hypothesis import given, settings, strategies as st

from stablenet.canonical import canon_code, xnetwork_isomorphic
from stablenet.core import validate
from stablenet.errors import BudgetExceeded, InvalidInputError
from stablenet.foldup import is_stable
from stablenet.io import parse_enewick
from stablenet.oracles import (GenConfig, base_tree_codes, displayed_tree_codes, gen_multree, gen_network,
                               gen_tree, oracle_base_tree, oracle_displays, oracle_strongly_displays,
                               oracle_tree_based, oracle_visible, switchings)
from stablenet.unfold import unfold
from stablenet.xsets import display_witness, endorsed_codes

from conftest import random_network


def test_config_checks():
    with pytest.raises(InvalidInputError):
        GenConfig(2)
    with pytest.raises(InvalidInputError):
        GenConfig(4, -1)


def test_triplet_tree():
    t = gen_network(GenConfig(3, 0, 7))
    assert t.is_tree and len(t.taxa) == 3


def test_same_seed_same_instance():
    a = gen_network(GenConfig(6, 3, 11, ensure_stable=True))
    b = gen_network(GenConfig(6, 3, 11, ensure_stable=True))
    assert a == b
    assert gen_multree(GenConfig(5, 2, 3)).graph == gen_multree(GenConfig(5, 2, 3)).graph


@given(st.integers(0, 10**6))
def test_ensure_stable(seed):
    n = gen_network(GenConfig(5, 2, seed, ensure_stable=True))
    assert validate(n, "phylonetwork").ok
    assert is_stable(n)


def test_trivial_truths():
    t = gen_tree(6, 1)
    assert oracle_displays(t, t)
    assert oracle_strongly_displays(t, t)
    assert oracle_base_tree(t, t)
    assert oracle_tree_based(t)
    assert oracle_visible(t, t.root)


def test_switching_budget(fig):
    n = fig("fig1")
    assert len(list(switchings(n))) == 8
    with pytest.raises(BudgetExceeded):
        list(switchings(n, budget=4))


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_two_display_oracles_agree(seed):
    # switching enumeration versus direct embedding search
    n = random_network(seed, (3, 6), (0, 3))
    m, _ = unfold(n)
    candidates = endorsed_codes(m, limit=4096) if len(m.graph.leaves) < 14 else set()
    shown = displayed_tree_codes(n)
    assert shown <= candidates or not candidates
    for code in sorted(candidates)[:6]:
        t = parse_enewick(code + ";")
        assert (display_witness(n, t) is not None) == (code in shown)


@given(st.integers(0, 10**6))
def test_base_trees_are_displayed(seed):
    n = random_network(seed)
    assert base_tree_codes(n) <= displayed_tree_codes(n)
    assert displayed_tree_codes(n, strong=True) <= displayed_tree_codes(n)


def test_fig2_base_tree_oracle(fig):
    # ((1,2),3) is displayed by fig2_i, but every switching producing it strands a tree vertex
    assert base_tree_codes(fig("fig2_i")) == {"((2,3),1)", "((1,3),2)"}
    assert displayed_tree_codes(fig("fig2_i")) == {"((1,2),3)", "((2,3),1)", "((1,3),2)"}
    assert base_tree_codes(fig("fig2_iii")) == {"((1,2),3)"}
