import random

import pytest
from hypothesis import given, strategies as st

from stablenet.canonical import equiv_partition, multree_isomorphic, xnetwork_isomorphic
from stablenet.core import validate
from stablenet.errors import NotStableError
from stablenet.foldup import fold_up, is_sound, is_sound_structural, is_stable, kappa, maximal_inextendible_classes
from stablenet.io import parse_mulnewick
from stablenet.unfold import unfold

from conftest import random_multree, random_network, random_stable


def test_fig2_foldup(fig):
    folded, trace = fold_up(fig("fig2_ii"))
    assert xnetwork_isomorphic(folded, fig("fig2_iii"))
    assert len(trace.steps) == 1
    assert trace.steps[0].code == "(1,2)"
    assert not is_stable(fig("fig2_i"))
    assert is_stable(fig("fig2_iii"))


def test_maximal_classes_skip_nested_ones(fig):
    classes = maximal_inextendible_classes(fig("fig2_ii"))
    assert [code for code, _ in classes] == ["(1,2)"]
    assert len(classes[0][1]) == 2


def test_unsound_multree():
    m = parse_mulnewick("((1,1),2);")
    assert not is_sound(m)
    assert not is_sound_structural(m)
    folded, _ = fold_up(m)
    assert folded.has_parallel_arcs
    assert validate(folded, "xnetwork").ok


@given(st.integers(0, 10**6))
def test_soundness_criteria_agree(seed):
    m = random_multree(seed)
    assert is_sound(m) == is_sound_structural(m)


@given(st.integers(0, 10**6), st.integers(0, 100))
def test_fold_order_does_not_matter(seed, order_seed):
    m = random_multree(seed)
    a, _ = fold_up(m)
    b, _ = fold_up(m, random.Random(order_seed))
    assert xnetwork_isomorphic(a, b)


@given(st.integers(0, 10**6))
def test_unfold_inverts_foldup_on_sound_multrees(seed):
    m = random_multree(seed)
    if not is_sound(m):
        return
    folded, _ = fold_up(m)
    assert multree_isomorphic(unfold(folded)[0], m)


@given(st.integers(0, 10**6))
def test_foldup_of_unfold_is_stable(seed):
    n = random_network(seed)
    folded, _ = fold_up(unfold(n)[0])
    assert is_stable(folded)


@given(st.integers(0, 10**6))
def test_kappa_is_a_bijection(seed):
    n = random_stable(seed)
    k = kappa(n)
    assert sorted(k.forward) == sorted(n.tree_vertices)
    assert sorted(k.inverse) == list(range(len(k.partition)))
    for v, c in k.forward.items():
        assert k.inverse[c] == v
        assert set(k.index.fibre(v)) == set(k.partition.classes[c])


def test_kappa_rejects_unstable(fig):
    with pytest.raises(NotStableError):
        kappa(fig("fig2_i"))


def test_fig1_partition(fig):
    m, _ = unfold(fig("fig1"))
    part = equiv_partition(m)
    leaf_classes = {part.class_of[v] for v in m.graph.leaves}
    assert len(part) == 10
    assert len(leaf_classes) == 4
