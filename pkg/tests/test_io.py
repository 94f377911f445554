import json

import pytest
from hypothesis import given, strategies as st

from stablenet.canonical import multree_isomorphic, xnetwork_isomorphic
from stablenet.core import MulTree, XNetwork
from stablenet.errors import InvalidInputError, ParseError
from stablenet.fixtures import fixture_names, fixture_path, load_fixture
from stablenet.foldup import is_sound
from stablenet.io import (ENewickDoc, dumps, loads, parse_enewick, parse_mulnewick, print_enewick,
                          print_mulnewick, to_dot)

from conftest import random_multree, random_network, random_stable


def test_simple_tree():
    t = parse_enewick("((1,2),3);")
    assert t.is_tree and sorted(t.taxa) == ["1", "2", "3"]
    assert print_enewick(t) == "((1,2),3);"


def test_lengths_comments_and_quotes():
    t = parse_enewick("[a comment]\n(('taxon one':0.5,b:1e-3)inner:2,'it''s');")
    assert sorted(t.taxa) == ["b", "it's", "taxon one"]
    again = parse_enewick(print_enewick(t))
    assert xnetwork_isomorphic(t, again)


def test_hybrid_tags_with_labels():
    n = parse_enewick("((a,(b)x#H1),(#H1,c));")
    assert len(n.hybrids) == 1
    assert sorted(n.taxa) == ["a", "b", "c"]


@pytest.mark.parametrize("text, line, column", [
    ("((1,2),3)", 1, 10),
    ("((1,2),,3);", 1, 8),
    ("((1,2)\n,(3;", 2, 4),
    ("((1,2),3);x", 1, 11),
    ("", 1, 1),
])
def test_syntax_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_enewick(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_degree_violation_names_vertices():
    with pytest.raises(InvalidInputError) as err:
        parse_enewick("(1,(2));")
    assert "tree-outdegree" in str(err.value)
    assert err.value.report.violations[0].vertices
    assert parse_enewick("(1,(2));", strict=False).taxa == ("1", "2")


def test_duplicate_taxon_rejected():
    with pytest.raises(ParseError):
        parse_enewick("((1,1),2);")


def test_doc_wrapper():
    assert ENewickDoc("((1,2),3);").parse().is_tree
    assert ENewickDoc("(1,(2));", strict=False).parse().taxa == ("1", "2")
    with pytest.raises(InvalidInputError):
        ENewickDoc("(1,(2));").parse()


def test_mulnewick():
    m = parse_mulnewick("((1,2),(1,3));")
    assert len(m.mu["1"]) == 2
    assert print_mulnewick(m) == "((1,2),(1,3));"
    odd = parse_mulnewick("((1,1),2);")
    assert isinstance(odd, MulTree) and not is_sound(odd)
    with pytest.raises(ParseError):
        parse_mulnewick("((1,#H1),(#H1,2));")


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_roundtrip(name):
    obj = load_fixture(name)
    text = dumps(obj)
    if isinstance(obj, MulTree):
        assert multree_isomorphic(parse_mulnewick(text), obj)
    else:
        assert xnetwork_isomorphic(parse_enewick(text), obj)
        assert fixture_path(name).read_text().strip() == text
    assert loads(dumps(obj, "json"), "multree" if isinstance(obj, MulTree) else "network") is not None


@given(st.integers(0, 10**6))
def test_enewick_roundtrip(seed):
    n = random_stable(seed) if seed % 3 == 0 else random_network(seed)
    text = print_enewick(n)
    again = parse_enewick(text)
    assert xnetwork_isomorphic(n, again)
    assert print_enewick(again) == text


@given(st.integers(0, 10**6))
def test_mulnewick_roundtrip(seed):
    m = random_multree(seed)
    assert multree_isomorphic(parse_mulnewick(print_mulnewick(m)), m)


@given(st.integers(0, 10**6))
def test_json_roundtrip(seed):
    n = random_network(seed)
    data = json.loads(dumps(n, "json"))
    assert data["type"] == "xnetwork"
    assert loads(json.dumps(data)) == n
    m = random_multree(seed)
    assert multree_isomorphic(loads(dumps(m, "json"), "multree"), m)


def test_bad_json():
    with pytest.raises(ParseError):
        loads('{"type": "xnetwork", ')
    with pytest.raises(InvalidInputError):
        loads('{"type": "xnetwork"}')


def test_dot(fig):
    n = fig("fig2_iii")
    text = to_dot(n, highlight=[(0, 1)])
    assert text.startswith("digraph G {") and text.rstrip().endswith("}")
    assert text.count("->") == len(n.graph.arcs)
    assert "style=dashed" in text
    assert "fillcolor=white" in text
    assert '"3"' in text
