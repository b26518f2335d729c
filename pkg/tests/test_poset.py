import itertools
import json

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from networkx.algorithms import isomorphism

from orthoposet.poset import (
    CRITICAL_NAMES,
    Poset,
    PosetError,
    antichain,
    chain,
    critical_poset,
    delete_element,
    disjoint_union,
    find_embedding,
    finiteness_type,
    induced_subposet,
    is_primitive,
    parse_poset,
    primitive,
)


@st.composite
def random_posets(draw, max_size=7):
    n = draw(st.integers(1, max_size))
    elements = [f"x{i}" for i in range(n)]
    # edges only go from lower to higher index, so the relation is acyclic
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Poset.from_relations(elements, [(elements[i], elements[j]) for i, j in chosen])


def as_digraph(p: Poset) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(p.elements)
    g.add_edges_from(p.less)
    return g


def oracle_embeds(pattern: Poset, host: Poset) -> bool:
    # induced subgraph isomorphism of the (transitively closed) order relations
    gm = isomorphism.DiGraphMatcher(as_digraph(host), as_digraph(pattern))
    return gm.subgraph_is_isomorphic()


def test_closure_and_queries():
    p = parse_poset("a<b, b<c, d")
    assert p.lt("a", "c") and not p.lt("c", "a") and not p.comparable("a", "d")
    assert set(p.below("c")) == {"a", "b"} and p.height() == 3
    assert sorted(p.covers()) == [("a", "b"), ("b", "c")]


@settings(max_examples=50, deadline=None)
@given(random_posets())
def test_closure_matches_networkx(p):
    g = as_digraph(p)
    closed = nx.transitive_closure_dag(g)
    assert set(closed.edges()) == set(p.less)
    roundtrip = parse_poset(json.dumps(p.to_json()))
    assert roundtrip == p


@pytest.mark.parametrize(
    "text, message",
    [("a<b, b<a", "cycle"), ('{"elements": ["a", "a"]}', "duplicate"), ('{"elements": ["a"], "relations": [["a", "z"]]}', "unknown")],
)
def test_malformed_posets(text, message):
    with pytest.raises(PosetError, match=message):
        parse_poset(text)


def test_primitive_detection():
    assert is_primitive(primitive(1, 2, 5)) == (1, 2, 5)
    assert is_primitive(antichain("abcd")) == (1, 1, 1, 1)
    assert is_primitive(critical_poset("(N,4)")) is None
    assert is_primitive(disjoint_union(chain("ab"), chain("cde"))) == (2, 3)


def test_critical_sizes():
    sizes = [len(critical_poset(n)) for n in CRITICAL_NAMES]
    assert sizes == [4, 6, 7, 8, 8]
    n4 = critical_poset("N,4")
    assert is_primitive(induced_subposet(n4, ["c1", "c2", "c3", "c4"])) == (4,)


@pytest.mark.parametrize("name", CRITICAL_NAMES)
def test_critical_posets_are_minimal(name):
    p = critical_poset(name)
    v = finiteness_type(p)
    assert v.kind == "Infinite" and v.witness == name
    for a in p.elements:
        assert finiteness_type(delete_element(p, a)).kind == "Finite"


def test_superposet_witness():
    p = parse_poset("a<top, b<top, c<top, d<top, e")
    v = finiteness_type(p)
    assert v.kind == "Infinite" and v.witness == "(1,1,1,1)"
    assert finiteness_type(primitive(1, 2, 4)).kind == "Finite"
    assert finiteness_type(primitive(2, 2, 3)).witness == "(2,2,2)"


@settings(max_examples=120, deadline=None)
@given(random_posets(max_size=6), random_posets(max_size=8))
def test_embedding_search_matches_networkx(pattern, host):
    emb = find_embedding(pattern, host)
    assert (emb is not None) == oracle_embeds(pattern, host)
    if emb is not None:
        assert len(set(emb.values())) == len(emb)
        for a, b in itertools.product(pattern.elements, repeat=2):
            assert pattern.lt(a, b) == host.lt(emb[a], emb[b])


@settings(max_examples=60, deadline=None)
@given(random_posets(max_size=8))
def test_finiteness_agrees_with_oracle(p):
    expected = any(oracle_embeds(critical_poset(n), p) for n in CRITICAL_NAMES)
    assert (finiteness_type(p).kind == "Infinite") == expected
